"""Command line front end: classify, trim and verify.

Exit codes: 0 ok, 1 verification failure, 2 input error.
"""
from __future__ import annotations

import argparse
import itertools
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence

from .complexes import FreeComplex, check_complex, exactness_check
from .dga import DGProduct, check_graded_commutativity, check_leibniz
from .families import (FamilyError, FamilySpec, FixtureMismatchError, PredictionUnavailable,
                       family_resolution, predicted_tuple)
from .field import DEFAULT_CHAR
from .linalg import PreconditionError
from .poly import PolynomialParseError, PolynomialRing, default_ring
from .tor import SEED, UnsupportedInputError, koszul_homology_oracle, trimmed_profile
from .trimming import NotMinimalError, TrimConstructionError, trim, trimmed_ideal_generators

METHODS = ("trim-dg", "koszul-oracle")


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    char: int = DEFAULT_CHAR
    seed: int = SEED
    dmax: Optional[int] = None
    out: Optional[str] = None


@dataclass
class Source:
    """An ideal, optionally with a DG algebra resolution of R/I."""
    label: str
    ring: PolynomialRing
    generators: list
    complex: Optional[FreeComplex] = None
    product: Optional[DGProduct] = None
    family: Optional[FamilySpec] = None


# ---------------------------------------------------------------------------
# inputs


def load_family(text: str, char: int) -> Source:
    spec = FamilySpec.parse(text)
    res = family_resolution(spec, char)
    return Source(str(spec), res.complex.ring, list(res.generators), res.complex, res.product, spec)


def load_ideal(path: str, char: Optional[int]) -> Source:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}")
    if not isinstance(data, dict) or "generators" not in data:
        raise InputError(f"{path}: expected an object with a 'generators' list")
    names = data.get("vars", ["x1", "x2", "x3"])
    if len(names) != 3:
        raise InputError("exactly three variables are supported")
    c = int(data.get("char", DEFAULT_CHAR)) if char is None else char
    ring = default_ring(c) if list(names) == ["x1", "x2", "x3"] else \
        PolynomialRing(default_ring(c).field, 3, names=tuple(names))
    gens = []
    for k, text in enumerate(data["generators"]):
        try:
            gens.append(ring.parse(text))
        except PolynomialParseError as e:
            raise InputError(f"generator {k + 1}: {e}")
    C = P = None
    if "complex" in data:
        C = FreeComplex.from_json(data["complex"], ring)
        P = DGProduct.from_json(C, data.get("product", []))
    return Source(path, ring, gens, C, P)


def parse_sigma(text: Optional[str]) -> List[int]:
    if not text:
        raise InputError("--sigma is required")
    try:
        sigma = sorted({int(s) for s in text.split(",") if s.strip()})
    except ValueError:
        raise InputError(f"bad --sigma {text!r}")
    if not sigma:
        raise InputError("--sigma is empty")
    return sigma


def expand_families(text: str) -> List[FamilySpec]:
    """Family patterns with ranges: ``pfaffian:m=2..3,j=*`` or ``jp:p=3..5``."""
    m = re.fullmatch(r"\s*(\w+)\s*:\s*(.*?)\s*", text)
    if not m:
        raise InputError(f"cannot parse family pattern {text!r}")
    kind = m.group(1).lower()
    ranges = {}
    for part in filter(None, (s.strip() for s in m.group(2).split(","))):
        key, _, val = part.partition("=")
        key, val = key.strip(), val.strip()
        if val == "*":
            ranges[key] = None
        elif ".." in val:
            a, b = val.split("..")
            ranges[key] = list(range(int(a), int(b) + 1))
        else:
            ranges[key] = [int(val)]
    out = []
    if kind == "pfaffian":
        for mm in ranges.get("m") or [2]:
            js = ranges.get("j", None)
            for j in (range(mm + 2) if js is None else js):
                out.append(FamilySpec(kind, m=mm, j=j))
    else:
        for p in ranges.get("p") or [3]:
            out.append(FamilySpec(kind, p=p))
    return out


# ---------------------------------------------------------------------------
# reports


def profile_report(src: Source, gens, prof, method: str) -> dict:
    rep = {"ideal": [str(g) for g in gens], "method": method}
    rep.update(prof.as_dict())
    if prof.diagnostics:
        rep["diagnostics"] = prof.diagnostics
    return rep


def run_classify(src: Source, method: str, cfg: RunConfig) -> dict:
    if method == "trim-dg":
        if src.product is None:
            raise InputError("trim-dg needs a resolution; use --method koszul-oracle for a bare ideal")
        prof = trimmed_profile(src.product, seed=cfg.seed)
    else:
        prof = koszul_homology_oracle(src.ring, src.generators, cfg.dmax, cfg.seed)
    rep = profile_report(src, src.generators, prof, method)
    if src.family is not None:
        rep["family"] = str(src.family)
    return rep


def run_trim(src: Source, sigma: Sequence[int], method: str, cfg: RunConfig) -> dict:
    gens = trimmed_ideal_generators(src.generators, sigma)
    T = None
    if method == "trim-dg":
        if src.product is None:
            raise InputError("trim-dg needs a resolution; use --method koszul-oracle for a bare ideal")
        T = trim(src.complex, src.product, sigma)
        prof = trimmed_profile(T.product, seed=cfg.seed)
    else:
        prof = koszul_homology_oracle(src.ring, gens, cfg.dmax, cfg.seed)
    rep = profile_report(src, gens, prof, method)
    rep["sigma"] = list(sigma)
    rep["predicted"] = None
    rep["agrees"] = None
    if src.family is not None:
        rep["family"] = str(src.family)
        try:
            q1 = T.data.q1 if T is not None else None
            pred = predicted_tuple(src.family, sigma, src.ring, qmaps=q1)
            rep["predicted"] = pred.as_dict()
            rep["agrees"] = pred.agrees(prof)
        except PredictionUnavailable as e:
            rep["prediction_note"] = f"no prediction: {e}"
    return rep


def corrupt(P: DGProduct) -> DGProduct:
    """Copy of P with the sign of its first structure constant flipped."""
    Q = DGProduct(P.complex, P.table)
    for left, right, val in P.constants():
        Q.set(left, right, tuple(-v for v in val))
        break
    return Q


def verify_instance(job) -> dict:
    """Run every check on one (family, sigma) instance."""
    spec_text, sigma, char, dmax, seed, faulty = job
    spec = FamilySpec.parse(spec_text)
    iid = f"{spec}|sigma={','.join(map(str, sigma))}"
    checks = {}
    try:
        res = family_resolution(spec, char)
        PF = corrupt(res.product) if faulty else res.product
        R = res.complex.ring
        T = trim(res.complex, PF, list(sigma))
        checks["check_complex"] = not check_complex(T.complex)
        hom = exactness_check(T.complex, dmax)
        checks["exactness"] = all(v == 0 for row in hom[1:] for v in row)
        checks["leibniz"] = not check_leibniz(T.product) and not check_graded_commutativity(T.product)
        prof = trimmed_profile(T.product, seed=seed)
        oracle = koszul_homology_oracle(R, trimmed_ideal_generators(res.generators, sigma), seed=seed)
        checks["oracle"] = prof.as_dict() == oracle.as_dict()
        try:
            pred = predicted_tuple(spec, sigma, R, qmaps=T.data.q1)
            checks["prediction"] = pred.agrees(prof)
        except PredictionUnavailable:
            checks["prediction"] = None
        result = {"id": iid, "class": prof.cls, "tuple": list(prof.as_tuple())}
    except (TrimConstructionError, NotMinimalError, FixtureMismatchError, ArithmeticError) as e:
        result = {"id": iid, "error": f"{type(e).__name__}: {e}"}
        checks["construction"] = False
    result["checks"] = {k: ("skip" if v is None else "pass" if v else "fail")
                        for k, v in sorted(checks.items())}
    result["status"] = "fail" if "fail" in result["checks"].values() else "pass"
    return result


def run_verify(patterns: Sequence[str], max_sigma: int, sigma: Optional[List[int]],
               cfg: RunConfig, faults: Sequence[str] = (), jobs: int = 1) -> dict:
    work = []
    for pat in patterns:
        for spec in expand_families(pat):
            n = len(family_resolution(spec, cfg.char).generators)
            if sigma is not None:
                sigmas = [tuple(sigma)]
            else:
                sigmas = [s for t in range(1, max_sigma + 1)
                          for s in itertools.combinations(range(1, n + 1), t)]
            for s in sigmas:
                iid = f"{spec}|sigma={','.join(map(str, s))}"
                work.append((str(spec), s, cfg.char, cfg.dmax, cfg.seed, iid in faults))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(verify_instance, work))
    else:
        results = [verify_instance(w) for w in work]
    results.sort(key=lambda r: r["id"])
    failed = [r["id"] for r in results if r["status"] == "fail"]
    return {"instances": results, "total": len(results), "failed": failed}


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="trimdg", description="Tor algebras of trimmed ideals")
    sub = ap.add_subparsers(dest="verb", required=True)

    def common(p):
        p.add_argument("--char", type=int, default=None, help="field characteristic (0 for Q)")
        p.add_argument("--seed", type=int, default=SEED)
        p.add_argument("--dmax", type=int, default=None, help="degree bound for strands")
        p.add_argument("--out", default=None, help="write the JSON report here")

    c = sub.add_parser("classify", help="classify R/I")
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--family")
    g.add_argument("--ideal")
    c.add_argument("--method", choices=METHODS, default=None)
    common(c)

    t = sub.add_parser("trim", help="classify R/tm_sigma(I) and compare with predictions")
    g = t.add_mutually_exclusive_group(required=True)
    g.add_argument("--family")
    g.add_argument("--ideal")
    t.add_argument("--sigma", required=True)
    t.add_argument("--method", choices=METHODS, default=None)
    common(t)

    v = sub.add_parser("verify", help="batch checks over family sweeps")
    v.add_argument("--family", action="append", required=True,
                   help="pattern such as pfaffian:m=2..3,j=* or jp:p=3..5; repeatable")
    v.add_argument("--sigma", default=None, help="fixed index set; default is all small sets")
    v.add_argument("--max-sigma", type=int, default=1)
    v.add_argument("--inject-fault", action="append", default=[],
                   help="instance id whose family product is corrupted")
    v.add_argument("--jobs", type=int, default=1)
    common(v)
    return ap


def emit(report: dict, out: Optional[str]):
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(DEFAULT_CHAR if args.char is None else args.char, args.seed, args.dmax, args.out)
    try:
        if args.verb == "verify":
            sigma = parse_sigma(args.sigma) if args.sigma else None
            report = run_verify(args.family, args.max_sigma, sigma, cfg, args.inject_fault, args.jobs)
            emit(report, cfg.out)
            for r in report["instances"]:
                if r["status"] == "fail":
                    print(f"FAIL {r['id']}: {r.get('error') or r['checks']}", file=sys.stderr)
            return 1 if report["failed"] else 0
        if args.family:
            src = load_family(args.family, cfg.char)
        else:
            src = load_ideal(args.ideal, args.char)
            cfg.char = src.ring.char
        method = args.method or ("trim-dg" if src.product is not None else "koszul-oracle")
        if args.verb == "classify":
            report = run_classify(src, method, cfg)
        else:
            sigma = parse_sigma(args.sigma)
            if sigma[-1] > len(src.generators) or sigma[0] < 1:
                raise InputError(f"sigma {sigma} out of range 1..{len(src.generators)}")
            report = run_trim(src, sigma, method, cfg)
        emit(report, cfg.out)
        return 1 if report.get("agrees") is False else 0
    except (InputError, FamilyError, PolynomialParseError, UnsupportedInputError,
            PreconditionError, NotMinimalError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
