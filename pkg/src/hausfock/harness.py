"""Verification suites: brute-force oracles run against every criterion.

Suites are data-driven. ``data/suites.json`` lists the cases per suite; a
caller may pass its own bundle with the same shape. Every suite draws its
random inputs from a fresh generator seeded with ``seed``, so a rerun with the
same seed and config reproduces the results CSV byte for byte.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .config import DEFAULT, INF, QuadConfig, format_float, parse_exponent
from .entire import TaylorPoly, circle_mean, dilate
from .errors import HausfockError, ValidationError
from .fockspace import MixedNormParams, mixed_norm, normalized_monomial
from .hausdorff import (HausdorffOperator, apply_multiplier, cesaro_identity_residual,
                        cesaro_mean, criteria, operator_norm, power, probe_conjecture)
from .measure import MeasureSpec, mass, piece_quad
from .weights import Gaussian, check_class_C, check_class_Wp, weight_from_json

__all__ = [
    "CheckRow", "VerificationSuiteResult", "SUITES", "DEFAULT_SEED", "load_manifest",
    "empirical_opnorm", "random_poly", "run_suite", "run_all", "results_csv", "summary",
    "dominated_bound", "geometric_bound",
]

DEFAULT_SEED = 42
SUITES = ("boundedness", "compactness-witness", "power-law", "cesaro", "dilation",
          "lemma-moments", "weight-classes", "conjecture-probe")
CSV_HEADER = ["suite", "case", "invariant", "residual", "tolerance", "passed", "seed", "note"]


@dataclass(frozen=True)
class CheckRow:
    case: str
    invariant: str
    residual: float
    tolerance: float
    note: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.residual < self.tolerance)


@dataclass
class VerificationSuiteResult:
    name: str
    seed: int
    rows: list[CheckRow] = field(default_factory=list)

    def add(self, case, invariant, residual, tolerance, note=""):
        r = float(residual)
        if math.isnan(r):
            r = INF
        self.rows.append(CheckRow(str(case), invariant, r, float(tolerance), note))

    def flag(self, case, invariant, ok: bool, note=""):
        """Boolean check: residual 0 on success, 1 on failure, tolerance 1/2."""
        self.add(case, invariant, 0.0 if ok else 1.0, 0.5, note)

    @property
    def cases_run(self) -> int:
        return len({r.case for r in self.rows})

    @property
    def max_residual(self) -> float:
        return max((r.residual for r in self.rows), default=0.0)

    @property
    def invariants(self) -> dict[str, bool]:
        out: dict[str, bool] = {}
        for r in self.rows:
            out[r.invariant] = out.get(r.invariant, True) and r.passed
        return out

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def failures(self) -> list[CheckRow]:
        return [r for r in self.rows if not r.passed]


def load_manifest() -> dict:
    text = resources.files("hausfock").joinpath("data/suites.json").read_text(encoding="utf-8")
    return json.loads(text)


def random_poly(rng: np.random.Generator, degree: int) -> TaylorPoly:
    """Standard complex Gaussian coefficients a_0..a_degree."""
    c = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
    return TaylorPoly(c)


def _ratio(op, f, prm, w, cfg) -> float:
    num = mixed_norm(apply_multiplier(op, f), prm, w, cfg)
    den = mixed_norm(f, prm, w, cfg)
    if num.value == 0:
        return 0.0
    return math.exp(num.log_value - den.log_value)


def empirical_opnorm(op: HausdorffOperator, prm: MixedNormParams, w, family,
                     cfg: QuadConfig = DEFAULT, seed: int = DEFAULT_SEED) -> float:
    """max ||H f|| / ||f|| over a test family: a certified lower bound for ||H||.

    ``family`` is ``("monomials", N)`` for z**0..z**N or ``("random", count, degree)``.
    The random family always contains the constant 1 next to ``count`` random
    polynomials of the given degree.
    """
    op._require_bounded()
    kind = family[0]
    if kind == "monomials":
        N = int(family[1])
        fs = (TaylorPoly.monomial(n) for n in range(N + 1))
    elif kind == "random":
        count, degree = int(family[1]), int(family[2])
        rng = np.random.default_rng(seed)
        fs = [TaylorPoly([1.0])] + [random_poly(rng, degree) for _ in range(count)]
    else:
        raise ValidationError(f"unknown test family {kind!r}")
    return max(_ratio(op, f, prm, w, cfg) for f in fs)


def geometric_bound(H: float, k: int) -> float:
    """(1/k) sum_{j=1..k} H**j."""
    if H == 1.0:
        return 1.0
    return H * -math.expm1(k * math.log(H)) / (k * (1.0 - H)) if H > 0 else 0.0


def _near_one(m: MeasureSpec, delta: float) -> float:
    """int over (1, 1+delta] of dmu/t."""
    s = sum(a.w / a.t for a in m.atoms if 1.0 < a.t <= 1.0 + delta)
    for piece in m.densities:
        s += piece.power_integral(1.0, 1.0, 1.0 + delta)
    return s


def dominated_bound(m: MeasureSpec, N: int, harmonic: float) -> float:
    """Upper bound on mu_N - mu({1}) = int_(1,inf) t**(-N) dmu/t.

    Split at 1+delta: t**(-N) <= (1+delta)**(-N) beyond, t**(-N) <= 1 below;
    the best delta on a log grid is taken.
    """
    best = INF
    for delta in np.geomspace(1e-8, 1e3, 221):
        b = _near_one(m, delta) + harmonic * math.exp(-N * math.log1p(delta))
        best = min(best, b)
    return best


def _params(bundle) -> MixedNormParams:
    return MixedNormParams(parse_exponent(bundle.get("p", 2)), parse_exponent(bundle.get("q", 2)))


def _weight(bundle):
    return weight_from_json(bundle["weight"]) if "weight" in bundle else Gaussian(1.0)


def _independent_harmonic(m: MeasureSpec, cfg: QuadConfig) -> float:
    """Harmonic mass by quadrature in u = log t (no closed forms)."""
    total = sum(a.w / a.t for a in m.atoms if a.t >= 1.0)
    for piece in m.densities:
        total += float(np.real(piece_quad(piece, 1.0, cfg=cfg, lo=1.0)))
    return total


# -- suites -------------------------------------------------------------------

def _boundedness(bundle, cfg, seed, res):
    prm, w = _params(bundle), _weight(bundle)
    N = int(bundle.get("monomials", 30))
    for case in bundle["cases"]:
        cid = case["id"]
        m = MeasureSpec.from_json(case["measure"])
        op = HausdorffOperator(m, N, cfg)
        rep = criteria(op, w, prm, cfg)
        # by hand: mu(0,1) = 0 and a finite harmonic mass
        hand = mass(m, "(0,1)") == 0 and math.isfinite(_independent_harmonic(m, cfg))
        res.flag(cid, "verdict-matches-manifest", rep.bounded == bool(case["bounded"]))
        res.flag(cid, "verdict-matches-hand-evaluation", rep.bounded == hand)
        if not rep.bounded:
            continue
        exact = operator_norm(op)
        oracle = _independent_harmonic(m, cfg)
        res.add(cid, "norm-equals-harmonic-mass", abs(exact - oracle) / max(oracle, 1e-300), 1e-8)
        emp = empirical_opnorm(op, prm, w, ("monomials", N), cfg, seed)
        res.add(cid, "empirical-below-exact", max(0.0, emp - exact), 1e-8)
        res.add(cid, "empirical-monomials-match", abs(emp - exact), 1e-8)


def _compactness(bundle, cfg, seed, res):
    prm, w = _params(bundle), _weight(bundle)
    for case in bundle["cases"]:
        cid = case["id"]
        m = MeasureSpec.from_json(case["measure"])
        n_max = int(case["n_max"])
        op = HausdorffOperator(m, n_max, cfg)
        mu = op.multipliers(n_max)
        vals = np.empty(n_max + 1)
        for n in range(n_max + 1):
            h = normalized_monomial(n, prm, w, cfg)
            vals[n] = mixed_norm(apply_multiplier(op, h), prm, w, cfg).value
        res.add(cid, "image-norm-equals-moment",
                float(np.max(np.abs(vals - mu) / np.maximum(mu, 1e-300))), 1e-8)
        target = 0.0 if case["limit"] == "zero" else op.mass_at_one
        res.add(cid, f"limit-at-n={n_max}", abs(vals[-1] - target), float(case["tol"]),
                note=f"value={format_float(float(vals[-1]))}")
        res.add(cid, "nonincreasing", max(0.0, float(np.max(np.diff(vals)))), 1e-12)


def _power_law(bundle, cfg, seed, res):
    prm, w = _params(bundle), _weight(bundle)
    one = TaylorPoly([1.0])
    base = mixed_norm(one, prm, w, cfg).log_value
    for case in bundle["cases"]:
        cid = case["id"]
        op = HausdorffOperator(MeasureSpec.from_json(case["measure"]), 8, cfg)
        H = operator_norm(op)
        worst = 0.0
        for k in range(int(case["k_max"]) + 1):
            r = math.exp(mixed_norm(power(op, k, one), prm, w, cfg).log_value - base)
            worst = max(worst, abs(r - H ** k) / H ** k)
        res.add(cid, "power-ratio-equals-norm-power", worst, float(case["tol"]))


def _cesaro(bundle, cfg, seed, res):
    prm, w = _params(bundle), _weight(bundle)
    spec = bundle["identity"]
    rng = np.random.default_rng(seed)
    ops = [HausdorffOperator(MeasureSpec.from_json(m), int(spec["degree_max"]), cfg)
           for m in spec["measures"]]
    worst = 0.0
    for _ in range(int(spec["triples"])):
        op = ops[int(rng.integers(len(ops)))]
        n = int(rng.integers(1, int(spec["n_max"]) + 1))
        f = random_poly(rng, int(rng.integers(0, int(spec["degree_max"]) + 1)))
        worst = max(worst, cesaro_identity_residual(op, n, f))
    res.add("random-triples", "cesaro-identity", worst, float(spec["tol"]),
            note=f"triples={spec['triples']}")
    one = TaylorPoly([1.0])
    base = mixed_norm(one, prm, w, cfg).log_value
    for case in bundle["cases"]:
        cid = case["id"]
        op = HausdorffOperator(MeasureSpec.from_json(case["measure"]), 8, cfg)
        H = operator_norm(op)
        over = 0.0
        scaled = 0.0
        for k in range(1, int(case["steps"]) + 1):
            tr = math.exp(mixed_norm(cesaro_mean(op, k, one), prm, w, cfg).log_value - base)
            over = max(over, tr - geometric_bound(H, k))
            scaled = max(scaled, k * tr)
        res.add(cid, "trace-below-geometric-bound", max(0.0, over), float(case["tol"]))
        if H < 1:
            # the bound is H/(1-H) / k, so k * trace stays below H/(1-H)
            res.add(cid, "trace-decays-like-1/k", max(0.0, scaled - H / (1 - H)), float(case["tol"]))


def _dilation(bundle, cfg, seed, res):
    rng = np.random.default_rng(seed)
    ps = [parse_exponent(p) for p in bundle["p_values"]]
    radii = [float(r) for r in bundle["radii"]]
    tol = float(bundle["tol"])
    polys = [TaylorPoly([0.0, 1.0])]
    polys += [random_poly(rng, int(rng.integers(1, int(bundle["degree_max"]) + 1)))
              for _ in range(int(bundle["random_polys"]))]
    for case in bundle["cases"]:
        t = float(case["t"])
        worst = -INF
        for f in polys:
            g = dilate(f, t)
            for p in ps:
                for r in radii:
                    a = circle_mean(g, p, r, cfg).value
                    b = circle_mean(f, p, r, cfg).value
                    worst = max(worst, (a - b) / b)
        holds = worst <= tol
        expected = t >= 1.0
        note = ("contraction holds" if holds else "contraction fails") + \
            ("" if expected else " (expected failure for t<1)")
        res.flag(case["id"], "contraction-iff-t>=1", holds == expected,
                 note=f"{note}; max relative excess={format_float(worst)}")


def _lemma_moments(bundle, cfg, seed, res):
    for case in bundle["cases"]:
        cid = case["id"]
        m = MeasureSpec.from_json(case["measure"])
        N = int(case["N"])
        tol = float(case["tol"])
        op = HausdorffOperator(m, N, cfg)
        mu = np.asarray(op.multipliers(N))
        res.add(cid, "moments-nonincreasing", max(0.0, float(np.max(np.diff(mu)))), tol)
        if mu[0] <= 1.0 + cfg.unit_tol:
            # n-th roots are L^n(dmu/t) norms of 1/t; monotone only for mu_0 <= 1
            roots = op.table.roots()[1: N + 1]
            res.add(cid, "roots-nondecreasing", max(0.0, float(-np.min(np.diff(roots)))), tol)
        gap = abs(mu[N] - op.mass_at_one)
        eps = dominated_bound(m, N, op.harmonic)
        res.add(cid, f"mu_{N}-within-dominated-bound", max(0.0, gap - eps), tol,
                note=f"gap={format_float(gap)} bound={format_float(eps)}")


def _weight_classes(bundle, cfg, seed, res):
    for case in bundle["cases"]:
        w = weight_from_json(case["weight"])
        cid = w.label()
        try:
            rc = check_class_C(w)
            res.flag(cid, "class-C", rc.in_class_C == bool(case["C"]),
                     note=f"numeric={rc.numeric['C']}")
        except HausfockError as exc:
            res.flag(cid, "class-C", False, note=type(exc).__name__)
        for p, want in case.get("Wp", {}).items():
            pv = float(p)
            try:
                rw = check_class_Wp(w, pv)
                res.flag(cid, f"class-W_{format_float(pv)}", rw.in_class_Wp[pv] == bool(want),
                         note=f"numeric={rw.numeric[f'W_{pv:g}']}")
            except HausfockError as exc:
                res.flag(cid, f"class-W_{format_float(pv)}", False, note=type(exc).__name__)


def _conjecture_probe(bundle, cfg, seed, res):
    prm, w = _params(bundle), _weight(bundle)
    for case in bundle["cases"]:
        cid = case["id"]
        op = HausdorffOperator(MeasureSpec.from_json(case["measure"]), 16, cfg)
        f = TaylorPoly.from_json(case["f"])
        try:
            pr = probe_conjecture(op, f, prm, w, cfg)
        except HausfockError as exc:
            res.flag(cid, "reconstruction", False, note=type(exc).__name__)
            continue
        res.add(cid, "reconstruction", pr.residual, float(case["tol"]),
                note=f"norm(g)/norm(f)={format_float(pr.norm.value / mixed_norm(f, prm, w, cfg).value)}")
        if "g" in case:
            want = TaylorPoly.from_json(case["g"])
            a, b = pr.preimage._pad(want)
            res.add(cid, "closed-form-division", float(np.max(np.abs(a - b))), 1e-12)


_RUNNERS = {
    "boundedness": _boundedness,
    "compactness-witness": _compactness,
    "power-law": _power_law,
    "cesaro": _cesaro,
    "dilation": _dilation,
    "lemma-moments": _lemma_moments,
    "weight-classes": _weight_classes,
    "conjecture-probe": _conjecture_probe,
}


def run_suite(name: str, bundle: dict | None = None, cfg: QuadConfig = DEFAULT,
              seed: int | None = None) -> VerificationSuiteResult:
    """Run one named suite on ``bundle`` (the bundled manifest entry by default)."""
    if name not in _RUNNERS:
        raise ValidationError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    manifest = None
    if bundle is None or seed is None:
        manifest = load_manifest()
    if bundle is None:
        bundle = manifest["suites"][name]
    if seed is None:
        seed = int(manifest.get("seed", DEFAULT_SEED))
    res = VerificationSuiteResult(name, int(seed))
    try:
        _RUNNERS[name](bundle, cfg, int(seed), res)
    except KeyError as exc:
        raise ValidationError(f"suite bundle for {name!r} lacks field {exc}") from exc
    return res


def run_all(cfg: QuadConfig = DEFAULT, seed: int | None = None,
            manifest: dict | None = None) -> list[VerificationSuiteResult]:
    manifest = manifest or load_manifest()
    if seed is None:
        seed = int(manifest.get("seed", DEFAULT_SEED))
    return [run_suite(n, manifest["suites"][n], cfg, seed) for n in SUITES if n in manifest["suites"]]


def results_csv(results) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(CSV_HEADER)
    for res in results:
        for r in res.rows:
            wr.writerow([res.name, r.case, r.invariant, format_float(r.residual),
                         format_float(r.tolerance), "yes" if r.passed else "no", res.seed, r.note])
    return buf.getvalue()


def summary(results) -> str:
    lines = []
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        lines.append(f"{status} {res.name}: {res.cases_run} cases, {len(res.rows)} checks, "
                     f"max residual {res.max_residual:.3e}, seed {res.seed}")
        for r in res.failures():
            lines.append(f"    failed {r.case} / {r.invariant}: residual {r.residual:.3e} "
                         f">= tol {r.tolerance:.1e} {r.note}".rstrip())
    return "\n".join(lines)
