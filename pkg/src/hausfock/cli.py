"""Command-line front end: JSON specs in, CSV and summaries out.

Exit codes: 0 success, 1 a verification suite failed, 2 invalid input,
3 a mathematical precondition does not hold.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

from . import harness
from .config import DEFAULT, INF, QuadConfig, format_float, parse_exponent
from .entire import TaylorPoly
from .errors import MathPreconditionError, ValidationError
from .fockspace import CSV_HEADER, MixedNormParams, mixed_norm
from .hausdorff import (HausdorffOperator, apply_multiplier, apply_quadrature, cesaro_mean,
                        criteria, operator_norm, power, probe_conjecture)
from .measure import MeasureSpec, delta, flett, hardy, moment
from .weights import weight_from_json

_WEIGHT_PARAMS = {"gaussian": ["alpha"], "power": ["l"], "logpow": ["a", "exponent"],
                  "exp": ["beta"], "expexp": []}


# -- input parsing ------------------------------------------------------------

def _load_json(text: str, what: str):
    """Inline JSON, or a path to a JSON file."""
    if os.path.exists(text):
        with open(text, encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed {what} JSON: {exc}") from exc


def _section(obj, key):
    # an emit-spec bundle carries every spec under its own key
    if isinstance(obj, dict) and key in obj and isinstance(obj[key], (dict, list)):
        return obj[key]
    return obj


def parse_measure(text: str) -> MeasureSpec:
    """Preset (``hardy``, ``delta:T[:W]``, ``flett:G``, ``empty``), inline JSON or path."""
    head, _, rest = text.partition(":")
    try:
        if text == "hardy":
            return hardy()
        if text == "empty":
            return MeasureSpec()
        if head == "delta" and rest:
            args = [float(x) for x in rest.split(":")]
            return delta(*args)
        if head == "flett" and rest:
            return flett(float(rest))
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad measure preset {text!r}: {exc}") from exc
    d = _section(_load_json(text, "measure"), "measure")
    if not isinstance(d, dict):
        raise ValidationError("measure JSON must be an object")
    return MeasureSpec.from_json(d)


def parse_weight(text: str):
    """Preset ``kind[:param[:param]]`` (e.g. ``gaussian:1``), inline JSON or path."""
    head, _, rest = text.partition(":")
    if head in _WEIGHT_PARAMS and not os.path.exists(text):
        names = _WEIGHT_PARAMS[head]
        vals = rest.split(":") if rest else []
        if len(vals) != len(names):
            raise ValidationError(f"weight preset {head} takes parameters {names}")
        try:
            return weight_from_json({"kind": head, **{n: float(v) for n, v in zip(names, vals)}})
        except ValueError as exc:
            raise ValidationError(f"bad weight preset {text!r}: {exc}") from exc
    d = _section(_load_json(text, "weight"), "weight")
    if not isinstance(d, dict):
        raise ValidationError("weight JSON must be an object")
    return weight_from_json(d)


def parse_poly(poly: str | None, coeffs: str | None) -> TaylorPoly:
    if poly is not None and coeffs is not None:
        raise ValidationError("give either --poly or --coeffs, not both")
    if coeffs is not None:
        try:
            return TaylorPoly([complex(c.strip().replace(" ", "")) for c in coeffs.split(",")])
        except ValueError as exc:
            raise ValidationError(f"bad coefficient list {coeffs!r}") from exc
    if poly is None:
        raise ValidationError("a polynomial is required (--poly or --coeffs)")
    return TaylorPoly.from_json(_section(_load_json(poly, "polynomial"), "poly"))


def _config(args) -> QuadConfig:
    kw = {}
    if getattr(args, "config", None):
        d = _section(_load_json(args.config, "config"), "config")
        if not isinstance(d, dict):
            raise ValidationError("config JSON must be an object")
        kw.update(d)
    for item in getattr(args, "set", None) or []:
        key, eq, val = item.partition("=")
        if not eq:
            raise ValidationError(f"--set expects key=value, got {item!r}")
        try:
            kw[key] = INF if val == "inf" else json.loads(val)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"--set {key}: value must be a JSON literal") from exc
    if getattr(args, "tol", None) is not None:
        kw["tol"] = args.tol
    try:
        return DEFAULT.with_overrides(**kw)
    except TypeError as exc:
        raise ValidationError(str(exc)) from exc


def _params(args) -> MixedNormParams:
    return MixedNormParams(parse_exponent(args.p), parse_exponent(args.q))


def _apply_spec(args):
    """Fill unset flags from an emit-spec bundle given with --spec."""
    if getattr(args, "spec", None):
        bundle = _load_json(args.spec, "spec")
        if not isinstance(bundle, dict):
            raise ValidationError("spec bundle must be a JSON object")
        for key in ("measure", "weight", "poly", "config"):
            if key in bundle and hasattr(args, key) and getattr(args, key) is None:
                setattr(args, key, json.dumps(bundle[key]))
        for key in ("p", "q", "seed"):
            if key in bundle and hasattr(args, key) and getattr(args, key) is None:
                setattr(args, key, bundle[key])
    for key, default in (("p", "2"), ("q", "2"), ("weight", "gaussian:1")):
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, default)
    if hasattr(args, "measure") and args.command != "emit-spec" and args.measure is None:
        raise ValidationError("--measure is required (directly or through --spec)")


# -- output -------------------------------------------------------------------

def _emit(args, text: str):
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    wr.writerows(rows)
    return buf.getvalue()


def _coeff_rows(f: TaylorPoly):
    return [[n, format_float(float(c.real)), format_float(float(c.imag))]
            for n, c in enumerate(f.coeffs)]


# -- commands -----------------------------------------------------------------

def cmd_moments(args):
    m = parse_measure(args.measure)
    cfg = _config(args)
    rows = []
    for n in range(args.degree + 1):
        v = moment(m, n, cfg, method=args.method)
        rows.append([n, format_float(v), "yes" if args.method == "closed" else "no"])
    _emit(args, _csv(["n", "mu_n", "exact"], rows))


_THEOREMS = {
    "bounded": "bounded iff mu(0,1)=0 and int_[1,inf) dmu/t < inf; the norm is that integral",
    "compact": "compact iff mu((0,1])=0 and int dmu/t < inf, given phi in class C "
               "and ||z^n||^(1/n) -> inf",
    "power-bounded": "power bounded iff a contraction, i.e. int_[1,inf) dmu/t <= 1",
    "UME": "compact case: UME iff int_(1,inf) dmu/t <= 1; otherwise UME when the norm "
           "is < 1 and not when > 1; norm = 1 is open",
}


def cmd_check(args):
    m = parse_measure(args.measure)
    w = parse_weight(args.weight)
    cfg = _config(args)
    prm = _params(args)
    rep = criteria(HausdorffOperator(m, args.degree, cfg), w, prm, cfg)
    comp = "undetermined" if rep.compact is None else ("yes" if rep.compact else "no")
    lines = [rep.summary(), ""]
    lines.append(f"bounded        {'yes' if rep.bounded else 'no'}  [{_THEOREMS['bounded']}]")
    lines.append(f"norm           {format_float(rep.norm_value)}")
    lines.append(f"compact        {comp}  [{_THEOREMS['compact']}]")
    lines.append(f"power-bounded  {'yes' if rep.power_bounded else 'no'}  [{_THEOREMS['power-bounded']}]")
    lines.append(f"UME            {rep.ume_verdict}  [{_THEOREMS['UME']}]")
    lines.append(f"phi in C       {'yes' if rep.weight_in_C else 'no'}")
    lines.append(f"norm growth    {'yes' if rep.monomial_growth else 'no'}  (||z^n||^(1/n) increasing)")
    lines.append(f"mu(0,1)        {format_float(rep.mass_below_one)}")
    lines.append(f"mu({{1}})        {format_float(rep.mass_at_one)}")
    lines.append(f"int dmu/t      {format_float(rep.harmonic_mass)}  (over [1,inf))")
    lines.extend(f"note: {n}" for n in rep.notes)
    _emit(args, "\n".join(lines) + "\n")


def cmd_apply(args):
    m = parse_measure(args.measure)
    f = parse_poly(args.poly, args.coeffs)
    cfg = _config(args)
    op = HausdorffOperator(m, max(f.N, 1), cfg)
    if args.z is None:
        _emit(args, _csv(["n", "re", "im"], _coeff_rows(apply_multiplier(op, f))))
        return
    z = complex(args.z.replace(" ", ""))
    g = apply_multiplier(op, f)
    via_mult = complex(g(z))
    via_quad = apply_quadrature(op, f, z, cfg)
    rows = [["multiplier", format_float(via_mult.real), format_float(via_mult.imag)],
            ["quadrature", format_float(via_quad.real), format_float(via_quad.imag)]]
    _emit(args, _csv(["route", "re", "im"], rows))


def cmd_norm(args):
    w = parse_weight(args.weight)
    prm = _params(args)
    cfg = _config(args)
    rows = []
    if args.monomials is not None:
        for n in range(args.monomials + 1):
            rows.append(mixed_norm(TaylorPoly.monomial(n), prm, w, cfg).csv_row(n, prm, w))
    else:
        f = parse_poly(args.poly, args.coeffs)
        rows.append(mixed_norm(f, prm, w, cfg).csv_row("f", prm, w))
    _emit(args, _csv(CSV_HEADER, rows))


def cmd_iterate(args):
    m = parse_measure(args.measure)
    w = parse_weight(args.weight)
    prm = _params(args)
    cfg = _config(args)
    op = HausdorffOperator(m, 4, cfg)
    op._require_bounded()
    H = operator_norm(op)
    one = TaylorPoly([1.0])
    base = mixed_norm(one, prm, w, cfg).log_value

    def ratio(g):
        r = mixed_norm(g, prm, w, cfg)
        return 0.0 if r.value == 0 else math.exp(r.log_value - base)

    rows = []
    for k in range(1, args.steps + 1):
        rows.append([k, format_float(ratio(power(op, k, one))),
                     format_float(ratio(cesaro_mean(op, k, one))),
                     format_float(harness.geometric_bound(H, k))])
    _emit(args, _csv(["k", "power_ratio", "cesaro_ratio", "geometric_bound"], rows))


def cmd_suite(args):
    cfg = _config(args)
    manifest = _load_json(args.manifest, "manifest") if args.manifest else harness.load_manifest()
    if args.name == "all":
        results = harness.run_all(cfg, args.seed, manifest)
    else:
        if args.name not in manifest.get("suites", {}) and args.name not in harness.SUITES:
            raise ValidationError(f"unknown suite {args.name!r}")
        bundle = manifest.get("suites", {}).get(args.name)
        seed = args.seed if args.seed is not None else manifest.get("seed")
        results = [harness.run_suite(args.name, bundle, cfg, seed)]
    _emit(args, harness.results_csv(results))
    print(harness.summary(results), file=sys.stderr)
    return 0 if all(r.passed for r in results) else 1


def cmd_probe(args):
    m = parse_measure(args.measure)
    w = parse_weight(args.weight)
    prm = _params(args)
    cfg = _config(args)
    f = parse_poly(args.poly, args.coeffs)
    pr = probe_conjecture(HausdorffOperator(m, max(f.N, 1), cfg), f, prm, w, cfg)
    _emit(args, _csv(["n", "re", "im"], _coeff_rows(pr.preimage)))
    fn = mixed_norm(f, prm, w, cfg).value
    print(f"||g|| = {format_float(pr.norm.value)}  ||g||/||f|| = {format_float(pr.norm.value / fn)}"
          f"  residual = {format_float(pr.residual)}  (numerical evidence only)", file=sys.stderr)


def cmd_emit_spec(args):
    """Canonical JSON bundle of the given specs; every part re-parses to the same values."""
    out = {}
    if args.measure:
        out["measure"] = parse_measure(args.measure).to_json()
    if args.weight:
        out["weight"] = parse_weight(args.weight).to_json()
    if args.poly or args.coeffs:
        out["poly"] = parse_poly(args.poly, args.coeffs).to_json()
    prm = _params(args)
    out["p"] = format_float(prm.p) if math.isinf(prm.p) else prm.p
    out["q"] = format_float(prm.q) if math.isinf(prm.q) else prm.q
    out["seed"] = args.seed if args.seed is not None else harness.DEFAULT_SEED
    out["config"] = {k: (format_float(v) if isinstance(v, float) and math.isinf(v) else v)
                     for k, v in _config(args).to_dict().items()}
    _emit(args, json.dumps(out, indent=2, sort_keys=True) + "\n")


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hausfock", description=(
        "Hausdorff operators on weighted mixed-norm Fock spaces."))
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, measure=False, weight=False, poly=False, exps=False):
        if measure:
            p.add_argument("--measure",
                           help="preset (hardy, delta:T[:W], flett:G, empty), inline JSON or path")
        if weight:
            p.add_argument("--weight",
                           help="preset kind[:params] (gaussian:1, power:2, logpow:A:K, exp:B, "
                                "expexp), inline JSON or path")
        if poly:
            p.add_argument("--poly", help="TaylorPoly JSON (inline or path)")
            p.add_argument("--coeffs", help="comma-separated coefficients a_0,a_1,... (1+2j allowed)")
        if exps:
            p.add_argument("--p", help="circle-mean exponent, 'inf' allowed (default 2)")
            p.add_argument("--q", help="radial exponent, 'inf' allowed (default 2)")
        p.add_argument("--spec", help="emit-spec bundle supplying any flag not given")
        p.add_argument("--tol", type=float, help="quadrature tolerance")
        p.add_argument("--config", help="QuadConfig overrides as JSON (inline or path)")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override one QuadConfig field")
        p.add_argument("--out", help="write output here instead of stdout")

    p = sub.add_parser("moments", help="moment table mu_0..mu_N")
    common(p, measure=True)
    p.add_argument("--degree", type=int, default=10)
    p.add_argument("--method", choices=["closed", "quadrature"], default="closed")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("check", help="boundedness, compactness, power-boundedness and UME verdicts")
    common(p, measure=True, weight=True, exps=True)
    p.add_argument("--degree", type=int, default=32)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("apply", help="coefficients of H_mu f, or both evaluation routes at --z")
    common(p, measure=True, poly=True)
    p.add_argument("--z", help="evaluation point (complex, e.g. 0.3+0.2j)")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("norm", help="mixed norm of a polynomial or of z^0..z^N")
    common(p, weight=True, poly=True, exps=True)
    p.add_argument("--monomials", type=int, metavar="N")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("iterate", help="power and Cesaro traces on the constant 1")
    common(p, measure=True, weight=True, exps=True)
    p.add_argument("--steps", type=int, default=10)
    p.set_defaults(func=cmd_iterate)

    p = sub.add_parser("suite", help="run a verification suite (or 'all')")
    p.add_argument("name", help="suite id or 'all'")
    p.add_argument("--manifest", help="suite manifest JSON (defaults to the bundled one)")
    p.add_argument("--seed", type=int)
    common(p)
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("probe", help="preimage g of f under I - H_mu when int dmu/t = 1")
    common(p, measure=True, weight=True, poly=True, exps=True)
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("emit-spec", help="write the parsed specs back as canonical JSON")
    p.add_argument("--measure")
    p.add_argument("--weight")
    p.add_argument("--poly")
    p.add_argument("--coeffs")
    p.add_argument("--p")
    p.add_argument("--q")
    p.add_argument("--seed", type=int)
    p.add_argument("--spec")
    p.add_argument("--tol", type=float)
    p.add_argument("--config")
    p.add_argument("--set", action="append", metavar="KEY=VALUE")
    p.add_argument("--out")
    p.set_defaults(func=cmd_emit_spec)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for name in ("degree", "steps", "monomials"):
        v = getattr(args, name, None)
        if v is not None and v < 0:
            print(f"error: --{name} must be nonnegative", file=sys.stderr)
            return 2
    try:
        _apply_spec(args)
        rc = args.func(args)
    except (ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MathPreconditionError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    return int(rc or 0)


if __name__ == "__main__":
    sys.exit(main())
