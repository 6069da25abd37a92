"""Command line front end: ``rlink analyze|klein|lk|family``.

Exit codes: 0 when every check passes, 1 for unreadable input, 2 when a
computed invariant fails a check (or the curve is not a smooth link).
"""

import argparse
import json
import sys
from dataclasses import asdict

import numpy as np

from . import __version__
from .algebra import ToleranceConfig, parse_coefficient
from .curves import ParamPlaneCurve, ParamSpaceCurve, validate_smooth_link
from .errors import InputError, RlinkError
from .invariants import (FamilySpec, family_scan, tightness_check, writhe_bound,
                         writhe_from_diagrams)
from .linking import OSCULATING, HalfInt, blackboard_from_diagram, lk_raw, self_linking_detail
from .projection import generic_diagrams, klein_check, plane_diagram

REPORT_SCHEMA = 1


# ---------------------------------------------------------------------------
# input files


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: not valid JSON ({exc.msg} at line {exc.lineno})") from exc


def _number(x, where):
    try:
        return parse_coefficient(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{where}: cannot read {x!r} as a number") from exc


def _rows(doc, nrows_allowed, where="coeffs"):
    if "coeffs" not in doc:
        raise InputError("coeffs: missing")
    rows = doc["coeffs"]
    if not isinstance(rows, list) or len(rows) not in nrows_allowed:
        raise InputError(f"coeffs: expected {' or '.join(map(str, nrows_allowed))} arrays")
    d = doc.get("degree")
    if d is None:
        d = len(rows[0]) - 1 if isinstance(rows[0], list) else None
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise InputError("degree: must be a positive integer")
    out = []
    for k, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != d + 1:
            raise InputError(f"coeffs[{k}]: expected {d + 1} entries for degree {d}")
        out.append([_number(x, f"coeffs[{k}][{j}]") for j, x in enumerate(row)])
    return np.array(out, dtype=float)


def _orientation(doc):
    o = doc.get("orientation", 1)
    if o not in (1, -1) or isinstance(o, bool):
        raise InputError("orientation: must be 1 or -1")
    return o


def read_curve(path, plane_ok=False):
    doc = _load_json(path)
    if not isinstance(doc, dict):
        raise InputError("top level: expected an object")
    label = doc.get("label", "")
    if not isinstance(label, str):
        raise InputError("label: must be a string")
    rows = _rows(doc, (3, 4) if plane_ok else (4,))
    orientation = _orientation(doc)
    try:
        if len(rows) == 3:
            return ParamPlaneCurve(rows, label=label), doc
        return ParamSpaceCurve(rows, orientation, label), doc
    except RlinkError as exc:
        raise InputError(f"coeffs: {exc}") from exc


def read_family(path):
    doc = _load_json(path)
    if not isinstance(doc, dict):
        raise InputError("top level: expected an object")
    if "lambda_coeffs" not in doc:
        raise InputError("lambda_coeffs: missing")
    lc = doc["lambda_coeffs"]
    if not isinstance(lc, list) or len(lc) != 4:
        raise InputError("lambda_coeffs: expected 4 arrays")
    d = doc.get("degree", len(lc[0]) - 1 if isinstance(lc[0], list) else None)
    if not isinstance(d, int) or d < 1:
        raise InputError("degree: must be a positive integer")
    k = 1
    for r, row in enumerate(lc):
        if not isinstance(row, list) or len(row) != d + 1:
            raise InputError(f"lambda_coeffs[{r}]: expected {d + 1} entries for degree {d}")
        for j, e in enumerate(row):
            if isinstance(e, list):
                if not e:
                    raise InputError(f"lambda_coeffs[{r}][{j}]: empty polynomial")
                k = max(k, len(e))
    arr = np.zeros((4, d + 1, k))
    for r, row in enumerate(lc):
        for j, e in enumerate(row):
            poly = e if isinstance(e, list) else [e]
            for m, x in enumerate(poly):
                arr[r, j, m] = _number(x, f"lambda_coeffs[{r}][{j}][{m}]")
    rng_ = doc.get("range")
    if (not isinstance(rng_, list) or len(rng_) != 2):
        raise InputError("range: expected [lo, hi]")
    lo, hi = (_number(x, f"range[{i}]") for i, x in enumerate(rng_))
    if not lo < hi:
        raise InputError("range: lo must be below hi")
    return FamilySpec(arr, (lo, hi), _orientation(doc), doc.get("label", "")), doc


# ---------------------------------------------------------------------------
# report pieces


def _t(x):
    """JSON-safe parameter value (infinity as a string)."""
    if isinstance(x, complex):
        return [_t(x.real), _t(x.imag)]
    x = float(x)
    return "inf" if np.isinf(x) else x


def _half(h):
    return {"twice_value": h.twice_value}


def diagram_record(D):
    c = D.census
    rec = {
        "center": [float(v) for v in D.center.point],
        "census": {"h": c.h, "e": c.e, "i": c.i},
        "crossings": [{"over": _t(x.over), "under": _t(x.under), "sign": x.sign}
                      for x in D.crossings],
        "solitary": [{"tau": _t(s.tau), "sign": s.sign} for s in D.solitary],
        "flexes": [{"t": _t(f.t), "multiplicity": f.multiplicity} for f in D.flexes],
        "real_writhe": D.real_writhe,
        "solitary_writhe": D.solitary_writhe,
        "blackboard": _half(blackboard_from_diagram(D)),
    }
    if D.bitangents is not None:
        rec["bitangents"] = [{"tau": _t(t), "multiplicity": m} for t, m in D.bitangents]
    return rec


def klein_record(r):
    return {"F": r.F, "B": r.B, "h": r.h, "e": r.e, "i": r.i, "lhs": r.lhs, "rhs": r.rhs,
            "census_closes": r.census_closes, "passed": r.passed}


def _dump(doc, path):
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config(args):
    kw = {"seed": args.seed}
    if getattr(args, "tol", None) is not None:
        kw["geom_tol"] = args.tol
    try:
        return ToleranceConfig(**kw)
    except ValueError as exc:
        raise InputError(f"--tol: {exc}") from exc


# ---------------------------------------------------------------------------
# commands


def analyze(curve, doc, cfg, n_centers):
    """Run the full pipeline; returns (report, failed_check_or_None, diagrams)."""
    report = {"input": doc, "config": asdict(cfg),
              "versions": {"package": __version__, "schema": REPORT_SCHEMA}, "walls": []}
    val = validate_smooth_link(curve, cfg)
    report["validation"] = {
        "ok": val.ok, "reasons": val.reasons,
        "witness": {"node_pairs": [[_t(a), _t(b)] for a, b in val.node_pairs],
                    "stationary": [_t(t) for t in val.stationary]},
    }
    if not val.ok:
        report["failed"] = "validation"
        return report, "validation", []
    failed = None
    diagrams = generic_diagrams(curve, n_centers, cfg, with_bitangents=True)
    report["diagrams"] = [diagram_record(D) for D in diagrams]
    kl = [klein_check(D) for D in diagrams]
    report["klein"] = [klein_record(r) for r in kl]
    if not all(r.passed for r in kl):
        failed = failed or "klein"
    det = self_linking_detail(curve, OSCULATING, cfg)
    report["osc"] = {"twice_value": det.value.twice_value, "raw": det.raw,
                     "raw_half_eps": det.raw_half_eps, "eps": det.eps, "samples": det.samples}
    try:
        w = writhe_from_diagrams(diagrams)
        report["wlambda"] = {"value": w.value, "independent": True,
                             "per_center": [[r, s] for _, r, s in w.per_center],
                             "bound": writhe_bound(curve)}
        if abs(w.value) > writhe_bound(curve):
            failed = failed or "wlambda_bound"
    except RlinkError as exc:
        res = getattr(exc, "result", None)
        report["wlambda"] = {"value": None, "independent": False,
                             "per_center": [[r, s] for _, r, s in res.per_center] if res else []}
        failed = failed or "wlambda_independence"
    if curve.degree >= 3:
        try:
            t = tightness_check(curve, cfg, diagrams=diagrams, osc=det.value)
            report["tightness"] = {
                "osc_value": _half(t.osc_value), "bound": _half(t.bound), "tight": t.tight,
                "mw_verdict": t.mw_verdict, "torsion_positive": t.torsion_positive,
                "torsion_sign": t.torsion_sign, "sign_constancy": t.sign_constancy,
                "flexes_simple": t.flexes_simple,
                "orientation_is_complex": t.orientation_is_complex,
                "chain": [{"b": _half(c.b), "osc_minus_b": _half(c.osc_minus_b),
                           "half_f_plus_h": _half(c.half_f_plus_h), "holds": c.holds}
                          for c in t.chains],
            }
        except RlinkError as exc:
            report["tightness"] = {"error": f"{type(exc).__name__}: {exc}"}
            failed = failed or "tightness"
    if failed:
        report["failed"] = failed
    return report, failed, diagrams


def cmd_analyze(args):
    curve, doc = read_curve(args.path)
    cfg = _config(args)
    report, failed, diagrams = analyze(curve, doc, cfg, args.centers)
    _dump(report, args.report)
    if args.svg and diagrams:
        from .svg import diagram_svg
        with open(args.svg, "w") as fh:
            fh.write(diagram_svg(curve, diagrams[0]))
    print(f"osc = {HalfInt(report['osc']['twice_value'])}" if "osc" in report else
          f"not a smooth link: {'; '.join(report['validation']['reasons'])}", file=sys.stderr)
    return 2 if failed else 0


def cmd_klein(args):
    curve, _ = read_curve(args.path, plane_ok=True)
    cfg = _config(args)
    if isinstance(curve, ParamSpaceCurve):
        D = generic_diagrams(curve, 1, cfg, with_bitangents=True)[0]
    else:
        D = plane_diagram(curve, cfg)
    r = klein_check(D)
    print(r.line())
    return 0 if r.passed else 2


def cmd_lk(args):
    A, _ = read_curve(args.path_a)
    B, _ = read_curve(args.path_b)
    cfg = _config(args)
    raw = lk_raw(A, B, cfg)
    val = HalfInt.from_float(raw)
    print(f"lk = {val}")
    return 0


def cmd_family(args):
    fam, doc = read_family(args.path)
    cfg = _config(args)
    events = family_scan(fam, cfg, steps=args.steps)
    for e in events:
        print(f"{e.kind.value} wall in [{e.lambda_lo:.6f}, {e.lambda_hi:.6f}]: "
              f"d_w = {e.d_wlambda:+d}, d_osc = {e.d_osc}")
    if args.report:
        _dump({"input": doc, "config": asdict(cfg),
               "versions": {"package": __version__, "schema": REPORT_SCHEMA},
               "walls": [{"lambda_lo": e.lambda_lo, "lambda_hi": e.lambda_hi,
                          "d_wlambda": e.d_wlambda, "d_osc": _half(e.d_osc),
                          "kind": e.kind.value} for e in events]}, args.report)
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="rlink", description="Invariants of real rational links in RP^3.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=None, help="geometric tolerance")

    p = sub.add_parser("analyze", help="full report for one curve")
    p.add_argument("path")
    p.add_argument("--centers", type=int, default=10)
    p.add_argument("--report", default=None, help="write JSON here instead of stdout")
    p.add_argument("--svg", default=None, help="draw the first diagram")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("klein", help="check F + B = d(d-2) - 2h - 2i")
    p.add_argument("path")
    common(p)
    p.set_defaults(func=cmd_klein)

    p = sub.add_parser("lk", help="linking number of two curves")
    p.add_argument("path_a")
    p.add_argument("path_b")
    common(p)
    p.set_defaults(func=cmd_lk)

    p = sub.add_parser("family", help="scan a one-parameter family for walls")
    p.add_argument("path")
    p.add_argument("--steps", type=int, default=40)
    p.add_argument("--report", default=None)
    common(p)
    p.set_defaults(func=cmd_family)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except RlinkError as exc:
        print(f"check failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
