"""``zen``: command-line front door.

Every report is a JSON object carrying ``spec_version`` and the fully
resolved configuration, with numbers rendered to 17 significant digits so
that identical runs produce byte-identical files.

Exit status: 0 ok, 1 malformed input, 2 validation rejection, 3 numerical
non-convergence.
"""
import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import carleson as cz
from . import causality as cl
from . import composition as cp
from . import functions as fz
from .errors import ConvergenceError, SpecFormatError, ValidationError, ZenError
from .measure import BoundaryMeasure
from .norms import norm_via_isometry, zen_norm_direct
from .spaces import ZenSpace, kernel_eval, kernel_norm_sq
from .symbols import Multiplier, Scaling, Sqrt, Identity, Constant, multiplier_from_dict, symbol_from_dict

SPEC_VERSION = "1.0"
# the sup over shifts is a limit; the sweep runs far enough for ~1e-6 relative accuracy
NORM_EPS_SWEEP = (1.0, 0.1, 0.01, 1e-3, 1e-4, 1e-5, 1e-6)
COMMANDS = ("space-info", "kernel", "norm", "compose", "weighted", "carleson", "causality", "constants")


# rendering

def _fmt(x):
    text = format(float(x), ".17g")
    # keep floats visibly floats: 1 -> 1.0
    return text if any(ch in text for ch in ".en") else text + ".0"


def _plain(obj):
    """Convert to JSON-ready values; floats stay floats, non-finite become strings."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _plain(obj.real), "im": _plain(obj.imag)}
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def _dump(obj, indent=0):
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_dump(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_dump(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _dump(v, indent + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, float):
        return _fmt(obj)
    return json.dumps(obj)


def render_json(report):
    return _dump(_plain(report)) + "\n"


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}{k}.")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}{i}.")
    else:
        yield prefix[:-1], obj


ESTIMATE_COLUMNS = ("quantity", "estimate", "stderr", "n", "window", "seed")


def render_csv(report):
    """Key/value rows; reports with Monte Carlo ``estimates`` use the estimate columns instead."""
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    if "estimates" in report:
        out.writerow(ESTIMATE_COLUMNS)
        for row in _plain(report["estimates"]):
            out.writerow([_fmt(row[c]) if isinstance(row[c], float) else row[c] for c in ESTIMATE_COLUMNS])
        return buf.getvalue()
    out.writerow(["key", "value"])
    for k, v in _flatten(_plain(report)):
        out.writerow([k, _fmt(v) if isinstance(v, float) else v])
    return buf.getvalue()


def write_atomic(path, text):
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".zen-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit_plot_data(series, folder):
    """Write one ``<name>.csv`` per ``{name: (x, y)}`` entry; returns the paths."""
    os.makedirs(folder, exist_ok=True)
    paths = []
    for name, (x, y) in series.items():
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.shape != y.shape or not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise ValueError(f"series {name!r} must be finite and of matching length")
        lines = ["x,y"] + [f"{_fmt(a)},{_fmt(b)}" for a, b in zip(x, y)]
        path = os.path.join(folder, f"{name}.csv")
        write_atomic(path, "\n".join(lines) + "\n")
        paths.append(path)
    return paths


# input parsing

def _load_json(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise SpecFormatError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFormatError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def load_space(spec):
    """``hardy``, ``bergman:<alpha>`` or a path to a measure JSON file."""
    if spec == "hardy":
        return ZenSpace.hardy()
    if spec.startswith("bergman:"):
        try:
            alpha = float(spec.split(":", 1)[1])
        except ValueError:
            raise SpecFormatError(f"bad Bergman exponent in {spec!r}") from None
        return ZenSpace.bergman(alpha)
    return ZenSpace.from_measure(BoundaryMeasure.from_dict(_load_json(spec)))


def load_symbol(spec):
    """``sqrt``, ``id``, ``scale:<a>``, ``const:<c>`` or a path to a symbol JSON file."""
    if spec == "sqrt":
        return Sqrt()
    if spec in ("id", "identity"):
        return Identity()
    for prefix, ctor, parse in (("scale:", Scaling, float), ("const:", Constant, _complex_text)):
        if spec.startswith(prefix):
            try:
                return ctor(parse(spec[len(prefix):]))
            except ValueError:
                raise SpecFormatError(f"bad parameter in {spec!r}") from None
    return symbol_from_dict(_load_json(spec))


def load_multiplier(spec):
    if spec is None:
        return Multiplier.constant(1.0)
    return multiplier_from_dict(_load_json(spec))


def _complex_text(text):
    return complex(text.replace(" ", "").replace("i", "j"))


def _complex(text):
    try:
        return _complex_text(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _window(text):
    try:
        x, y = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("window must be 'X,Y'") from None
    return x, y


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None


# commands

def _space_summary(space):
    alpha = space.bergman_alpha
    if space.describe() == "hardy":
        w = "constant 1"
    elif alpha is not None:
        w = f"{_fmt(2.0 ** -alpha * math.gamma(alpha + 1))} t^-{_fmt(alpha + 1)}"
    else:
        terms = [f"{_fmt(2 * math.pi * m)} exp(-{_fmt(2 * r)} t)" for r, m in space.measure.atoms]
        terms += [f"{_fmt(2 * math.pi * c * math.gamma(a + 1) / 2 ** (a + 1))} t^-{_fmt(a + 1)}"
                  for c, a in space.measure.pieces]
        w = " + ".join(terms)
    return {"R": space.R, "w": w, "kind": space.describe()}


def cmd_space_info(args, space):
    d = space.delta2
    out = _space_summary(space)
    out["delta2"] = {"ratio": d.ratio, "satisfied": d.satisfied, "witness_r": d.witness_r, "grid": d.grid}
    out["measure"] = space.measure.to_dict()
    return out


def cmd_kernel(args, space):
    z, zeta = args.z, args.zeta
    out = {"z": z, "zeta": zeta, "value": kernel_eval(space, z, zeta, rtol=args.tol),
           "norm_sq": kernel_norm_sq(space, z, rtol=args.tol)}
    if args.alpha is not None:
        out["closed_form_bergman"] = complex(fz.bergman_kernel(args.alpha, z)(zeta))
    weak = {}
    series = {}
    for name, path in cp.WEAK_NULL_PATHS.items():
        q = cp.weak_null_check(space, zeta, path)
        weak[name] = {"final": q[-1], "below_1e-3": bool(q[-1] < 1e-3)}
        series[f"weak_null_{name}"] = (np.abs(np.asarray(path)), q)
    out["weak_null"] = weak
    if args.plot_data:
        out["plot_data"] = emit_plot_data(series, args.plot_data)
    return out


def cmd_norm(args, space):
    if not args.function:
        raise SpecFormatError("norm needs --function")
    F = fz.from_dict(_load_json(args.function), space)
    out = {"function": F.label}
    if F.density is not None:
        out["isometry_norm"] = norm_via_isometry(space, F)
    est = zen_norm_direct(space, F, args.eps or NORM_EPS_SWEEP, args.tol)
    out["direct_norm"] = est.norm
    out["direct_by_eps"] = [{"eps": e, "norm_sq": v, "abserr": a} for e, v, a in est.by_eps]
    out["monotone"] = est.monotone
    out["flagged"] = est.flagged
    return out


def cmd_compose(args, space):
    phi = load_symbol(args.symbol)
    rep = cp.composition_report(phi, space).to_dict()
    rep["symbol"] = phi.to_dict()
    return rep


def cmd_weighted(args, space):
    phi = load_symbol(args.symbol)
    h = load_multiplier(args.multiplier)
    alpha = -1.0 if args.alpha is None else args.alpha
    crit = cp.weighted_bergman_criterion(h, phi, alpha)
    out = {"alpha": alpha, "bounded": crit.finite, "criterion": crit.to_dict()}
    if space is not None:
        out["membership_threshold"] = cp.min_alpha_membership(args.p, space.R)
        if alpha > out["membership_threshold"] or alpha == out["membership_threshold"] == -1:
            lam = cp.lambda_alpha_estimate(h, phi, alpha, space)
            out["lambda_estimate"] = {"value": lam.value, "witness": lam.witness,
                                      "exceeded_cap": lam.exceeded_cap}
    return out


def cmd_carleson(args, space):
    phi = load_symbol(args.symbol)
    h = load_multiplier(args.multiplier)
    s = cz.PullbackMeasureSampler(space, phi, h, args.p, args.seed, args.n, args.window)
    out = {"window_mass": s.window_mass}
    estimates = []
    if args.rect:
        if len(args.rect) != 4:
            raise SpecFormatError("--rect needs x0,x1,y0,y1")
        e = cz.pullback_mass(s, tuple(args.rect))
        out["pullback_mass"] = {"estimate": e.estimate, "stderr": e.stderr, "hits": e.hits}
        estimates.append(e.row())
    if args.alpha is not None:
        grid = args.anchors or [1.0, 2.0, 0.5 + 1j]
        em = cz.embedding_constant_estimate(s, args.alpha, grid)
        out["embedding"] = {"value": em.value, "witness": em.witness, "exceeded_cap": em.exceeded_cap,
                            "rows": [{"z": z, "quotient": q, "stderr": se} for z, q, se, _ in em.rows]}
        for z, q, se, win in em.rows:
            estimates.append((f"embedding_quotient@{z.real:g}{z.imag:+g}i", q, se, s.n,
                              f"{win[0]:g}x{win[1]:g}", s.seed))
    out["estimates"] = [dict(zip(ESTIMATE_COLUMNS, r)) for r in estimates]
    return out


def cmd_causality(args, space):
    out = {}
    for band in sorted({0, args.band}):
        summ = cl.run_trials(args.trials, args.size, band, args.seed)
        out[f"band_{band}"] = summ.to_dict()
        if args.trial_log:
            os.makedirs(args.trial_log, exist_ok=True)
            cl.write_trial_log(summ, os.path.join(args.trial_log, f"trials_band{band}.csv"))
    return out


def cmd_constants(args, space):
    R = space.R
    ap = cl.alpha_prime_solve(R)
    cc = cl.c_min_solve(R, space)
    out = {"R": R, "alpha_prime": ap.to_dict(), "c": cc.to_dict(),
           "membership_threshold": cp.min_alpha_membership(args.p, R)}
    if args.plot_data:
        t = 1.0
        alpha = 0.0 if args.alpha is None else args.alpha
        r = np.linspace(0.0, 5.0, 501)
        c = cc.c_sufficient
        series = {
            "g_domination": (r, np.exp(-2 * r * t) * (r - (alpha + 1) / (2 * t))),
            "g_doubling": (r, np.exp(-r * t) * (1 - c * np.exp(-r * t))),
        }
        out["plot_data"] = emit_plot_data(series, args.plot_data)
    return out


HANDLERS = {
    "space-info": cmd_space_info, "kernel": cmd_kernel, "norm": cmd_norm, "compose": cmd_compose,
    "weighted": cmd_weighted, "carleson": cmd_carleson, "causality": cmd_causality,
    "constants": cmd_constants,
}
NEEDS_SPACE = {"space-info", "kernel", "norm", "compose", "carleson", "constants"}


def build_parser():
    p = argparse.ArgumentParser(prog="zen", description="Computations in Zen spaces of the right half-plane.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("target", nargs="?", help="space spec (shorthand for --space)")
    p.add_argument("--space", help="'hardy', 'bergman:<alpha>' or a measure JSON file")
    p.add_argument("--symbol", help="'sqrt', 'id', 'scale:<a>', 'const:<c>' or a symbol JSON file")
    p.add_argument("--multiplier", help="multiplier JSON file (default h = 1)")
    p.add_argument("--function", help="function JSON file (norm)")
    p.add_argument("--alpha", type=float, help="Bergman test exponent")
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--window", type=_window, default=cz.DEFAULT_WINDOW, help="truncation window 'X,Y'")
    p.add_argument("--n", type=int, default=1_000_000, help="Monte Carlo samples")
    p.add_argument("--rect", type=_floats, help="rectangle 'x0,x1,y0,y1' for pullback mass")
    p.add_argument("--anchors", type=lambda s: [_complex(v) for v in s.split(",")],
                   help="comma-separated kernel anchors for the embedding estimate")
    p.add_argument("--z", type=_complex, default=1 + 0j)
    p.add_argument("--zeta", type=_complex, default=1 + 0j)
    p.add_argument("--eps", type=_floats, help="decreasing shift sweep for the direct norm")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--size", type=int, default=64, help="matrix size for causality trials")
    p.add_argument("--band", type=int, default=1, help="strict-causality band for the sub-suite")
    p.add_argument("--trial-log", help="directory for causality CSV trial logs")
    p.add_argument("--plot-data", help="directory for CSV plot series")
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    return p


def _config(args):
    cfg = {k: v for k, v in sorted(vars(args).items()) if v is not None and k != "target"}
    if "window" in cfg:
        cfg["window"] = list(cfg["window"])
    return cfg


def run(args):
    """Execute a parsed command; returns ``(report, exit_status)``."""
    if args.target and not args.space:
        args.space = args.target
    space = None
    if args.space:
        space = load_space(args.space)
    elif args.command in NEEDS_SPACE:
        raise SpecFormatError(f"{args.command} needs --space")
    if args.command in ("compose", "weighted", "carleson") and not args.symbol:
        raise SpecFormatError(f"{args.command} needs --symbol")
    body = HANDLERS[args.command](args, space)
    report = {"spec_version": SPEC_VERSION, "command": args.command, "config": _config(args)}
    report.update(body)
    return report, 0


def _fail(args, exc, status):
    doc = {"spec_version": SPEC_VERSION, "error": type(exc).__name__, "message": str(exc), "exit": status}
    witness = getattr(exc, "witness", None)
    if witness is not None:
        doc["witness"] = witness
    if isinstance(exc, ConvergenceError):
        doc["estimate"] = exc.estimate
        doc["error_estimate"] = exc.error
    sys.stderr.write(render_json(doc))
    return status


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        report, status = run(args)
    except SpecFormatError as exc:
        return _fail(args, exc, 1)
    except ValidationError as exc:
        return _fail(args, exc, 2)
    except ConvergenceError as exc:
        return _fail(args, exc, 3)
    except ZenError as exc:
        return _fail(args, exc, 2)
    except ValueError as exc:
        # bad numeric parameters from the command line are validation failures
        return _fail(args, exc, 2)
    text = render_json(report) if args.format == "json" else render_csv(report)
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
