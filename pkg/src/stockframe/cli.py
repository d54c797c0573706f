"""Command-line front end.

Flags are validated before any numeric work, and the heavy imports
happen only after the STOCKFRAME_THREADS cap is applied to the usual
thread-count environment variables, so BLAS and FFT pools obey it.

Numbers print as exact shortest round-trip decimals in text and JSON
alike; identical flags and inputs give byte-identical output.  Exit
codes: 0 success, 2 validation or input-file error, 3 a frame check
failed (nonpositive certified lower bound, inadmissible stack,
reconstruction over tolerance, or a selftest criterion failure).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CHECK = 3

_THREAD_VARS = (
    "OMP_NUM_THREADS",
    "OPENBLAS_NUM_THREADS",
    "MKL_NUM_THREADS",
    "VECLIB_MAXIMUM_THREADS",
    "NUMEXPR_NUM_THREADS",
)


def _apply_thread_cap() -> None:
    raw = os.environ.get("STOCKFRAME_THREADS")
    if raw is None or raw == "":
        return
    try:
        cap = int(raw)
    except ValueError:
        cap = 0
    if cap < 1:
        raise ValueError(f"STOCKFRAME_THREADS must be a positive integer, got {raw!r}")
    for var in _THREAD_VARS:
        os.environ[var] = str(cap)


def _r(x) -> str:
    return repr(float(x))


def _alpha_arg(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    if not 0 <= value <= 1:
        raise argparse.ArgumentTypeError(f"alpha must lie in [0, 1], got {text}")
    return value


def _window_arg(text: str) -> str:
    if text == "gaussian":
        return text
    if text.startswith("tgauss:"):
        try:
            eps = float(text.split(":", 1)[1])
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"bad taper width in {text!r}") from exc
        if not eps > 0:
            raise argparse.ArgumentTypeError("taper width must be positive")
        return text
    raise argparse.ArgumentTypeError("window must be 'gaussian' or 'tgauss:EPS'")


def _build_window(token: str):
    from . import window
    if token == "gaussian":
        return window.gaussian_window()
    return window.truncated_gaussian(float(token.split(":", 1)[1]))


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def _emit_json(payload) -> int:
    sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    return EXIT_OK


def _print(lines) -> None:
    for line in lines:
        sys.stdout.write(line + "\n")


# ---------------------------------------------------------------- partition

def cmd_partition(args) -> int:
    from .partition import build_partition
    part = build_partition(args.alpha, args.pmax)
    rows = [{"p": iv.p, "start": iv.start, "stop": iv.stop, "width": iv.width}
            for iv in part.intervals]
    payload = {"alpha": str(args.alpha), "p_max": args.pmax, "intervals": rows}
    if args.json:
        return _emit_json(payload)
    if args.csv:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["p", "start", "stop", "width"])
        for row in rows:
            writer.writerow([row["p"], row["start"], row["stop"], row["width"]])
        return EXIT_OK
    _print([f"alpha = {payload['alpha']}, p_max = {args.pmax}",
            f"{'p':>4} {'start':>12} {'stop':>12} {'width':>10}"])
    _print(f"{r['p']:>4} {r['start']:>12} {r['stop']:>12} {r['width']:>10}" for r in rows)
    return EXIT_OK


# -------------------------------------------------------------------- basis

def _element_payload(args):
    from . import basis
    from .spectral import to_spectrum
    elem = basis.basis_element(args.alpha, basis.BasisIndex(args.p, args.tau), args.n)
    spectrum = to_spectrum(elem)
    conc = basis.concentration(args.alpha, basis.BasisIndex(args.p, args.tau), args.n)
    layout = basis.band_layout(args.alpha, args.n)
    lo, hi = layout.bands[args.p]
    payload = {
        "alpha": str(args.alpha),
        "p": args.p,
        "tau": args.tau,
        "n": args.n,
        "band_lo": lo,
        "band_hi": hi,
        "width": hi - lo,
        "time_norm": float(elem.norm()),
        "concentration": float(conc),
    }
    return elem, spectrum, payload


def _write_profiles(base: str, times, time_values, freqs, freq_values) -> list[str]:
    from .containers import write_csv_signal
    tpath, fpath = base + ".time.csv", base + ".freq.csv"
    write_csv_signal(tpath, times, time_values, index_name="t")
    write_csv_signal(fpath, freqs, freq_values, index_name="omega")
    return [tpath, fpath]


def cmd_basis(args) -> int:
    elem, spectrum, payload = _element_payload(args)
    if args.out:
        payload["files"] = _write_profiles(args.out, elem.grid.times(), elem.values,
                                           elem.grid.frequencies(), spectrum.coeffs)
    if args.json:
        return _emit_json(payload)
    lines = [
        f"alpha = {payload['alpha']}, p = {args.p}, tau = {args.tau}, n = {args.n}",
        f"band = [{payload['band_lo']}, {payload['band_hi']}), width = {payload['width']}",
        f"time_norm = {_r(payload['time_norm'])}",
        f"concentration = {_r(payload['concentration'])}",
    ]
    if args.out:
        lines.append("wrote " + ", ".join(payload["files"]))
    _print(lines)
    return EXIT_OK


def cmd_basis_check(args) -> int:
    from . import basis
    layout = basis.band_layout(args.alpha, args.n)
    dev = basis.gram_deviation(args.alpha, args.n)
    clipped = [p for p in layout.p_list
               if p and layout.width(p) < layout.partition.interval(p).width]
    best, where = None, None
    for idx in layout.indices():
        if idx.p in clipped:
            continue
        c = basis.concentration(args.alpha, idx, args.n)
        if best is None or c < best:
            best, where = c, idx
    payload = {
        "alpha": str(args.alpha),
        "n": args.n,
        "elements": sum(layout.width(p) for p in layout.p_list),
        "gram_deviation": float(dev),
        "min_concentration": float(best),
        "argmin_p": where.p,
        "argmin_tau": where.tau,
        "clipped_bands": clipped,
    }
    if args.json:
        return _emit_json(payload)
    lines = [
        f"alpha = {payload['alpha']}, n = {args.n}, elements = {payload['elements']}",
        f"gram_deviation = {_r(dev)}",
        f"min_concentration = {_r(best)} at (p, tau) = ({where.p}, {where.tau})",
    ]
    if clipped:
        lines.append(f"clipped bands skipped in concentration scan: {clipped}")
    _print(lines)
    return EXIT_OK


# -------------------------------------------------------------------- stack

def cmd_stack(args) -> int:
    import numpy as np

    from .containers import write_sfr1
    from .spectral import SpectralSignal
    from .window import admissibility, build_stack, stack_sum_bounds
    win = _build_window(args.window)
    stack = build_stack(win, args.mu, args.alpha, args.n)
    rep = admissibility(stack)
    sb = stack_sum_bounds(stack)
    payload = {
        "alpha": str(args.alpha),
        "mu": float(args.mu),
        "n": args.n,
        "window": args.window,
        "bands": len(stack.p_list),
        "p_min": stack.p_list[0],
        "p_max": stack.p_list[-1],
        "c1_sup": float(rep.c1),
        "c2_overlap": int(rep.c2),
        "c3_floor": float(rep.c3),
        "admissible": bool(rep.passed),
        "painless_support": bool(rep.painless),
        "a_low": float(sb.a_low),
        "b_high": float(sb.b_high),
    }
    if args.dump:
        grid = stack.grid
        for i, p in enumerate(stack.p_list):
            write_sfr1(args.dump, SpectralSignal(grid, stack.bands[p].astype(np.complex128)),
                       append=i > 0)
        payload["dump"] = args.dump
    code = EXIT_OK if rep.passed else EXIT_CHECK
    if args.json:
        _emit_json(payload)
        return code
    if args.report:
        lines = [
            f"alpha = {payload['alpha']}, mu = {_r(args.mu)}, window = {args.window}, n = {args.n}",
            f"bands = {payload['bands']} (p = {payload['p_min']} .. {payload['p_max']})",
            f"c1_sup = {_r(rep.c1)}",
            f"c2_overlap = {rep.c2}",
            f"c3_floor = {_r(rep.c3)}",
            f"admissible = {rep.passed}, painless_support = {rep.painless}",
            f"a_low = {_r(sb.a_low)}",
            f"b_high = {_r(sb.b_high)}",
        ]
    else:
        lines = [f"bands = {payload['bands']}, admissible = {rep.passed}, "
                 f"a_low = {_r(sb.a_low)}, b_high = {_r(sb.b_high)}"]
    if args.dump:
        lines.append(f"wrote {payload['bands']} frequency-domain records to {args.dump}")
    _print(lines)
    return code


# ------------------------------------------------------------- frame-bounds

def cmd_frame_bounds(args) -> int:
    from . import frame1d
    win = _build_window(args.window)
    spec = frame1d.make_frame_spec(win, args.mu, args.q, args.alpha, args.n,
                                   walnut_k_max=args.kmax)
    rep = frame1d.walnut_bounds(spec)
    payload = {
        "alpha": str(args.alpha),
        "mu": float(args.mu),
        "q": args.q,
        "n": args.n,
        "window": args.window,
        "k_max": rep.k_max,
        "h0_inf": rep.h0_inf,
        "h0_sup": rep.h0_sup,
        "h_tail": rep.h_tail,
        "nu": rep.nu,
        "walnut_lower": rep.lower,
        "walnut_upper": rep.upper,
    }
    frame_ok = rep.lower > 0
    if args.n <= frame1d.EIGEN_SIZE_CAP:
        eig = frame1d.frame_bounds_eigen(spec)
        payload["eigen_lower"] = eig.lower
        payload["eigen_upper"] = eig.upper
        frame_ok = frame_ok and eig.lower > 0
    if args.json:
        _emit_json(payload)
        return EXIT_OK if frame_ok else EXIT_CHECK
    lines = [
        f"alpha = {payload['alpha']}, mu = {_r(args.mu)}, q = {args.q}, "
        f"window = {args.window}, n = {args.n}",
        f"h0_inf = {_r(rep.h0_inf)}",
        f"h0_sup = {_r(rep.h0_sup)}",
        f"h_tail = {_r(rep.h_tail)} (k_max = {rep.k_max})",
        f"walnut_lower = {_r(rep.lower)}",
        f"walnut_upper = {_r(rep.upper)}",
    ]
    if "eigen_lower" in payload:
        lines.append(f"eigen_lower = {_r(payload['eigen_lower'])}")
        lines.append(f"eigen_upper = {_r(payload['eigen_upper'])}")
    if not frame_ok:
        lines.append("frame check FAILED: certified lower bound is not positive")
    _print(lines)
    return EXIT_OK if frame_ok else EXIT_CHECK


# ------------------------------------------------------------------ element

def cmd_element(args) -> int:
    from . import frame1d
    from .spectral import from_spectrum
    win = _build_window(args.window)
    spec = frame1d.make_frame_spec(win, args.mu, args.q, args.alpha, args.n)
    elem = frame1d.frame_element(spec, args.p, args.k)
    times = from_spectrum(elem)
    payload = {
        "alpha": str(args.alpha),
        "mu": float(args.mu),
        "q": args.q,
        "n": args.n,
        "window": args.window,
        "p": args.p,
        "k": args.k,
        "k_count": spec.k_count(args.p),
        "freq_norm": float(elem.norm()),
        "files": _write_profiles(args.out, elem.grid.times(), times.values,
                                 elem.grid.frequencies(), elem.coeffs),
    }
    if args.json:
        return _emit_json(payload)
    _print([
        f"alpha = {payload['alpha']}, p = {args.p}, k = {args.k} of {payload['k_count']}",
        f"freq_norm = {_r(payload['freq_norm'])}",
        "wrote " + ", ".join(payload["files"]),
    ])
    return EXIT_OK


# ---------------------------------------------------------------- roundtrip

def cmd_roundtrip(args) -> int:
    from . import frame1d
    from .containers import read_sfr1, write_sfr1
    from .spectral import SpectralSignal, from_spectrum
    signal = read_sfr1(args.infile)
    if signal.grid.size != args.n:
        raise ValueError(f"--n {args.n} does not match input grid size {signal.grid.size}")
    win = _build_window(args.window)
    spec = frame1d.make_frame_spec(win, args.mu, args.q, args.alpha, args.n)
    rec, rel = frame1d.reconstruct(spec, signal)
    payload = {
        "alpha": str(args.alpha),
        "mu": float(args.mu),
        "q": args.q,
        "n": args.n,
        "window": args.window,
        "rel_err": float(rel),
        "tol": float(args.tol),
    }
    if args.out:
        out_sig = rec if isinstance(signal, SpectralSignal) else from_spectrum(rec)
        write_sfr1(args.out, out_sig)
        payload["out"] = args.out
    code = EXIT_OK if rel <= args.tol else EXIT_CHECK
    if args.json:
        _emit_json(payload)
        return code
    lines = [f"rel_err = {_r(rel)} (tol = {_r(args.tol)})"]
    if args.out:
        lines.append(f"wrote reconstruction to {args.out}")
    if code != EXIT_OK:
        lines.append("frame check FAILED: reconstruction error above tolerance")
    _print(lines)
    return code


# --------------------------------------------------------------------- tile

def cmd_tile(args) -> int:
    from .tiling import admissible_ells, build_tiling
    til = build_tiling(args.d, args.pmax)
    rows = []
    for box in til.boxes:
        rows.append({
            "p": box.p,
            "ell": None if box.ell is None else list(box.ell),
            "lo": [lo for lo, _ in til.axis_ranges(box)],
            "hi": [hi for _, hi in til.axis_ranges(box)],
            "points": til.point_count(box),
        })
    payload = {
        "d": args.d,
        "p_max": args.pmax,
        "boxes": len(rows),
        "boxes_per_level": len(admissible_ells(args.d)),
        "table": rows,
    }
    if args.json:
        return _emit_json(payload)
    lines = [f"d = {args.d}, p_max = {args.pmax}, boxes = {payload['boxes']} "
             f"({payload['boxes_per_level']} per level + DC)"]
    for row in rows:
        ell = "DC" if row["ell"] is None else "(" + ",".join(str(e) for e in row["ell"]) + ")"
        box_str = " x ".join(f"[{lo},{hi})" for lo, hi in zip(row["lo"], row["hi"]))
        lines.append(f"p={row['p']:>2} ell={ell:<12} {box_str}  points={row['points']}")
    _print(lines)
    return EXIT_OK


# -------------------------------------------------------------- roundtrip2d

def cmd_roundtrip2d(args) -> int:
    from . import tiling
    from .containers import DOMAIN_TIME, read_sfr2, write_sfr2
    values, domain = read_sfr2(args.infile)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise ValueError(f"expected a square 2D field, got shape {values.shape}")
    if values.shape[0] != args.n:
        raise ValueError(f"--n {args.n} does not match input size {values.shape[0]}")
    fhat = tiling.to_spectrum_nd(values) if domain == DOMAIN_TIME else values
    win = _build_window(args.window)
    spec = tiling.make_nd_frame_spec(win, args.mu, args.q, 2, args.n, p_max=args.pmax)
    rec, rel = tiling.reconstruct_nd(spec, fhat)
    payload = {
        "mu": float(args.mu),
        "q": args.q,
        "n": args.n,
        "window": args.window,
        "p_max": spec.tiling.p_max,
        "rel_err": float(rel),
        "tol": float(args.tol),
    }
    if args.out:
        out_vals = tiling.from_spectrum_nd(rec) if domain == DOMAIN_TIME else rec
        write_sfr2(args.out, out_vals, domain)
        payload["out"] = args.out
    code = EXIT_OK if rel <= args.tol else EXIT_CHECK
    if args.json:
        _emit_json(payload)
        return code
    lines = [f"rel_err = {_r(rel)} (tol = {_r(args.tol)})"]
    if args.out:
        lines.append(f"wrote reconstruction to {args.out}")
    if code != EXIT_OK:
        lines.append("frame check FAILED: reconstruction error above tolerance")
    _print(lines)
    return code


# ----------------------------------------------------------------- selftest

def _criteria_arg(text: str) -> list[int]:
    try:
        numbers = sorted({int(tok) for tok in text.split(",") if tok.strip()})
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad criteria list {text!r}") from exc
    if not numbers or not all(1 <= n <= 13 for n in numbers):
        raise argparse.ArgumentTypeError("criteria numbers must lie in 1..13")
    return numbers


def cmd_selftest(args) -> int:
    from .acceptance import run_all
    results = run_all(args.criteria)
    payload = {
        "seed": 53391,
        "passed": all(r.passed for r in results),
        "results": [
            {"number": r.number, "name": r.name, "passed": r.passed,
             "detail": r.detail, "elapsed": float(r.elapsed)}
            for r in results
        ],
    }
    code = EXIT_OK if payload["passed"] else EXIT_CHECK
    if args.json:
        _emit_json(payload)
        return code
    _print(r.line() for r in results)
    n_pass = sum(r.passed for r in results)
    _print([f"{n_pass}/{len(results)} criteria passed"])
    return code


# ------------------------------------------------------------------- parser

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stockframe",
        description="Adaptive frequency partitions, orthonormal bases and "
                    "non-stationary frames on periodized grids.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        return p

    p = add("partition", cmd_partition, "print the (p, start, stop, width) table")
    p.add_argument("--alpha", type=_alpha_arg, required=True)
    p.add_argument("--pmax", type=_positive_int, required=True)
    p.add_argument("--csv", action="store_true", help="CSV table on stdout")

    p = add("basis", cmd_basis, "evaluate one orthonormal basis element")
    p.add_argument("--alpha", type=_alpha_arg, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--tau", type=int, default=0)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--out", help="base path; writes .time.csv and .freq.csv")

    p = add("basis-check", cmd_basis_check, "Gram deviation and concentration scan")
    p.add_argument("--alpha", type=_alpha_arg, required=True)
    p.add_argument("--n", type=_positive_int, required=True)

    p = add("stack", cmd_stack, "window stack admissibility and sum-of-squares bounds")
    p.add_argument("--alpha", type=_alpha_arg, required=True)
    p.add_argument("--mu", type=_positive_float, required=True)
    p.add_argument("--window", type=_window_arg, required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--report", action="store_true", help="full admissibility report")
    p.add_argument("--dump", help="write all bands to an SFR1 container")

    p = add("frame-bounds", cmd_frame_bounds, "certified Walnut bounds, eigen bounds for n <= 1024")
    p.add_argument("--alpha", type=_alpha_arg, required=True)
    p.add_argument("--mu", type=_positive_float, required=True)
    p.add_argument("--q", type=_positive_int, required=True)
    p.add_argument("--window", type=_window_arg, required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--kmax", type=_positive_int, default=None,
                   help="truncate the aliasing sum (default: to the grid edge)")

    p = add("element", cmd_element, "export one frame element in time and frequency")
    p.add_argument("--alpha", type=_alpha_arg, required=True)
    p.add_argument("--mu", type=_positive_float, required=True)
    p.add_argument("--q", type=_positive_int, required=True)
    p.add_argument("--window", type=_window_arg, required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", required=True, help="base path; writes .time.csv and .freq.csv")

    p = add("roundtrip", cmd_roundtrip, "analyze + dual synthesize an SFR1 signal")
    p.add_argument("--alpha", type=_alpha_arg, required=True)
    p.add_argument("--mu", type=_positive_float, required=True)
    p.add_argument("--q", type=_positive_int, required=True)
    p.add_argument("--window", type=_window_arg, required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--in", dest="infile", required=True, help="input SFR1 container")
    p.add_argument("--out", help="write the reconstruction as SFR1")
    p.add_argument("--tol", type=_positive_float, default=1e-6)

    p = add("tile", cmd_tile, "print the d-dimensional box table")
    p.add_argument("--d", type=_positive_int, required=True)
    p.add_argument("--pmax", type=_positive_int, required=True)

    p = add("roundtrip2d", cmd_roundtrip2d, "analyze + dual synthesize an SFR2 field")
    p.add_argument("--mu", type=_positive_float, required=True)
    p.add_argument("--q", type=_positive_int, required=True)
    p.add_argument("--window", type=_window_arg, required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--pmax", type=_positive_int, default=None,
                   help="corona depth (default: cover the grid)")
    p.add_argument("--in", dest="infile", required=True, help="input SFR2 container")
    p.add_argument("--out", help="write the reconstruction as SFR2")
    p.add_argument("--tol", type=_positive_float, default=1e-6)

    p = add("selftest", cmd_selftest, "run the acceptance criteria")
    p.add_argument("--criteria", type=_criteria_arg, default=None,
                   help="comma-separated criterion numbers (default: all)")

    return parser


def main(argv=None) -> int:
    try:
        _apply_thread_cap()
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except Exception as exc:  # noqa: BLE001 - sorted into exit codes below
        from .frame1d import FrameGapError
        if isinstance(exc, FrameGapError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CHECK
        if isinstance(exc, (ValueError, TypeError, OSError)):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        raise


if __name__ == "__main__":
    sys.exit(main())
