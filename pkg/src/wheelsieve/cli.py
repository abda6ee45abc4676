"""Command-line interface.

    wheelsieve count gap --g 28 --n 126
    wheelsieve count twins --n 1000000 --format json
    wheelsieve scan exceptions --m-max 1000
    wheelsieve estimate twin-classes --m 166664 --format csv
    wheelsieve verify-paper

Exit status: 0 on success, 1 when a verification fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import counting, estimators
from .counting import CountReport, EvenClass, Task
from .estimators import EstimatorParams, Mode
from .segments import sumset_mask
from .wheel import MaskKind, WheelMasks, load_mask, read_header, save_mask, twin_mask

MAX_N = 6 * 10**8
MAX_SCAN = 10**7

CSV_COLUMNS = [
    "task",
    "g_or_shift",
    "n_or_m",
    "class",
    "empirical",
    "estimate",
    "lower_bound",
    "deviation",
]


class UsageError(Exception):
    pass


# -- masks ---------------------------------------------------------------------


def _masks(args, m: int) -> WheelMasks:
    m = max(m, 1)
    cache = getattr(args, "mask_cache", None)
    if cache:
        loaded = _load_cached(Path(cache), m)
        if loaded is not None:
            return loaded
    masks = WheelMasks.build(m, args.threads)
    if cache:
        _store(Path(cache), masks)
    return masks


def _load_cached(root: Path, m: int) -> WheelMasks | None:
    paths = {k: root / f"{k}.w6sv" for k in ("L", "R")}
    try:
        for kind, path in paths.items():
            stored_kind, window = read_header(path)
            if stored_kind is not MaskKind[kind] or window.lo != 1 or window.len < m:
                return None
        l, r = load_mask(paths["L"]), load_mask(paths["R"])
    except (OSError, ValueError):
        return None
    return WheelMasks(l, r, twin_mask(l, r))


def _store(root: Path, masks: WheelMasks) -> list[Path]:
    root.mkdir(parents=True, exist_ok=True)
    written = []
    for kind in ("L", "R", "T"):
        path = root / f"{kind}.w6sv"
        save_mask(getattr(masks, kind), path)
        written.append(path)
    return written


# -- output ----------------------------------------------------------------------


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, Fraction):
        v = float(v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _jsonable(v):
    if isinstance(v, Fraction):
        return float(v)
    return v


def _render(fmt: str, columns: list[str], rows: list[list], payload) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2, default=_jsonable) + "\n"
    cells = [[_cell(v) for v in row] for row in rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        w.writerows(cells)
        return buf.getvalue()
    widths = [max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    return "\n".join(lines) + "\n"


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_reports(args, reports: list[CountReport], single: bool = False) -> None:
    dicts = [r.as_dict() for r in reports]
    rows = [[d[c] for c in CSV_COLUMNS] for d in dicts]
    payload = dicts[0] if single else dicts
    _emit(args, _render(args.format, CSV_COLUMNS, rows, payload))


# -- report builders ---------------------------------------------------------------


def _check_n(n: int, name: str = "--n") -> None:
    if n < 0 or n > MAX_N:
        raise UsageError(f"{name} must lie in [0, {MAX_N}] (documented limit)")


def _params(args) -> EstimatorParams:
    return EstimatorParams(mode=Mode(args.mode))


def _twin_report(args, n: int) -> CountReport:
    m = (n + 1) // 6
    masks = _masks(args, m)
    emp = counting.pi_twin(n, masks)
    if m < 1:
        return CountReport(Task.TWIN, None, n, "", emp, None, None)
    pa, pb = counting.prime_class_counts(m, masks)
    est = estimators.estimate("twin-classes", _params(args), m=m, pa=pa, pb=pb)
    return CountReport(Task.TWIN, None, n, "", emp, est, estimators.bound_H(m))


def _gap_report(args, g: int, n: int) -> CountReport:
    if g < 2 or g % 2:
        raise UsageError("--g must be an even number >= 2")
    if n % 6:
        raise UsageError(f"--n must be a multiple of 6 for gap counts, got {n}")
    ec = EvenClass.of(g)
    masks = _masks(args, n // 6 + ec.m)
    if args.raw:
        emp = counting.pi_gap(g, n, masks)
    else:
        emp = counting.pi_gap_corrected(g, n, masks)
    est = estimators.estimate("gap-hl", _params(args), g=g, n=n) if n >= 2 else None
    return CountReport(Task.GAP, g, n, ec.cls.name, emp, est, None)


def _sum_report(args, g: int) -> CountReport:
    if g < 10 or g % 2:
        raise UsageError("--g must be an even number >= 10")
    ec = EvenClass.of(g)
    masks = _masks(args, ec.m)
    emp = counting.pi_sum(g, masks) if args.raw else counting.pi_sum_corrected(g, masks)
    est = estimators.estimate("sum-hl", _params(args), g=g)
    lower = estimators.mu2(6 * ec.m, args.mode) * estimators.bound_H(ec.m)
    return CountReport(Task.SUM, g, ec.m, ec.cls.name, emp, est, lower)


def _quad_report(args, shift: int, m: int, task: str = "quad-classes") -> CountReport:
    if shift < 1:
        raise UsageError("--shift must be >= 1")
    masks = _masks(args, m + shift)
    emp = counting.pi_quad(shift, m, masks)
    if m < 1:
        return CountReport(Task.QUAD, shift, m, "", emp, None, None)
    p = _params(args)
    if task == "quad-twins":
        est = estimators.estimate(task, p, m=m, pi2=counting.pi_twin(6 * m, masks))
    else:
        pa, pb = counting.prime_class_counts(m, masks)
        est = estimators.estimate(task, p, m=m, pa=pa, pb=pb)
    est *= estimators.eta4(shift)
    lower = estimators.bound_Q(m) if shift == 1 else None
    return CountReport(Task.QUAD, shift, m, "", emp, est, lower)


def _twin_sum_report(args, m: int) -> CountReport:
    if m < 1:
        raise UsageError("--m must be >= 1")
    masks = _masks(args, m)
    emp = counting.twin_sum_reps(m, masks)
    pa, pb = counting.prime_class_counts(m, masks)
    est = estimators.estimate("twin-sum", _params(args), m=m, pa=pa, pb=pb)
    lower = estimators.bound_Qprime(m, _params(args))
    return CountReport(Task.TWIN_SUM, None, m, "", emp, est, lower)


# -- commands --------------------------------------------------------------------


def cmd_count(args) -> int:
    what = args.what
    if what == "twins":
        _check_n(args.n)
        report = _twin_report(args, args.n)
    elif what == "gap":
        _check_n(args.n)
        report = _gap_report(args, args.g, args.n)
    elif what == "sum":
        _check_n(args.g, "--g")
        report = _sum_report(args, args.g)
    elif what == "quad":
        m = args.m if args.m is not None else args.n // 6
        _check_n(6 * m, "--m")
        report = _quad_report(args, args.shift, m)
    else:
        _check_n(6 * args.m, "--m")
        report = _twin_sum_report(args, args.m)
    _emit_reports(args, [report], single=True)
    return 0


def _points(args) -> list[int]:
    if args.m:
        return list(args.m)
    if args.n:
        return [n // 6 for n in args.n]
    raise UsageError("estimate needs --n or --m values")


def cmd_estimate(args) -> int:
    task = args.task
    reports = []
    if task in ("twin-hl", "sum-hl", "gap-hl"):
        values = args.n or [6 * m for m in (args.m or [])]
        if not values:
            raise UsageError("estimate needs --n or --m values")
        for n in values:
            _check_n(n)
            if task == "twin-hl":
                masks = _masks(args, (n + 1) // 6)
                emp = counting.pi_twin(n, masks)
                est = estimators.estimate(task, pi_n=counting.prime_pi(n, masks), n=n)
                reports.append(CountReport(Task.TWIN, None, n, "", emp, est, None))
            elif task == "sum-hl":
                reports.append(_sum_report(args, n))
            else:
                if args.g is None:
                    raise UsageError("gap-hl needs --g")
                reports.append(_gap_report(args, args.g, n))
    else:
        for m in _points(args):
            _check_n(6 * m, "--m")
            if task == "twin-classes":
                reports.append(_twin_report(args, 6 * m))
            elif task in ("quad-classes", "quad-twins"):
                reports.append(_quad_report(args, args.shift, m, task))
            else:
                reports.append(_twin_sum_report(args, m))
    _emit_reports(args, reports)
    return 0


def cmd_scan(args) -> int:
    if not 1 <= args.m_max <= MAX_SCAN:
        raise UsageError(f"--m-max must lie in [1, {MAX_SCAN}] (documented limit)")
    masks = _masks(args, args.m_max)
    found = counting.scan_exceptions(args.m_max, masks)
    rows = [[m, 6 * m - 2, 6 * m, 6 * m + 2] for m in found]
    payload = {"m_max": args.m_max, "exceptions": found}
    _emit(args, _render(args.format, ["m", "g1", "g2", "g3"], rows, payload))
    return 0


def cmd_density(args) -> int:
    n = args.n
    if not 1 <= n <= MAX_N // 6:
        raise UsageError(f"--n must lie in [1, {MAX_N // 6}] (documented limit)")
    masks = _masks(args, n)
    seq = args.seq
    if "+" in seq:
        a, b = seq.split("+")
        members = sumset_mask(getattr(masks, a), getattr(masks, b), n)
    else:
        members = getattr(masks, seq).to_bool()[:n]
    value = estimators.prefix_density(members, n, args.density)
    payload = {"sequence": seq, "n": n, "kind": args.density, "density": value}
    _emit(args, _render(args.format, list(payload), [list(payload.values())], payload))
    return 0


def cmd_sieve(args) -> int:
    if not 1 <= args.m <= MAX_N // 6:
        raise UsageError(f"--m must lie in [1, {MAX_N // 6}] (documented limit)")
    target = Path(args.dir or args.mask_cache or ".")
    masks = WheelMasks.build(args.m, args.threads)
    paths = _store(target, masks)
    rows = []
    for kind, path in zip(("L", "R", "T"), paths):
        mk = getattr(masks, kind)
        rows.append([kind, mk.window.lo, mk.window.len, mk.count(), str(path)])
    payload = [dict(zip(["kind", "lo", "len", "survivors", "path"], r)) for r in rows]
    _emit(args, _render(args.format, ["kind", "lo", "len", "survivors", "path"], rows, payload))
    return 0


def cmd_verify(args) -> int:
    from . import verification

    lines = []

    def echo(line):
        lines.append(line)
        if not args.out:
            print(line, flush=True)

    results = verification.run_all(echo)
    passed = sum(r.passed for r in results)
    summary = f"{passed}/{len(results)} criteria passed"
    echo(summary)
    if args.out:
        Path(args.out).write_text("\n".join(lines) + "\n")
    return 0 if passed == len(results) else 1


# -- parser ----------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=["table", "csv", "json"], default="table")
    p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    p.add_argument("--threads", type=int, default=1, metavar="N")
    p.add_argument("--mask-cache", metavar="PATH", help="directory of W6SV masks to reuse")
    p.add_argument("--mode", choices=["sum", "integral"], default="sum")
    raw = p.add_mutually_exclusive_group()
    raw.add_argument("--raw", action="store_true", help="report the raw construction value")
    raw.add_argument("--corrected", dest="raw", action="store_false")
    p.set_defaults(raw=False)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="wheelsieve", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    count = sub.add_parser("count", help="count one configuration")
    csub = count.add_subparsers(dest="what", required=True)
    p = csub.add_parser("gap", parents=[common])
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p = csub.add_parser("sum", parents=[common])
    p.add_argument("--g", type=int, required=True)
    p = csub.add_parser("twins", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p = csub.add_parser("quad", parents=[common])
    p.add_argument("--shift", type=int, default=1)
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--m", type=int)
    grp.add_argument("--n", type=int)
    p = csub.add_parser("twin-sum", parents=[common])
    p.add_argument("--m", type=int, required=True)

    scan = sub.add_parser("scan", help="range scans")
    ssub = scan.add_subparsers(dest="what", required=True)
    p = ssub.add_parser("exceptions", parents=[common])
    p.add_argument("--m-max", type=int, required=True)

    p = sub.add_parser(
        "estimate",
        parents=[common],
        help="empirical count vs estimate over several points",
        description="For sum-hl the --n values are the even numbers themselves.",
    )
    p.add_argument("task", choices=[t.value for t in estimators.EstimateTask])
    p.add_argument("--n", type=int, nargs="+")
    p.add_argument("--m", type=int, nargs="+")
    p.add_argument("--g", type=int)
    p.add_argument("--shift", type=int, default=1)

    p = sub.add_parser("density", parents=[common], help="finite-prefix densities")
    p.add_argument("--seq", choices=["L", "R", "T", "L+L", "L+R", "R+R", "T+T"], default="L")
    p.add_argument("--n", type=int, required=True)
    p.add_argument(
        "--density", choices=["asymptotic", "schnirelmann"], default="asymptotic"
    )

    p = sub.add_parser("sieve", parents=[common], help="build and persist L, R, T masks")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--dir", metavar="PATH", help="output directory (default: --mask-cache or .)")

    sub.add_parser("verify-paper", parents=[common], help="run every acceptance check")

    handlers = {
        "count": cmd_count,
        "scan": cmd_scan,
        "estimate": cmd_estimate,
        "density": cmd_density,
        "sieve": cmd_sieve,
        "verify-paper": cmd_verify,
    }
    parser.set_defaults(_handlers=handlers)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        return args._handlers[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
