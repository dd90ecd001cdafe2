"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 numerical tolerance failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from typing import Optional, Sequence

from spinorbit import jsonio
from spinorbit.jsonio import InputError
from spinorbit.radial import DEFAULT_K_MAX, DEFAULT_N, GridMismatchError, LGProfile, focal_plane_profiles, optimize_disk_radius
from spinorbit.so_core import Basis
from spinorbit.synthesis import PRESET_NAMES, RecompositionError, decompose, preset, verify_preset

EXIT_OK, EXIT_INPUT, EXIT_TOLERANCE = 0, 1, 2


def _g6(x: float) -> str:
    return f"{x:.6g}"


def _emit(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"{out}: cannot write ({exc.strerror})") from None


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_g6(v) for v in row])
    return buf.getvalue()


def cmd_decompose(args) -> int:
    target = jsonio.unitary4_from_json(jsonio.load_file(args.target), Basis.parse(args.basis))
    result = decompose(target)
    _emit(jsonio.dumps(jsonio.synthesis_to_json(result)), args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    from spinorbit.simulate import Pipeline, run_ideal, run_radial

    pipeline = Pipeline.from_json(jsonio.load_file(args.pipeline))
    state = jsonio.vector_from_json(jsonio.load_file(args.state), Basis.parse(args.basis))
    if args.mode == "ideal":
        _emit(jsonio.dumps(jsonio.vector_to_json(run_ideal(pipeline, state))), args.out)
        return EXIT_OK
    res = run_radial(pipeline, state, LGProfile(0, 2, 1.0), n=args.grid_n, k_max=args.r_max)
    doc = {
        "fidelity": res.fidelity,
        "transmission": res.transmission,
        "components": [{"spin": s, "oam": m, "power": p} for s, m, p in res.component_table()],
    }
    _emit(jsonio.dumps(doc), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    r_min, r_max = args.range
    if not (0 <= r_min < r_max) or args.steps < 2:
        raise InputError("sweep: need 0 <= R_min < R_max and steps >= 2")
    opt = optimize_disk_radius(LGProfile(0, 2, 1.0), (r_min, r_max), args.steps, n=args.grid_n, k_max=args.r_max)
    _emit(_csv(["R", "gamma0", "gamma4", "F_min"], opt.sweep), args.out)
    if args.profiles_out:
        prof = focal_plane_profiles(LGProfile(0, 2, 1.0), k_max=args.r_max)
        rows = zip(prof["m0"].r, prof["m0"].intensity, prof["m4"].intensity)
        _emit(_csv(["r", "intensity_m0", "intensity_m4"], rows), args.profiles_out)
    stream = sys.stderr if args.out in (None, "-") else sys.stdout
    print(
        f"R_star={opt.R_star:.6f} F_min={opt.F_min:.6f} gamma0={opt.gamma0:.6f} gamma4={opt.gamma4:.6f}",
        file=stream,
    )
    return EXIT_OK


def cmd_presets(args) -> int:
    lines = []
    for name in PRESET_NAMES:
        p = preset(name)
        if args.verify:
            lines.append(verify_preset(name).summary())
        else:
            kind = "single q-box" if p.is_single_qbox else "universal gate"
            lines.append(f"{name}: {p.description} ({kind})")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--basis", choices=["logical", "natural"], default="natural", help="basis assumed when a file omits it")
    common.add_argument("--grid-n", type=int, default=DEFAULT_N, help="radial samples per grid")
    common.add_argument("--r-max", type=float, default=DEFAULT_K_MAX, help="focal-plane window radius")

    parser = argparse.ArgumentParser(prog="spinorbit", description="Spin-orbit photonic gate toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", parents=[common], help="universal-gate parameters for a U(4) target")
    p.add_argument("target", help="JSON file with the target matrix")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("simulate", parents=[common], help="run a pipeline on a state")
    p.add_argument("pipeline", help="JSON pipeline file")
    p.add_argument("state", help="JSON state file")
    p.add_argument("--mode", choices=["ideal", "radial"], default="ideal")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", parents=[common], help="worst-case swap fidelity versus disk radius")
    p.add_argument("--range", nargs=2, type=float, default=[0.0, 6.0], metavar=("R_MIN", "R_MAX"))
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--profiles-out", help="also write focal-plane intensity profiles to this CSV")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("presets", parents=[common], help="list the preset gates")
    p.add_argument("--verify", action="store_true", help="check each preset against its textbook matrix")
    p.set_defaults(func=cmd_presets)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    if getattr(args, "grid_n", 2) < 2 or not getattr(args, "r_max", 1.0) > 0:
        print("error: --grid-n must be >= 2 and --r-max positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, GridMismatchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except RecompositionError as exc:
        print(f"tolerance failure: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
