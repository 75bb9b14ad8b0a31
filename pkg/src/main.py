"""
tripwell - Command Line
คำนวณระดับพลังงานไม่เชิงเส้น, การกวาดแบบ Landau-Zener และ STIRAP แล้วเขียน CSV/JSON

    tripwell eigen  --delta -0.4 --v 0.1 --w 0.2 --g -0.4 --eps -0.8:0.8:800
    tripwell lz run --delta -0.4 --v 0.1 --w 0.2 --g -0.4 --alpha 0.001
    tripwell stirap sweep --delta-detuning 0.1 --g -0.3:0.3:61
    tripwell replay out.csv.manifest.json

exit codes: 0 สำเร็จ, 1 ใช้คำสั่งผิด, 2 คำนวณล้มเหลวและไม่มีไฟล์ผลลัพธ์
"""
import argparse
import functools
import logging
import math
import re
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

import numpy as np
import pandas as pd
from dotenv import dotenv_values

from adapters.output import RunManifest, write_table
from core.config import VERSION, config
from core.continuation import SweepSpec, continue_level
from core.dynamics import project_on_branch
from core.errors import TripwellError
from core.log_setup import setup_logging, shutdown_logging
from core.model import ModelParams
from core.stationary import StationaryState, find_stationary_states
from core.sweep_runner import SweepRunner
from experiments.lz import LEVEL_NAMES, LZConfig, adiabatic_branch, run_equal_slope, sweep_alpha_family
from experiments.stirap import PulseConfig, StirapConfig, run_stirap, stirap_levels, sweep_g

logger = logging.getLogger("tripwell")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2


class UsageError(Exception):
    """ค่าที่ผู้ใช้ป้อนไม่ถูกต้อง (ตรวจก่อนเริ่มคำนวณ)"""


class TripwellArgumentParser(argparse.ArgumentParser):
    """argparse ที่คืน exit code 1 เมื่อใช้คำสั่งผิด"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ===============================
# Value parsing
# ===============================

def _number(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise ValueError(f"not a finite number: {text}")
    return value


def parse_grid(text: str, log: bool = False) -> List[float]:
    """
    "min:max:count" (linspace หรือ geomspace เมื่อ log=True), "a,b,c" หรือค่าเดียว
    """
    text = str(text).strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"grid '{text}' must look like min:max:count")
        lo, hi = _number(parts[0]), _number(parts[1])
        count = int(parts[2])
        if count < 1:
            raise UsageError(f"grid '{text}': count must be >= 1")
        if log:
            if lo <= 0.0 or hi <= 0.0:
                raise UsageError(f"log grid '{text}' needs positive bounds")
            return [float(x) for x in np.geomspace(lo, hi, count)]
        return [float(x) for x in np.linspace(lo, hi, count)]
    return [_number(part) for part in text.split(",") if part.strip()]


def _grid(text: str) -> List[float]:
    return parse_grid(text)


def _log_grid(text: str) -> List[float]:
    return parse_grid(text, log=True)


def _format_grid(values: Sequence[float]) -> str:
    return ",".join(repr(float(v)) for v in values)


NEGATIVE_VALUE = re.compile(r"^-\.?\d")


def attach_negative_values(argv: Sequence[str]) -> List[str]:
    """"--eps -0.8:0.8:9" -> "--eps=-0.8:0.8:9" (argparse อ่านค่าที่ขึ้นต้นด้วย - เป็น flag)"""
    out: List[str] = []
    for token in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and NEGATIVE_VALUE.match(token):
            out[-1] = f"{out[-1]}={token}"
        else:
            out.append(token)
    return out


# ===============================
# Option table
# ===============================

# name -> (converter, default, help)
MODEL_OPTIONS: Dict[str, Tuple[Callable[[str], Any], Any, str]] = {
    "delta": (_number, 0.0, "on-site energy of well 3"),
    "v": (_number, 0.1, "coupling between wells 1 and 2"),
    "w": (_number, 0.2, "coupling between wells 2 and 3"),
    "g": (_number, 0.0, "nonlinearity"),
}

COMMAND_OPTIONS: Dict[str, Dict[str, Tuple[Callable[[str], Any], Any, str]]] = {
    "eigen": {
        **MODEL_OPTIONS,
        "eps": (_grid, "-0.8:0.8:161", "epsilon grid (min:max:count or list)"),
        "mode": (str, "scan", "scan = all states per epsilon (branch_id = rank by mu at that epsilon), "
                              "continue = follow the three levels (branch_id = level)"),
    },
    "lz run": {
        **MODEL_OPTIONS,
        "alpha": (_number, None, "sweep rate (> 0)"),
        "span": (_number, None, "epsilon half-width (default 40 max(|v|,|w|,|g|,|delta|))"),
        "level": (str, "lowest", "initial branch: lowest, middle or highest"),
        "samples": (int, None, "output samples"),
    },
    "lz sweep": {
        "delta": (_grid, "0.0", "delta value(s)"),
        "v": (_number, 0.1, "coupling between wells 1 and 2"),
        "w": (_grid, "0.2", "w value(s)"),
        "g": (_grid, "0.0", "g value(s)"),
        "alpha": (_log_grid, "5e-4:0.1:20", "alpha grid (log-spaced for min:max:count)"),
        "level": (str, "lowest", "initial branch: lowest, middle or highest"),
    },
    "stirap run": {"samples": (int, None, "output samples")},
    "stirap sweep": {"g": (_grid, "-0.3:0.3:61", "g grid")},
    "stirap levels": {"times": (_grid, None, "time grid (default: window with 121 points)")},
}

STIRAP_COMMON: Dict[str, Tuple[Callable[[str], Any], Any, str]] = {
    "delta_detuning": (_number, 0.1, "detuning Delta (epsilon = delta = -Delta)"),
    "g": (_number, 0.0, "nonlinearity"),
    "peak": (_number, None, "pulse peak Omega0"),
    "width": (_number, None, "pulse width sigma"),
    "separation": (_number, None, "pulse separation tau"),
    "t_start": (_number, None, "window start"),
    "t_end": (_number, None, "window end"),
}
for _name in ("stirap run", "stirap sweep", "stirap levels"):
    COMMAND_OPTIONS[_name] = {**STIRAP_COMMON, **COMMAND_OPTIONS[_name]}


def build_parser() -> argparse.ArgumentParser:
    parser = TripwellArgumentParser(prog="tripwell", description="nonlinear three-level condensate toolkit")
    parser.add_argument("--version", action="version", version=f"tripwell {VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser):
        p.add_argument("--out", default=None, help="output file ('-' = stdout)")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--threads", type=int, default=None, help="worker processes for sweeps")
        p.add_argument("--tol", type=float, default=None, help="integrator tolerance")
        p.add_argument("--config", default=None, help="key=value file; flags override it")
        p.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING, ...")

    def add_options(p: argparse.ArgumentParser, key: str):
        for name, (_, default, text) in COMMAND_OPTIONS[key].items():
            flag = "--" + name.replace("_", "-")
            p.add_argument(flag, dest=name, default=None, help=f"{text} (default {default})")
        add_common(p)

    eigen = sub.add_parser("eigen", help="nonlinear eigenvalues over an epsilon grid")
    add_options(eigen, "eigen")

    lz = sub.add_parser("lz", help="equal-slope Landau-Zener sweeps")
    lz_sub = lz.add_subparsers(dest="action", required=True)
    add_options(lz_sub.add_parser("run", help="single run with trajectory"), "lz run")
    add_options(lz_sub.add_parser("sweep", help="P(alpha) table"), "lz sweep")

    stirap = sub.add_parser("stirap", help="nonlinear STIRAP")
    stirap_sub = stirap.add_subparsers(dest="action", required=True)
    add_options(stirap_sub.add_parser("run", help="single transfer with trajectory"), "stirap run")
    add_options(stirap_sub.add_parser("sweep", help="efficiency versus g"), "stirap sweep")
    add_options(stirap_sub.add_parser("levels", help="stationary states along the pulses"), "stirap levels")

    replay = sub.add_parser("replay", help="re-run the command stored in a run manifest")
    replay.add_argument("manifest")
    replay.add_argument("--out", default=None, help="write to another path")
    return parser


def resolve_options(args: argparse.Namespace, key: str) -> Dict[str, Any]:
    """flag > ไฟล์ --config > ค่าเริ่มต้น แล้วแปลงชนิด"""
    file_values: Dict[str, Optional[str]] = {}
    if args.config:
        path = Path(args.config)
        if not path.is_file():
            raise UsageError(f"config file not found: {path}")
        file_values = {k.strip().lower().replace("-", "_"): v for k, v in dotenv_values(path).items()}
        unknown = sorted(set(file_values) - set(COMMAND_OPTIONS[key]) - {"out", "format", "threads", "tol"})
        if unknown:
            raise UsageError(f"unknown keys in {path}: {', '.join(unknown)}")

    resolved: Dict[str, Any] = {}
    for name, (convert, default, _) in COMMAND_OPTIONS[key].items():
        raw = getattr(args, name)
        if raw is None:
            raw = file_values.get(name)
        if raw is None:
            raw = default
        try:
            resolved[name] = convert(raw) if isinstance(raw, str) else raw
        except (ValueError, UsageError) as e:
            raise UsageError(f"--{name.replace('_', '-')}: {e}") from e

    for name, convert in (("out", str), ("format", str), ("threads", int), ("tol", float)):
        value = getattr(args, name)
        if value is None and file_values.get(name) is not None:
            try:
                value = convert(file_values[name])
            except ValueError as e:
                raise UsageError(f"{name}: {e}") from e
        resolved[name] = value if value is not None else ("csv" if name == "format" else None)
    if resolved["format"] not in ("csv", "json"):
        raise UsageError(f"--format must be csv or json, got {resolved['format']}")
    if resolved["threads"] is not None and resolved["threads"] < 1:
        raise UsageError("--threads must be >= 1")
    if resolved["tol"] is not None and not resolved["tol"] > 0.0:
        raise UsageError("--tol must be positive")
    return resolved


def canonical_argv(key: str, resolved: Dict[str, Any]) -> List[str]:
    """command line ที่ resolve ครบแล้ว (ไม่ต้องพึ่งไฟล์ --config ตอนรันซ้ำ)"""
    argv = key.split()
    for name, value in resolved.items():
        if value is None or name == "out":
            continue
        flag = "--" + name.replace("_", "-")
        if isinstance(value, list):
            argv += [flag, _format_grid(value)]
        elif isinstance(value, float):
            argv += [flag, repr(value)]
        else:
            argv += [flag, str(value)]
    return argv


# ===============================
# Commands
# ===============================

def _state_columns(state: StationaryState) -> Dict[str, Any]:
    a2, b2, c2 = state.populations
    return {"mu": state.mu, "a2": a2, "b2": b2, "c2": c2, "classification": state.classification.value}


def _eigen_point(epsilon: float, base: ModelParams) -> Dict[str, Any]:
    result = find_stationary_states(base.with_value("epsilon", epsilon))
    return {"states": [_state_columns(s) for s in result], "diagnostics": result.diagnostics}


def cmd_eigen(opts: Dict[str, Any], runner: SweepRunner) -> Tuple[pd.DataFrame, List[str], Dict[str, Any]]:
    """
    ตารางสถานะนิ่งตาม epsilon

    scan: branch_id คือลำดับตาม mu ที่ epsilon นั้น (ไม่ใช่ branch ต่อเนื่อง; ใน loop region
    ค่าเดียวกันอาจกระโดดข้าม branch)
    continue: branch_id คือระดับเชิงเส้น 0, 1, 2 ที่ต่อด้วย continuation และ fold_flag = 1 ที่ fold
    """
    eps = opts["eps"]
    if not eps:
        raise UsageError("--eps grid is empty")
    if opts["mode"] not in ("scan", "continue"):
        raise UsageError(f"--mode must be scan or continue, got {opts['mode']}")
    base = ModelParams(epsilon=eps[0], delta=opts["delta"], v=opts["v"], w=opts["w"], g=opts["g"])
    columns = ["epsilon", "branch_id", "mu", "a2", "b2", "c2", "classification", "fold_flag"]
    rows: List[Dict[str, Any]] = []
    diagnostics: List[str] = []
    info: Dict[str, Any] = {}

    if opts["mode"] == "scan":
        table = runner.run(functools.partial(_eigen_point, base=base), "epsilon", eps, columns=("states",))
        diagnostics += table.diagnostics()
        for epsilon, row in zip(table.values, table.rows):
            if row is None:
                continue
            for branch_id, state in enumerate(row["states"]):
                rows.append({"epsilon": epsilon, "branch_id": branch_id, **state, "fold_flag": 0})
        info["stats"] = table.stats
    else:
        if len(eps) < 2 or eps[0] == eps[-1]:
            raise UsageError("--mode continue needs an epsilon range with distinct end points")
        sweep = SweepSpec("epsilon", eps[0], eps[-1])
        folds = {}
        for level in range(3):
            branch = continue_level(base, sweep, level)
            folds[str(level)] = branch.folds
            if branch.failure:
                diagnostics.append(f"level {level}: {branch.failure}")
            for index, (value, state) in enumerate(branch):
                rows.append({"epsilon": value, "branch_id": level, **_state_columns(state),
                             "fold_flag": int(branch.is_fold_point(index))})
        info["folds"] = folds

    if not rows:
        raise TripwellError("no stationary states were produced")
    return pd.DataFrame.from_records(rows, columns=columns), diagnostics, info


def _lz_level(name: str) -> int:
    if name not in LEVEL_NAMES:
        raise UsageError(f"--level must be one of {', '.join(LEVEL_NAMES)}, got {name}")
    return LEVEL_NAMES[name]


def cmd_lz_run(opts: Dict[str, Any], runner: SweepRunner) -> Tuple[pd.DataFrame, List[str], Dict[str, Any]]:
    if opts["alpha"] is None:
        raise UsageError("--alpha is required")
    try:
        cfg = LZConfig(delta=opts["delta"], v=opts["v"], w=opts["w"], g=opts["g"], alpha=opts["alpha"],
                       epsilon_span=opts["span"], level=_lz_level(opts["level"]))
    except ValueError as e:
        raise UsageError(str(e)) from e
    result = run_equal_slope(cfg, tol=opts["tol"], samples=opts["samples"])
    trajectory = result.trajectory
    diagnostics: List[str] = []
    overlap = np.full(len(trajectory), np.nan)
    try:
        branch = adiabatic_branch(cfg)
        overlap = project_on_branch(trajectory, branch).overlap
        if branch.failure:
            diagnostics.append(f"adiabatic branch: {branch.failure}")
    except TripwellError as e:
        diagnostics.append(f"adiabatic branch unavailable: {e}")
        logger.warning(f"⚠️ adiabatic branch unavailable: {e}")
    pops = trajectory.populations
    frame = pd.DataFrame({
        "t": trajectory.times,
        "epsilon": trajectory.parameter_series("epsilon"),
        "a2": pops[:, 0],
        "b2": pops[:, 1],
        "c2": pops[:, 2],
        "norm_dev": trajectory.norm_deviation,
        "branch_overlap": overlap,
    })
    logger.info(f"✅ LZ run: P = {result.P:.10g}")
    return frame, diagnostics, {"P": result.P, **result.diagnostics}


def cmd_lz_sweep(opts: Dict[str, Any], runner: SweepRunner) -> Tuple[pd.DataFrame, List[str], Dict[str, Any]]:
    alphas = opts["alpha"]
    if not alphas or any(a <= 0.0 for a in alphas):
        raise UsageError("--alpha values must be positive")
    families = {name: opts[name] for name in ("w", "g", "delta")}
    if any(len(values) == 0 for values in families.values()):
        raise UsageError("--w, --g and --delta need at least one value")
    multi = {name: values for name, values in families.items() if len(values) > 1}
    try:
        base = LZConfig(v=opts["v"], alpha=alphas[0], level=_lz_level(opts["level"]),
                        **{name: values[0] for name, values in families.items()},
                        epsilon_span=None)
    except ValueError as e:
        raise UsageError(str(e)) from e
    table = sweep_alpha_family(base, alphas, multi, tol=opts["tol"], runner=runner)
    if len(table.failures) == len(table):
        raise TripwellError("every sweep point failed: " + "; ".join(table.diagnostics()[:3]))
    return table.to_frame(), table.diagnostics(), {"stats": table.stats}


def _stirap_config(opts: Dict[str, Any], g: float) -> StirapConfig:
    overrides = {name: opts[name] for name in ("peak", "width", "separation", "t_start", "t_end")
                 if opts[name] is not None}
    try:
        return StirapConfig(detuning=opts["delta_detuning"], g=g, pulses=PulseConfig(**overrides))
    except ValueError as e:
        raise UsageError(str(e)) from e


def cmd_stirap_run(opts: Dict[str, Any], runner: SweepRunner) -> Tuple[pd.DataFrame, List[str], Dict[str, Any]]:
    cfg = _stirap_config(opts, opts["g"])
    result = run_stirap(cfg, tol=opts["tol"], samples=opts["samples"])
    trajectory = result.trajectory
    pops = trajectory.populations
    frame = pd.DataFrame({
        "t": trajectory.times,
        "v": trajectory.parameter_series("v"),
        "w": trajectory.parameter_series("w"),
        "a2": pops[:, 0],
        "b2": pops[:, 1],
        "c2": pops[:, 2],
    })
    logger.info(f"✅ STIRAP run: efficiency = {result.efficiency:.10g}")
    return frame, [], {"efficiency": result.efficiency, **result.diagnostics}


def cmd_stirap_sweep(opts: Dict[str, Any], runner: SweepRunner) -> Tuple[pd.DataFrame, List[str], Dict[str, Any]]:
    gs = opts["g"]
    if not gs:
        raise UsageError("--g grid is empty")
    cfg = _stirap_config(opts, 0.0)
    table = sweep_g(cfg, gs, tol=opts["tol"], runner=runner)
    if len(table.failures) == len(table):
        raise TripwellError("every sweep point failed: " + "; ".join(table.diagnostics()[:3]))
    return table.to_frame(), table.diagnostics(), {"stats": table.stats}


def cmd_stirap_levels(opts: Dict[str, Any], runner: SweepRunner) -> Tuple[pd.DataFrame, List[str], Dict[str, Any]]:
    cfg = _stirap_config(opts, opts["g"])
    times = opts["times"]
    if times is None:
        times = [float(t) for t in np.linspace(cfg.pulses.t_start, cfg.pulses.t_end, 121)]
    try:
        snapshots = stirap_levels(cfg, times, runner=runner)
    except ValueError as e:
        raise UsageError(str(e)) from e
    rows, diagnostics = [], []
    for t, snapshot in zip(times, snapshots):
        v, w = cfg.params_at(t).v, cfg.params_at(t).w
        diagnostics += [f"t={t!r}: {message}" for message in snapshot.diagnostics if "did not converge" not in message]
        for level_id, state in enumerate(snapshot):
            rows.append({"t": t, "v": v, "w": w, "level_id": level_id, **_state_columns(state)})
    columns = ["t", "v", "w", "level_id", "mu", "a2", "b2", "c2", "classification"]
    return pd.DataFrame.from_records(rows, columns=columns), diagnostics, {}


COMMANDS = {
    "eigen": cmd_eigen,
    "lz run": cmd_lz_run,
    "lz sweep": cmd_lz_sweep,
    "stirap run": cmd_stirap_run,
    "stirap sweep": cmd_stirap_sweep,
    "stirap levels": cmd_stirap_levels,
}


# ===============================
# Entry point
# ===============================

def run_command(argv: Sequence[str]) -> int:
    parser = build_parser()
    args = parser.parse_args(attach_negative_values(argv))

    if args.command == "replay":
        path = Path(args.manifest)
        if not path.is_file():
            logger.error(f"❌ manifest not found: {path}")
            return EXIT_USAGE
        manifest = RunManifest.load(path)
        replay_argv = list(manifest.run.get("replay_argv") or manifest.command[1:])
        out = args.out or (manifest.config.get("options") or {}).get("out")
        if out:
            replay_argv += ["--out", out]
        logger.info(f"🔄 replaying: tripwell {' '.join(replay_argv)}")
        return run_command(replay_argv)

    key = args.command if args.command == "eigen" else f"{args.command} {args.action}"
    try:
        opts = resolve_options(args, key)
    except UsageError as e:
        logger.error(f"❌ {e}")
        return EXIT_USAGE

    runner = SweepRunner(max_workers=opts["threads"], show_progress=sys.stderr.isatty())
    try:
        frame, diagnostics, info = COMMANDS[key](opts, runner)
    except UsageError as e:
        logger.error(f"❌ {e}")
        return EXIT_USAGE
    except (TripwellError, ArithmeticError, np.linalg.LinAlgError) as e:
        logger.error(f"❌ numerical failure: {e}")
        return EXIT_NUMERICAL

    for message in diagnostics:
        logger.warning(f"⚠️ {message}")
    manifest = RunManifest(
        command=["tripwell", *argv],
        config={"options": opts, "settings": config.as_dict()},
        diagnostics=diagnostics,
        run={**info, "replay_argv": canonical_argv(key, opts)},
    )
    write_table(frame, opts["out"], opts["format"], manifest)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point"""
    argv = list(sys.argv[1:] if argv is None else argv)
    level = config.system.log_level
    if "--log-level" in argv:
        index = argv.index("--log-level")
        if index + 1 < len(argv):
            level = argv[index + 1]
    log_file = str(Path(config.system.log_dir) / "tripwell.log") if config.system.save_logs else None
    setup_logging(level, log_file)
    try:
        if not config.validate():
            return EXIT_USAGE
        return run_command(argv)
    except KeyboardInterrupt:
        logger.info("🛑 interrupted")
        return EXIT_NUMERICAL
    finally:
        shutdown_logging()


if __name__ == "__main__":
    sys.exit(main())
