"""Command-line front end: config parsing, run orchestration, and
bit-stable CSV/verdict emission.

Outputs per run (all numbers printed with 17 significant digits, so
repeated runs of the same configuration are byte-identical):

  series.csv        diagnostics time series, one row per sampled record
  snapshot_<t>.csv  nodal fields u, v and the boundary interpolants A, B
                    per sampled instant (filename carries the requested
                    time; the file embeds the actual step time)
  verdict.txt       expectation report
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import scenarios
from .model import BoundarySignal, BoundarySpec, DomainError, ModelParams
from .model import MODE_EPS_POSITIVE, MODE_EPS_ZERO
from .scenarios import (
    MMS_N_VALUES,
    PRESET_NAMES,
    InitialData,
    Scenario,
    evaluate_expectations,
    mms_preset,
    preset,
    spatial_order_study,
    temporal_order_study,
)
from .solver import ConfigurationError, SchemeConfig, SolverAbort, make_grid

SERIES_COLUMNS = (
    "t",
    "entropy",
    "lyapunov",
    "l2_u_tilde",
    "l2_v_tilde",
    "h1_u_tilde",
    "h1_v_tilde",
    "h2_u_tilde",
    "h2_v_tilde",
    "fisher",
    "v_mass",
    "sup_dist_u",
    "sup_dist_v",
    "alpha1",
    "alpha2",
    "beta1",
    "beta2",
    "max_char_speed",
    "advective_cfl",
)

SPATIAL_ORDER_TARGET = 1.8
TEMPORAL_ORDER_TARGET = 0.85

_SIGNAL_FIELDS = ("kind", "c", "a", "k")
_SIGNAL_KEYS = tuple(
    f"{slot}.{fld}" for slot in ("alpha1", "alpha2", "beta1", "beta2") for fld in _SIGNAL_FIELDS
)
_KNOWN_KEYS = frozenset(
    (
        "scenario",
        "epsilon",
        "n_cells",
        "t_end",
        "output_dir",
        "samples",
        "sample_every",
        "emit_snapshots",
        "initial",
        "initial.u",
        "initial.v",
    )
    + _SIGNAL_KEYS
)
_PRESET_COMPATIBLE_KEYS = frozenset(
    ("scenario", "output_dir", "samples", "sample_every", "emit_snapshots")
)


@dataclass(frozen=True)
class RunConfig:
    """A validated run request: the scenario to execute plus output policy."""

    scenario: Scenario
    output_dir: str
    emit_snapshots: bool = True


def _fmt(x) -> str:
    return "" if x is None else f"{x:.17g}"


def _parse_float(data: dict, key: str) -> float:
    try:
        return float(data[key])
    except ValueError:
        raise ConfigurationError(f"key {key!r}: expected a number, got {data[key]!r}") from None


def _parse_signal(data: dict, slot: str) -> BoundarySignal:
    kind_key = f"{slot}.kind"
    if kind_key not in data:
        raise ConfigurationError(f"missing required key {kind_key!r}")
    kind = data[kind_key]
    params = {}
    for fld in ("c", "a", "k"):
        key = f"{slot}.{fld}"
        if key in data:
            params[fld] = _parse_float(data, key)
    if "c" not in params:
        raise ConfigurationError(f"missing required key '{slot}.c'")
    if kind != "constant":
        for fld in ("a", "k"):
            if fld not in params:
                raise ConfigurationError(f"missing required key '{slot}.{fld}' for kind {kind!r}")
    try:
        return BoundarySignal(kind=kind, **params)
    except DomainError as err:
        raise ConfigurationError(f"key {kind_key!r}: {err}") from None


def parse_config(text: str) -> RunConfig:
    """Parse a `key = value` document into a validated RunConfig.

    Exactly one of `scenario = <preset>` or an inline definition (epsilon,
    n_cells, t_end, four boundary signals) must be present.  Unknown keys,
    missing keys, and constraint violations raise ConfigurationError naming
    the key and the constraint.
    """
    data: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _KNOWN_KEYS:
            raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
        if key in data:
            raise ConfigurationError(f"line {lineno}: duplicate key {key!r}")
        data[key] = value

    output_dir = data.get("output_dir", "out")
    emit_snapshots = data.get("emit_snapshots", "true").lower() in ("true", "1", "yes")

    if "scenario" in data:
        extra = set(data) - _PRESET_COMPATIBLE_KEYS
        if extra:
            raise ConfigurationError(
                f"scenario presets take no inline keys; remove {sorted(extra)}"
            )
        scn = preset(data["scenario"]) if data["scenario"] in PRESET_NAMES else None
        if scn is None:
            raise ConfigurationError(
                f"key 'scenario': unknown name {data['scenario']!r}; "
                f"valid names: {', '.join(PRESET_NAMES)}"
            )
    else:
        for key in ("epsilon", "n_cells", "t_end"):
            if key not in data:
                raise ConfigurationError(f"missing required key {key!r} (or a 'scenario' key)")
        epsilon = _parse_float(data, "epsilon")
        try:
            n_cells = int(data["n_cells"])
        except ValueError:
            raise ConfigurationError(
                f"key 'n_cells': expected an integer, got {data['n_cells']!r}"
            ) from None
        t_end = _parse_float(data, "t_end")
        mode = MODE_EPS_POSITIVE if epsilon > 0.0 else MODE_EPS_ZERO
        try:
            grid = make_grid(epsilon, n_cells)
            params = ModelParams(epsilon=epsilon)
            alpha1 = _parse_signal(data, "alpha1")
            alpha2 = _parse_signal(data, "alpha2")
            if mode == MODE_EPS_POSITIVE or "beta1.kind" in data:
                beta1 = _parse_signal(data, "beta1")
                beta2 = _parse_signal(data, "beta2")
            else:
                beta1 = beta2 = BoundarySignal.constant(0.0)
            cfg = SchemeConfig(
                mode=mode,
                grid=grid,
                params=params,
                boundary=BoundarySpec(alpha1=alpha1, alpha2=alpha2, beta1=beta1, beta2=beta2),
                t_end=t_end,
            )
        except DomainError as err:
            raise ConfigurationError(str(err)) from None

        initial_kind = data.get("initial", "sine_squared")
        if initial_kind == "constant":
            if "initial.u" not in data or "initial.v" not in data:
                raise ConfigurationError("constant initial data need 'initial.u' and 'initial.v'")
            initial = InitialData(
                kind="constant",
                u_value=_parse_float(data, "initial.u"),
                v_value=_parse_float(data, "initial.v"),
            )
            if not initial.u_value > 0.0:
                raise ConfigurationError("key 'initial.u': the cell density must be positive")
        elif initial_kind == "sine_squared":
            initial = InitialData(kind="sine_squared")
        else:
            raise ConfigurationError(
                f"key 'initial': unknown kind {initial_kind!r} (sine_squared or constant)"
            )
        scn = Scenario(
            name="custom",
            cfg=cfg,
            initial=initial,
            samples=(),
            expectations=(),
        )

    samples = None
    if "samples" in data:
        try:
            samples = tuple(float(tok) for tok in data["samples"].replace(",", " ").split())
        except ValueError:
            raise ConfigurationError(
                f"key 'samples': expected numbers, got {data['samples']!r}"
            ) from None
    elif "sample_every" in data:
        stride = _parse_float(data, "sample_every")
        if not stride > 0.0:
            raise ConfigurationError("key 'sample_every': stride must be > 0")
        count = int(scn.cfg.t_end / stride + 1e-9)
        samples = tuple(k * stride for k in range(1, count + 1))
    if samples is not None:
        scn = Scenario(
            name=scn.name,
            cfg=scn.cfg,
            initial=scn.initial,
            samples=tuple(sorted(set(samples))),
            expectations=scn.expectations,
            manufactured=scn.manufactured,
        )
    elif not scn.samples:
        scn = Scenario(
            name=scn.name,
            cfg=scn.cfg,
            initial=scn.initial,
            samples=scenarios._with_uniform_grid((), scn.cfg.t_end),
            expectations=scn.expectations,
            manufactured=scn.manufactured,
        )
    return RunConfig(scenario=scn, output_dir=output_dir, emit_snapshots=emit_snapshots)


def _series_row(r) -> str:
    a1, a2, b1, b2 = r.boundary_values
    cells = (
        r.t,
        r.entropy,
        r.lyapunov,
        r.l2_u_tilde,
        r.l2_v_tilde,
        r.h1_u_tilde,
        r.h1_v_tilde,
        r.h2_u_tilde,
        r.h2_v_tilde,
        r.fisher,
        r.v_mass,
        r.sup_dist_u,
        r.sup_dist_v,
        a1,
        a2,
        b1,
        b2,
        r.max_char_speed,
        r.advective_cfl,
    )
    return ",".join(_fmt(c) for c in cells)


def _write_series(path: Path, records) -> None:
    lines = [",".join(SERIES_COLUMNS)]
    lines.extend(_series_row(r) for r in records)
    path.write_text("\n".join(lines) + "\n")


def _write_snapshot(path: Path, state, record) -> None:
    a1, a2, b1, b2 = record.boundary_values
    x = np.linspace(0.0, 1.0, state.u.shape[0])
    A = (a2 - a1) * x + a1
    B = (b2 - b1) * x + b1
    lines = [f"# t = {state.t:.17g}", "x,u,v,A,B"]
    for i in range(x.shape[0]):
        lines.append(
            ",".join(_fmt(val) for val in (x[i], state.u[i], state.v[i], A[i], B[i]))
        )
    path.write_text("\n".join(lines) + "\n")


def execute(rc: RunConfig) -> int:
    """Run one scenario and emit its artifacts.

    Exit status: 0 when the run completed and every expectation passed,
    2 on expectation failure, 1 on solver abort or I/O failure.
    """
    out = Path(rc.output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as err:
        print(f"error: cannot create output directory {out}: {err}", file=sys.stderr)
        return 1

    scn = rc.scenario
    try:
        traj = scn.run()
    except SolverAbort as err:
        if err.trajectory is not None:
            _write_series(out / "series.csv", err.trajectory.records)
        (out / "verdict.txt").write_text(f"ABORT {scn.name}: {err}\n")
        print(f"error: {err}", file=sys.stderr)
        return 1

    _write_series(out / "series.csv", traj.records)
    if rc.emit_snapshots:
        for t_req, state, record in zip(
            sorted(traj.requested_times), traj.states[1:], traj.records[1:]
        ):
            _write_snapshot(out / f"snapshot_{t_req:.6f}.csv", state, record)

    verdict = evaluate_expectations(scn, traj)
    (out / "verdict.txt").write_text("\n".join(verdict.lines()) + "\n")
    for line in verdict.lines():
        print(line)
    return 0 if verdict.all_passed else 2


def _run_mms(mode: str, output_dir: str) -> int:
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    spatial = spatial_order_study(mode)
    temporal = temporal_order_study(mode)
    lines = ["study,level,error,order"]
    for study in (spatial, temporal):
        for i, (res, err) in enumerate(zip(study.resolutions, study.errors)):
            order = "" if i == 0 else f"{study.orders[i - 1]:.17g}"
            lines.append(f"{study.label},{res},{err:.17g},{order}")
    (out / "mms_orders.csv").write_text("\n".join(lines) + "\n")

    ok = True
    for label, study, target in (
        ("spatial", spatial, SPATIAL_ORDER_TARGET),
        ("temporal", temporal, TEMPORAL_ORDER_TARGET),
    ):
        worst = min(study.orders)
        passed = worst >= target
        ok = ok and passed
        print(
            f"{'PASS' if passed else 'FAIL'} {label} convergence ({mode}): "
            f"orders {[f'{o:.2f}' for o in study.orders]}, target >= {target}"
        )
    return 0 if ok else 2


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="chemotax",
        description=(
            "Explicit finite-difference runs of the transformed chemotaxis "
            "system on [0,1] with time-dependent Dirichlet data."
        ),
    )
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--config", metavar="PATH", help="key = value run configuration file")
    source.add_argument(
        "--scenario", metavar="NAME", help=f"built-in preset ({', '.join(PRESET_NAMES)})"
    )
    source.add_argument(
        "--all-presets", action="store_true", help="run every built-in preset sequentially"
    )
    source.add_argument(
        "--mms",
        metavar="MODE",
        choices=(MODE_EPS_POSITIVE, MODE_EPS_ZERO),
        help="manufactured-solution convergence study (eps_positive or eps_zero)",
    )
    parser.add_argument("--output", metavar="DIR", help="output directory (default: out)")
    parser.add_argument("--t-end", type=float, default=None, help="override the run horizon")
    parser.add_argument("--n-cells", type=int, default=None, help="override the mesh resolution")

    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return int(err.code or 0) if err.code in (0, None) else 1

    try:
        if args.mms:
            return _run_mms(args.mms, args.output or "out")

        if args.all_presets:
            base = Path(args.output or "out")
            worst = 0
            for name in PRESET_NAMES:
                scn = preset(name).with_overrides(t_end=args.t_end, n_cells=args.n_cells)
                rc = RunConfig(scenario=scn, output_dir=str(base / name))
                print(f"== {name}")
                code = execute(rc)
                worst = 1 if 1 in (worst, code) else max(worst, code)
            return worst

        if args.scenario:
            if args.scenario not in PRESET_NAMES:
                raise ConfigurationError(
                    f"unknown scenario {args.scenario!r}; valid names: {', '.join(PRESET_NAMES)}"
                )
            scn = preset(args.scenario).with_overrides(t_end=args.t_end, n_cells=args.n_cells)
            return execute(RunConfig(scenario=scn, output_dir=args.output or "out"))

        if args.config:
            rc = parse_config(Path(args.config).read_text())
            scn = rc.scenario.with_overrides(t_end=args.t_end, n_cells=args.n_cells)
            return execute(
                RunConfig(
                    scenario=scn,
                    output_dir=args.output or rc.output_dir,
                    emit_snapshots=rc.emit_snapshots,
                )
            )
    except (ConfigurationError, DomainError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1

    parser.print_usage(sys.stderr)
    print("error: one of --config/--scenario/--all-presets/--mms is required", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
