"""Command-line entry point: coin, curves, stern-gerlach, validate-field"""
import functools
import json
from pathlib import Path
from typing import Optional, Sequence, Tuple

import click
import numpy as np
import pandas as pd

from src import __version__
from src import config as settings
from src.artifacts import (
    RunManifest,
    curves_frame,
    impact_frame,
    trajectory_frame,
    write_csv,
    write_json,
)
from src.bohmian_engine import Mixture, PureState, run_ensemble
from src.coin_game import PRESETS, ClapAxis, classical_agreement_curve, run_protocol
from src.errors import ProtocolError, SimulationError
from src.experiment_stats import (
    crossing_check,
    density_histogram_check,
    quantization_report,
    rectification_report,
    spot_statistics,
)
from src.pauli_dynamics import (
    GridSpec,
    density_profile,
    evolve_in_field,
    initial_spinor,
    mixture_density,
    post_field_spinor,
    pure_density,
    validate_field,
)
from src.physical_config import PhysicalConfig, derive_beam_params, load_config
from src.two_state_postulate import BlochAngles, quantum_agreement_curve

# (theta0 deg, phi0 deg) or None for the mixture, and the trajectory count
SG_PRESETS = {
    "fig7": ((60.0, 0.0), 6),
    "fig8": ((90.0, 0.0), 6),
    "fig9": (None, 6),
}
DEFAULT_ENSEMBLE = 100
DENSITY_POINTS = 401


def _reported(command):
    """Turn simulator failures into a one-line error and a nonzero exit"""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except (SimulationError, ValueError) as e:
            raise click.ClickException(f"✗ {type(e).__name__}: {e}") from e

    return wrapper


def _out_dir(out: Optional[Path], command: str) -> Path:
    path = Path(out) if out else Path(settings.OUTPUT_DIR) / command
    path.mkdir(parents=True, exist_ok=True)
    return path


def _config(path: Optional[Path]) -> Tuple[PhysicalConfig, Optional[str]]:
    chosen = path or settings.PHYSICAL_CONFIG_PATH
    return load_config(chosen), (str(chosen) if chosen else None)


def _parse_axis(text: str):
    """'z', '-y' or 'ax,ay,az'"""
    if "," in text:
        try:
            return ClapAxis.parse([float(c) for c in text.split(",")])
        except ValueError as e:
            raise ProtocolError(f"cannot parse axis {text!r}") from e
    return ClapAxis.parse(text)


@click.group()
@click.version_option(version=__version__)
def main():
    """Contextual measurement simulator: coin game, Born curves and Stern-Gerlach trajectories."""


@main.command()
@click.option("--preset", type=click.Choice(sorted(PRESETS)), help="Built-in clap sequence")
@click.option("--axis", "axes", multiple=True, help="Clap axis: x, y, z, -z or ax,ay,az (repeat)")
@click.option(
    "--protocol",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="JSON file with axes, and optionally trials and seed",
)
@click.option("--trials", type=int, default=None, help="Number of games [default: 10000]")
@click.option("--seed", type=int, default=None, help="Root seed")
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=None)
@_reported
def coin(preset, axes, protocol, trials, seed, out):
    """Clap a floating coin along successive axes and tabulate the outcomes."""
    chosen = [bool(preset), bool(axes), protocol is not None]
    if sum(chosen) != 1:
        raise click.UsageError("give exactly one of --preset, --axis or --protocol")

    if preset:
        axis_specs = list(PRESETS[preset])
    elif axes:
        axis_specs = [_parse_axis(a).heads_direction for a in axes]
    else:
        try:
            with open(protocol, "r", encoding="utf-8") as f:
                protocol_data = json.load(f)
        except json.JSONDecodeError as e:
            raise ProtocolError(f"{protocol}: invalid JSON ({e.msg})") from e
        if not isinstance(protocol_data, dict) or "axes" not in protocol_data:
            raise ProtocolError(f"{protocol}: expected an object with an 'axes' list")
        axis_specs = protocol_data["axes"]
        trials = trials if trials is not None else protocol_data.get("trials")
        seed = seed if seed is not None else protocol_data.get("seed")

    trials = 10000 if trials is None else int(trials)
    seed = settings.DEFAULT_SEED if seed is None else int(seed)
    out_dir = _out_dir(out, "coin")
    RunManifest(
        command="coin",
        parameters={
            "preset": preset,
            "axes": [a if isinstance(a, str) else list(a) for a in axis_specs],
            "trials": trials,
        },
        seed=seed,
        out_dir=str(out_dir),
    ).save(out_dir)

    result = run_protocol(axis_specs, trials, seed)
    write_csv(out_dir / "frequencies.csv", result.to_frame())
    write_json(
        out_dir / "joint_counts.json",
        {"trials": result.trials, "seed": result.seed, "counts": result.joint_counts},
    )
    for step in result.steps:
        click.echo(
            f"  step {step.step}: P(Heads)={step.p_heads:.4f} "
            f"agree_prev={step.p_agree_prev:.4f} agree_first={step.p_agree_first:.4f}"
        )
    click.echo(f"✓ Wrote coin frequencies for {trials} games to {out_dir}")


@main.command()
@click.option("--angle-count", type=click.IntRange(min=2), default=181, show_default=True)
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=None)
@_reported
def curves(angle_count, out):
    """Agreement probability of two claps at angle beta: classical coin vs spin-1/2."""
    out_dir = _out_dir(out, "curves")
    RunManifest(
        command="curves", parameters={"angle_count": angle_count}, out_dir=str(out_dir)
    ).save(out_dir)

    betas = np.radians(np.linspace(0.0, 180.0, angle_count))
    betas[-1] = np.pi
    frame = curves_frame(classical_agreement_curve(betas), quantum_agreement_curve(betas))
    write_csv(out_dir / "curves.csv", frame)
    click.echo(f"✓ Wrote {angle_count} curve points to {out_dir}")


def _density_frame(source, config: PhysicalConfig, params, times: Sequence[float]) -> pd.DataFrame:
    reach = params.screen_offset + 5 * config.sigma0
    z_grid = np.linspace(-reach, reach, DENSITY_POINTS)
    if isinstance(source, PureState):
        return density_profile(post_field_spinor(source.angles, config, params), times, z_grid)
    return pd.concat(
        [
            pd.DataFrame(
                {
                    "t": np.full(z_grid.shape, float(t)),
                    "z": z_grid,
                    "rho": mixture_density(config, params, z_grid, t),
                }
            )
            for t in times
        ],
        ignore_index=True,
    )


@main.command("stern-gerlach")
@click.option("--preset", type=click.Choice(sorted(SG_PRESETS)), help="Built-in source and size")
@click.option("--pure", nargs=2, type=float, default=None, metavar="THETA_DEG PHI_DEG", help="Pure state")
@click.option("--mixture", is_flag=True, help="theta0, phi0 drawn uniformly per particle")
@click.option("--n", "n", type=click.IntRange(min=1), default=None, help="Number of trajectories")
@click.option("--seed", type=int, default=None)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--steps", type=click.IntRange(min=1), default=None, help="RK4 steps over the free flight")
@click.option("--snapshot", "snapshots", type=float, multiple=True, help="Density time after field exit, s (repeat)")
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=None)
@_reported
def stern_gerlach(preset, pure, mixture, n, seed, config_path, steps, snapshots, out):
    """Bohmian trajectories from the magnet to the screen, with spot statistics."""
    chosen = [bool(preset), pure is not None, mixture]
    if sum(chosen) != 1:
        raise click.UsageError("give exactly one of --preset, --pure or --mixture")

    if preset:
        angles_deg, preset_n = SG_PRESETS[preset]
        n = n or preset_n
    else:
        angles_deg = tuple(pure) if pure is not None else None
        n = n or DEFAULT_ENSEMBLE
    source = Mixture() if angles_deg is None else PureState(BlochAngles.from_degrees(*angles_deg))
    seed = settings.DEFAULT_SEED if seed is None else seed
    steps = steps or settings.RK4_STEPS

    config, config_source = _config(config_path)
    params = derive_beam_params(config)
    times = sorted(snapshots) if snapshots else [0.0, params.t_screen]
    out_dir = _out_dir(out, "stern-gerlach")
    RunManifest(
        command="stern-gerlach",
        parameters={
            "preset": preset,
            "source": source.describe(),
            "n": n,
            "steps": steps,
            "sample_every": settings.TRAJECTORY_SAMPLE_EVERY,
            "snapshots": times,
        },
        seed=seed,
        config_path=config_source,
        out_dir=str(out_dir),
    ).save(out_dir)

    result = run_ensemble(
        source, n, config, seed, steps=steps, sample_every=settings.TRAJECTORY_SAMPLE_EVERY, params=params
    )
    summary = spot_statistics(result)
    # full sample tables only for ensembles small enough to inspect
    exported = result.trajectories[: settings.CROSSING_SCAN_LIMIT]
    write_csv(out_dir / "trajectories.csv", trajectory_frame(exported, config))
    write_csv(out_dir / "impacts.csv", impact_frame(result.trajectories))

    if isinstance(source, PureState):
        field = post_field_spinor(source.angles, config, params)

        def screen_density(z):
            return pure_density(field, z, params.t_screen)

    else:

        def screen_density(z):
            return mixture_density(config, params, z, params.t_screen)

    report = {
        "n": result.n,
        "source": result.source,
        "seed": result.seed,
        "born_expected": result.born_expected,
        "spots": summary.as_dict(),
        "axis_ties": result.ties,
        "trajectories_exported": len(exported),
        "rectification": rectification_report(result.trajectories).as_dict(),
        "quantization": quantization_report(result.trajectories, config, params),
        "histogram_max_deviation": density_histogram_check(result.final_z(), screen_density),
        "beam": {
            "dt_field": params.dt_field,
            "z_delta": params.z_delta,
            "u": params.u,
            "t_screen": params.t_screen,
        },
        "config": config.model_dump(),
    }
    if n <= settings.CROSSING_SCAN_LIMIT:
        crossings = crossing_check(result.trajectories)
        write_json(out_dir / "crossing.json", crossings.as_dict())
        report["crossing_scan"] = crossings.as_dict()
    else:
        report["crossing_scan"] = "skipped"
        click.echo(f"⚠ Crossing scan skipped for {n} > {settings.CROSSING_SCAN_LIMIT} trajectories")
    write_json(out_dir / "summary.json", report)
    write_csv(out_dir / "density.csv", _density_frame(source, config, params, times))

    click.echo(
        f"✓ {result.n} trajectories: N+={result.n_up} N-={result.n_down} "
        f"fraction_up={summary.fraction_up:.4f} ± {summary.binomial_stderr:.4f}"
    )
    if summary.verdict:
        click.echo(f"  Born {summary.expected:.4f}: z={summary.z_score:+.2f} {summary.verdict}")
    click.echo(f"✓ Wrote trajectories and summary to {out_dir}")


@main.command("validate-field")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--nodes", type=click.IntRange(min=2), default=None, help="Grid nodes per axis")
@click.option("--box-sigmas", type=click.FloatRange(min=0, min_open=True), default=None, help="Box width in sigma0")
@click.option("--steps", type=click.IntRange(min=1), default=None, help="Time steps across the magnet")
@click.option("--theta", type=float, default=90.0, show_default=True, help="theta0 of the test spinor, deg")
@click.option("--lab-frame", is_flag=True, help="Apply the B0 precession on the grid instead of analytically")
@click.option("--tolerance", type=float, default=0.05, show_default=True)
@click.option("--snapshot", "snapshots", type=float, multiple=True, help="Grid snapshot time, s (repeat)")
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=None)
@_reported
def validate_field_command(config_path, nodes, box_sigmas, steps, theta, lab_frame, tolerance, snapshots, out):
    """Split-operator Pauli evolution across the magnet against the closed-form offset and speed."""
    config, config_source = _config(config_path)
    params = derive_beam_params(config)
    nodes = nodes or settings.GRID_NODES
    box_sigmas = box_sigmas or settings.GRID_BOX_SIGMAS
    steps = steps or settings.GRID_STEPS
    out_dir = _out_dir(out, "validate-field")
    RunManifest(
        command="validate-field",
        parameters={
            "nodes": nodes,
            "box_sigmas": box_sigmas,
            "steps": steps,
            "theta_deg": theta,
            "interaction_picture": not lab_frame,
            "tolerance": tolerance,
            "snapshots": list(snapshots),
        },
        config_path=config_source,
        out_dir=str(out_dir),
    ).save(out_dir)

    grid = GridSpec.for_config(config, nodes=nodes, box_sigmas=box_sigmas)
    state = evolve_in_field(
        initial_spinor(BlochAngles.from_degrees(theta), config),
        grid,
        steps,
        params,
        interaction_picture=not lab_frame,
        snapshot_times=snapshots,
    )
    validation = validate_field(state, params, tolerance=tolerance)
    write_json(out_dir / "validation.json", validation.as_dict())
    for i, (t, plus, minus) in enumerate(state.snapshots):
        write_csv(out_dir / f"snapshot_{i:02d}.csv", state.snapshot_frame(plus, minus).assign(t=t))

    click.echo(
        f"  z_delta {validation.measured_z_delta:.4e} vs {validation.expected_z_delta:.4e} "
        f"({validation.z_delta_error:.2%}); u {validation.measured_u:.4e} vs "
        f"{validation.expected_u:.4e} ({validation.u_error:.2%}); norm drift {validation.norm_drift:.1e}"
    )
    if not validation.passed:
        click.echo(f"✗ Field validation FAIL (tolerance {tolerance:.0%})", err=True)
        raise SystemExit(1)
    click.echo(f"✓ Field validation PASS (tolerance {tolerance:.0%})")


if __name__ == "__main__":
    main()
