"""de Broglie-Bohm particle layer: guidance velocity, spin vector and trajectory ensembles"""
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple, Union

import numpy as np
from scipy.optimize import newton
from scipy.special import ndtr

from src.errors import NodeRegionError, NonConvergedError, SparseSamplingError
from src.experiment_stats import EnsembleResult, check_separation, classify_impacts
from src.pauli_dynamics import SIGMA_X, SIGMA_Y, SIGMA_Z, Regime, SpinorField
from src.physical_config import DerivedBeamParams, PhysicalConfig, derive_beam_params
from src.two_state_postulate import BlochAngles, born_up_probability

# rho below this fraction of the peak density counts as a node
RHO_FLOOR_FRACTION = 1e-300
HALVING_TOLERANCE = 1e-8
SAMPLE_SPACING_FRACTION = 0.1
DEFAULT_STEPS = 4000


@dataclass(frozen=True)
class ParticleState:
    """Particle position X(t) in the transverse plane"""

    x: float
    z: float
    t: float


@dataclass(frozen=True)
class SpinVector:
    """Local spin vector s = (hbar / 2 rho) Psi^dagger sigma Psi, in J.s"""

    sx: float
    sy: float
    sz: float

    @property
    def magnitude(self) -> float:
        return float(np.sqrt(self.sx**2 + self.sy**2 + self.sz**2))

    @property
    def theta(self) -> float:
        return float(np.arccos(np.clip(self.sz / self.magnitude, -1.0, 1.0)))

    @property
    def phi(self) -> float:
        # relative phase of Psi- to Psi+ is exp(-i phi)
        return float(np.mod(np.arctan2(-self.sy, self.sx), 2 * np.pi))


@dataclass
class Trajectory:
    """Time-ordered samples of one particle after the field, with its spin polar angle"""

    traj_id: int
    t: np.ndarray
    x: np.ndarray
    z: np.ndarray
    vz: np.ndarray
    theta_spin: np.ndarray
    entry: Tuple[float, float]
    angles: BlochAngles
    label: Optional[str] = None


@dataclass(frozen=True)
class PureState:
    angles: BlochAngles

    def describe(self) -> Dict[str, object]:
        return {"kind": "pure", "theta0": self.angles.theta0, "phi0": self.angles.phi0}


@dataclass(frozen=True)
class Mixture:
    """theta0 uniform on [0, pi], phi0 uniform on [0, 2 pi), drawn per particle"""

    def describe(self) -> Dict[str, object]:
        return {"kind": "mixture"}


Source = Union[PureState, Mixture]


def _rho_floor(field: SpinorField) -> float:
    return RHO_FLOOR_FRACTION * field.peak_density


def _check_density(field: SpinorField, state: ParticleState, rho: float) -> None:
    if not rho > _rho_floor(field):
        raise NodeRegionError(
            f"density {rho:.3e} at (x={state.x:.3e}, z={state.z:.3e}, t={state.t:.3e}) is in a node"
        )


def guidance_velocity(field: SpinorField, state: ParticleState) -> np.ndarray:
    """
    Particle velocity (v_x, v_z) = (hbar / m rho) Im(Psi^dagger grad Psi)

    Gradients come from the closed-form envelopes and phases of the field.
    """
    plus, minus = field.components(state.x, state.z, state.t)
    rho = float(abs(plus) ** 2 + abs(minus) ** 2)
    _check_density(field, state, rho)
    (dx_plus, dz_plus), (dx_minus, dz_minus) = field.gradients(state.x, state.z, state.t)
    current_x = np.imag(np.conj(plus) * dx_plus + np.conj(minus) * dx_minus)
    current_z = np.imag(np.conj(plus) * dz_plus + np.conj(minus) * dz_minus)
    prefactor = field.config.hbar / (field.config.mass * rho)
    return np.array([prefactor * float(current_x), prefactor * float(current_z)])


def finite_difference_velocity(field: SpinorField, state: ParticleState, h: float = 3e-13) -> np.ndarray:
    """Guidance velocity with central differences of the spinor in place of analytic gradients"""
    spinor = field(state.x, state.z, state.t).as_array()
    rho = float(np.vdot(spinor, spinor).real)
    _check_density(field, state, rho)

    def derivative(dx: float, dz: float) -> np.ndarray:
        ahead_x, ahead_z = state.x + dx, state.z + dz
        behind_x, behind_z = state.x - dx, state.z - dz
        # divide by the representable step, not 2h
        span = (ahead_x - behind_x) + (ahead_z - behind_z)
        ahead = field(ahead_x, ahead_z, state.t).as_array()
        behind = field(behind_x, behind_z, state.t).as_array()
        return (ahead - behind) / span

    prefactor = field.config.hbar / (field.config.mass * rho)
    return np.array(
        [
            prefactor * float(np.imag(np.vdot(spinor, derivative(h, 0.0)))),
            prefactor * float(np.imag(np.vdot(spinor, derivative(0.0, h)))),
        ]
    )


def spin_vector(field: SpinorField, state: ParticleState) -> SpinVector:
    """Spin vector of the field at the particle position"""
    spinor = field(state.x, state.z, state.t).as_array()
    rho = float(np.vdot(spinor, spinor).real)
    _check_density(field, state, rho)
    scale = field.config.hbar / (2 * rho)
    return SpinVector(
        *(scale * float(np.vdot(spinor, sigma @ spinor).real) for sigma in (SIGMA_X, SIGMA_Y, SIGMA_Z))
    )


# ---------------------------------------------------------------------------
# Vectorized flow for ensembles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _LobeFlow:
    """
    z-velocity field of the post-field spinor for per-particle lobe weights

    The envelopes are real, so Im(Psi^dagger dPsi/dz) reduces to k (|Psi+|^2 - |Psi-|^2)
    and v_x vanishes; v_z = u (rho+ - rho-) / rho.
    """

    config: PhysicalConfig
    params: DerivedBeamParams
    weight_plus: np.ndarray
    weight_minus: np.ndarray

    def lobe_weights(self, z: np.ndarray, t: float) -> Tuple[np.ndarray, np.ndarray]:
        center = self.params.lobe_center(t)
        two_var = 2 * self.config.sigma0**2
        rho_plus = self.weight_plus * np.exp(-((z - center) ** 2) / two_var)
        rho_minus = self.weight_minus * np.exp(-((z + center) ** 2) / two_var)
        return rho_plus, rho_minus

    def velocity(self, z: np.ndarray, t: float) -> np.ndarray:
        rho_plus, rho_minus = self.lobe_weights(z, t)
        rho = rho_plus + rho_minus
        nodes = ~(rho > RHO_FLOOR_FRACTION)
        if np.any(nodes):
            index = int(np.flatnonzero(nodes)[0])
            raise NodeRegionError(
                f"trajectory {index}: density vanishes at z={z[index]:.3e} m, t={t:.3e} s"
            )
        return self.params.u * (rho_plus - rho_minus) / rho

    def theta(self, z: np.ndarray, t: float) -> np.ndarray:
        rho_plus, rho_minus = self.lobe_weights(z, t)
        return np.arccos(np.clip((rho_plus - rho_minus) / (rho_plus + rho_minus), -1.0, 1.0))


def _rk4(
    velocity: Callable[[np.ndarray, float], np.ndarray],
    z0: np.ndarray,
    t0: float,
    dt: float,
    steps: int,
    sample_every: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """Classical fixed-step RK4; returns sample times and z samples (particles x samples)"""
    marks = sorted(set(range(0, steps + 1, max(1, sample_every))) | {steps})
    times = np.array([t0 + i * dt for i in marks])
    samples = np.empty((z0.size, len(marks)))
    samples[:, 0] = z0
    z = z0.copy()
    column = 1
    for i in range(steps):
        t = t0 + i * dt
        k1 = velocity(z, t)
        k2 = velocity(z + 0.5 * dt * k1, t + dt / 2)
        k3 = velocity(z + 0.5 * dt * k2, t + dt / 2)
        k4 = velocity(z + dt * k3, t + dt)
        z = z + (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        if column < len(marks) and marks[column] == i + 1:
            samples[:, column] = z
            column += 1
    return times, samples


def _sample_stride(flow: _LobeFlow, dt: float, sample_every: int) -> int:
    """
    Largest stride <= sample_every keeping |dz| < sigma0/10 between samples

    |v_z| <= u everywhere, so the bound holds a priori; 0 means even single
    steps move further than sigma0/10.
    """
    reach = flow.params.u * dt
    if reach == 0:
        return max(1, sample_every)
    limit = SAMPLE_SPACING_FRACTION * flow.config.sigma0 / reach
    return min(max(1, sample_every), int(np.ceil(limit)) - 1)


def _integrate_flow(
    flow: _LobeFlow, z0: np.ndarray, t0: float, t_end: float, steps: int, sample_every: int
) -> Tuple[np.ndarray, np.ndarray]:
    """RK4 with the step-halving acceptance check and the sample spacing bound"""
    dt = (t_end - t0) / steps
    stride = _sample_stride(flow, dt, sample_every)
    times, samples = _rk4(flow.velocity, z0, t0, dt, steps, max(1, stride))
    _, fine = _rk4(flow.velocity, z0, t0, dt / 2, 2 * steps, 2 * steps)
    change = np.abs(fine[:, -1] - samples[:, -1])
    worst = int(np.argmax(change))
    if change[worst] >= HALVING_TOLERANCE:
        raise NonConvergedError(
            f"trajectory {worst}: halving dt moved the final z by {change[worst]:.3e} m "
            f"(limit {HALVING_TOLERANCE:.0e} m); use more steps"
        )
    if stride < 1:
        raise SparseSamplingError(
            f"{steps} steps move a particle up to {flow.params.u * dt:.3e} m per step, "
            f"over sigma0/10 = {SAMPLE_SPACING_FRACTION * flow.config.sigma0:.3e} m; use more steps"
        )
    return times, samples


def _flow_for(field: SpinorField, count: int = 1) -> _LobeFlow:
    return _LobeFlow(
        config=field.config,
        params=field.params,
        weight_plus=np.full(count, field.angles.amplitude_plus**2),
        weight_minus=np.full(count, field.angles.amplitude_minus**2),
    )


def integrate_trajectory(
    field: SpinorField,
    initial: ParticleState,
    dt: float,
    t_end: float,
    sample_every: int = 1,
    traj_id: int = 0,
) -> Trajectory:
    """
    Integrate the guidance equation from `initial` to t_end with fixed-step RK4

    Halving dt must change the final z by less than 1e-8 m, otherwise
    NonConvergedError is raised. The sample stride drops below sample_every
    where needed to keep consecutive samples within sigma0/10.
    """
    if field.regime is not Regime.POST_FIELD:
        raise ValueError("trajectories are integrated on the post-field spinor")
    if not t_end > initial.t:
        raise ValueError(f"t_end must exceed the initial time {initial.t}")
    if not dt > 0:
        raise ValueError("dt must be positive")
    steps = max(1, int(round((t_end - initial.t) / dt)))
    flow = _flow_for(field)
    _check_density(field, initial, float(field.density(initial.x, initial.z, initial.t)))
    times, samples = _integrate_flow(flow, np.array([initial.z]), initial.t, t_end, steps, sample_every)
    z = samples[0]
    return Trajectory(
        traj_id=traj_id,
        t=times,
        x=np.full(times.shape, float(initial.x)),
        z=z,
        vz=np.array([flow.velocity(z[i : i + 1], t)[0] for i, t in enumerate(times)]),
        theta_spin=np.array([flow.theta(z[i : i + 1], t)[0] for i, t in enumerate(times)]),
        entry=(float(initial.x), float(initial.z)),
        angles=field.angles,
    )


def sample_initial_positions(n: int, config: PhysicalConfig, seed: int) -> np.ndarray:
    """n entrance positions (x0, z0) drawn from |Psi_0|^2, shape (n, 2)"""
    if int(n) < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    return rng.normal(0.0, config.sigma0, size=(int(n), 2))


def transport_through_field(
    z0: np.ndarray,
    weight_plus: np.ndarray,
    weight_minus: np.ndarray,
    config: PhysicalConfig,
    params: DerivedBeamParams,
) -> np.ndarray:
    """
    Field-exit z of particles entering at z0

    The one-dimensional z flow is order preserving and carries |Psi|^2, so it maps
    each entrance quantile of N(0, sigma0) onto the same quantile of the exit
    density w+ N(z_delta, sigma0) + w- N(-z_delta, sigma0).
    """
    z0 = np.asarray(z0, dtype=float)
    sigma0 = config.sigma0
    shift = params.z_delta
    weight_plus = np.broadcast_to(weight_plus, z0.shape)
    weight_minus = np.broadcast_to(weight_minus, z0.shape)
    upper = z0 > 0
    # work with the survival function above the axis to keep tail precision
    target = np.where(upper, ndtr(-z0 / sigma0), ndtr(z0 / sigma0))

    def residual(z):
        below = weight_plus * ndtr((z - shift) / sigma0) + weight_minus * ndtr((z + shift) / sigma0)
        above = weight_plus * ndtr(-(z - shift) / sigma0) + weight_minus * ndtr(-(z + shift) / sigma0)
        return np.where(upper, target - above, below - target)

    def slope(z):
        norm = 1 / (np.sqrt(2 * np.pi) * sigma0)
        return norm * (
            weight_plus * np.exp(-0.5 * ((z - shift) / sigma0) ** 2)
            + weight_minus * np.exp(-0.5 * ((z + shift) / sigma0) ** 2)
        )

    guess = z0 + (weight_plus - weight_minus) * shift
    if shift == 0:
        return z0.copy()
    return np.asarray(newton(residual, guess, fprime=slope, tol=1e-12 * sigma0, maxiter=100))


def run_ensemble(
    source: Source,
    n: int,
    config: PhysicalConfig,
    seed: int,
    steps: int = DEFAULT_STEPS,
    sample_every: int = 20,
    params: Optional[DerivedBeamParams] = None,
) -> EnsembleResult:
    """
    Integrate n trajectories from the magnet exit to the screen and count the spots

    Args:
        source: PureState or Mixture
        n: number of particles
        config: physical constants
        seed: positions use `seed`; mixture angles use the substream [seed, 1]
        steps: RK4 steps over the free flight
        sample_every: keep one sample per this many steps (plus the last), lowered
            when needed so consecutive samples stay within sigma0/10
        params: derived beam parameters, computed from config when omitted

    Returns:
        EnsembleResult ordered by trajectory index
    """
    params = params or derive_beam_params(config)
    check_separation(params, config)
    entry = sample_initial_positions(n, config, seed)

    if isinstance(source, PureState):
        angle_list = [source.angles] * int(n)
        born = born_up_probability(source.angles)
    else:
        rng = np.random.default_rng([seed, 1])
        thetas = rng.uniform(0.0, np.pi, size=int(n))
        phis = rng.uniform(0.0, 2 * np.pi, size=int(n))
        angle_list = [BlochAngles(float(a), float(b)) for a, b in zip(thetas, phis)]
        born = None

    weight_plus = np.array([a.amplitude_plus**2 for a in angle_list])
    weight_minus = np.array([a.amplitude_minus**2 for a in angle_list])
    exit_z = transport_through_field(entry[:, 1], weight_plus, weight_minus, config, params)

    flow = _LobeFlow(config, params, weight_plus, weight_minus)
    times, z = _integrate_flow(flow, exit_z, 0.0, params.t_screen, steps, sample_every)
    vz = np.column_stack([flow.velocity(z[:, j], t) for j, t in enumerate(times)])
    theta = np.column_stack([flow.theta(z[:, j], t) for j, t in enumerate(times)])

    is_up, is_tie = classify_impacts(z[:, -1], params, config)
    trajectories = [
        Trajectory(
            traj_id=i,
            t=times,
            x=np.full(times.shape, entry[i, 0]),
            z=z[i],
            vz=vz[i],
            theta_spin=theta[i],
            entry=(float(entry[i, 0]), float(entry[i, 1])),
            angles=angle_list[i],
            label="Up" if is_up[i] else "Down",
        )
        for i in range(int(n))
    ]
    n_up = int(np.count_nonzero(is_up))
    return EnsembleResult(
        trajectories=trajectories,
        n_up=n_up,
        n_down=int(n) - n_up,
        source=source.describe(),
        seed=int(seed),
        born_expected=born,
        ties=int(np.count_nonzero(is_tie)),
    )
