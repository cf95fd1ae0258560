"""The linear gradient flow x' = -Hx with H = aI + 2bQ.

The potential is ``U(x) = a/2 sum x_i^2 + b/2 sum_ij A_ij (x_i + x_j)^2``,
which equals ``x.Hx / 2``. System eigenvalues are ``lambda_i = -a - 2b q_{n-i+1}``,
so the mode of the smallest Q-eigenvalue is the one that goes unstable first.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateWindowError, InvalidParameterError
from .graph import Graph
from .spectral import CLUSTER_TOL, SpectralDecomposition, decompose_graph, signless_laplacian

__all__ = [
    "STABILITY_TOL",
    "OVERFLOW_NORM",
    "PotentialParams",
    "hamiltonian",
    "energy",
    "quadratic_energy",
    "gradient",
    "SystemSpectrum",
    "system_spectrum",
    "stable_by_condition",
    "principal_window",
    "window_midpoint",
    "StabilityDiagramData",
    "stability_diagram",
    "random_unit_state",
    "distance_to_subspace",
    "Trajectory",
    "simulate",
    "breathing_mode_check",
]

STABILITY_TOL = 1e-10
OVERFLOW_NORM = 1e100
RK4_STEP_GUARD = 0.1


@dataclass(frozen=True)
class PotentialParams:
    a: float
    b: float

    def __post_init__(self):
        if not self.b > 0:
            raise InvalidParameterError(f"b must be strictly positive, got {self.b}")


def _check_state(g: Graph, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (g.n,):
        raise InvalidParameterError(f"state has shape {x.shape}, expected ({g.n},)")
    return x


def hamiltonian(g: Graph, params: PotentialParams) -> np.ndarray:
    """H = aI + 2bQ."""
    return params.a * np.eye(g.n) + 2.0 * params.b * signless_laplacian(g)


def energy(g: Graph, params: PotentialParams, x) -> float:
    """U(x) evaluated as the double sum over ordered adjacent pairs."""
    x = _check_state(g, x)
    A = g.adjacency_matrix()
    pair_sums = x[:, None] + x[None, :]
    return float(0.5 * params.a * np.dot(x, x) + 0.5 * params.b * np.sum(A * pair_sums**2))


def quadratic_energy(g: Graph, params: PotentialParams, x) -> float:
    """x.Hx / 2, the matrix form of :func:`energy`."""
    x = _check_state(g, x)
    return float(0.5 * x @ hamiltonian(g, params) @ x)


def gradient(g: Graph, params: PotentialParams, x) -> np.ndarray:
    """Gradient of U, i.e. Hx. The flow moves along its negative."""
    x = _check_state(g, x)
    Q = signless_laplacian(g)
    return params.a * x + 2.0 * params.b * (Q @ x)


@dataclass(frozen=True)
class SystemSpectrum:
    """System eigenvalues (descending) and their modes as columns."""

    lambdas: np.ndarray
    modes: np.ndarray
    stability: str

    @property
    def lambda_max(self) -> float:
        return float(self.lambdas[0])


def system_spectrum(dec: SpectralDecomposition, params: PotentialParams,
                    tol: float = STABILITY_TOL) -> SystemSpectrum:
    # reversing the Q order maps q_n to lambda_1
    lambdas = -params.a - 2.0 * params.b * dec.eigenvalues[::-1]
    modes = dec.eigenvectors[:, ::-1]
    top = lambdas[0]
    if top < -tol:
        stability = "stable"
    elif abs(top) <= tol:
        stability = "marginal"
    else:
        stability = "unstable"
    return SystemSpectrum(lambdas, modes, stability)


def stable_by_condition(q_min: float, params: PotentialParams) -> bool:
    """Stability test written directly on the Q-spectrum: q_n > -a / 2b."""
    return q_min > -params.a / (2.0 * params.b)


def principal_window(dec: SpectralDecomposition, b: float) -> tuple[float, float]:
    """Open interval of ``a`` for which exactly lambda_1 is positive.

    Inside ``(-2b q_{n-1}, -2b q_n)`` the first system eigenvalue is positive
    and the second negative.
    """
    if not b > 0:
        raise InvalidParameterError(f"b must be strictly positive, got {b}")
    if dec.n < 2:
        raise InvalidParameterError("principal window needs at least two vertices")
    q_last, q_prev = dec.eigenvalues[-1], dec.eigenvalues[-2]
    if q_prev - q_last <= 1e-9:
        raise DegenerateWindowError(
            f"smallest Q-eigenvalue {q_last:.6g} is not simple (next is {q_prev:.6g})")
    return (-2.0 * b * q_prev, -2.0 * b * q_last)


def window_midpoint(dec: SpectralDecomposition, b: float = 1.0) -> PotentialParams:
    lo, hi = principal_window(dec, b)
    return PotentialParams(0.5 * (lo + hi), b)


@dataclass(frozen=True)
class StabilityDiagramData:
    """Zero-crossing lines a = -2bq in the (b, a) plane, one per distinct q."""

    q: np.ndarray
    slopes: np.ndarray
    b: np.ndarray
    a: np.ndarray  # shape (len(q), len(b))

    def lines_csv(self) -> str:
        rows = ["q,slope"] + [f"{q:.12g},{s:.12g}" for q, s in zip(self.q, self.slopes)]
        return "\n".join(rows) + "\n"

    def polyline_csv(self) -> str:
        rows = ["q,b,a"]
        for q, a_row in zip(self.q, self.a):
            rows.extend(f"{q:.12g},{b:.12g},{a:.12g}" for b, a in zip(self.b, a_row))
        return "\n".join(rows) + "\n"


def stability_diagram(dec: SpectralDecomposition, b_range=(0.0, 1.0), samples: int = 51,
                      tol: float = CLUSTER_TOL) -> StabilityDiagramData:
    b_min, b_max = b_range
    if b_min < 0 or b_max <= b_min:
        raise InvalidParameterError(f"bad b range {b_range}")
    q = dec.distinct_eigenvalues(tol)
    slopes = -2.0 * q
    b = np.linspace(b_min, b_max, samples)
    return StabilityDiagramData(q, slopes, b, np.outer(slopes, b))


def random_unit_state(n: int, seed: int = 0) -> np.ndarray:
    """Deterministic pseudo-random unit vector."""
    x = np.random.default_rng(seed).standard_normal(n)
    return x / np.linalg.norm(x)


def distance_to_subspace(x: np.ndarray, basis: np.ndarray) -> float:
    """Distance from the direction of ``x`` to an orthonormal column basis."""
    norm = np.linalg.norm(x)
    if norm == 0 or not np.isfinite(norm):
        return float("nan")
    u = x / norm
    return float(np.linalg.norm(u - basis @ (basis.T @ u)))


@dataclass
class Trajectory:
    t: np.ndarray
    states: np.ndarray  # (len(t), n)
    dist_to_E1: np.ndarray
    method: str
    truncated: bool = False

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def directions(self) -> np.ndarray:
        return self.states / np.linalg.norm(self.states, axis=1, keepdims=True)

    def to_csv(self) -> str:
        n = self.states.shape[1]
        header = ",".join(["t"] + [f"x_{i}" for i in range(n)] + ["dist_E1"])
        lines = [header]
        for t, x, d in zip(self.t, self.states, self.dist_to_E1):
            lines.append(",".join(f"{v:.12g}" for v in (t, *x, d)))
        return "\n".join(lines) + "\n"


def simulate(g: Graph, params: PotentialParams, x0=None, t_max: float = 10.0, dt: float = 0.01,
             method: str = "exact_modal", dec: SpectralDecomposition | None = None,
             seed: int = 0, sample_every: int = 1) -> Trajectory:
    """Integrate x' = -Hx from ``x0`` on the grid ``t_k = k dt``.

    ``exact_modal`` evaluates sum_i c_i exp(lambda_i t) v_i with c_i = v_i.x0;
    ``rk4`` takes classical Runge-Kutta steps of size ``dt`` and requires
    ``dt * max|lambda| <= 0.1``. The recorded distance to E_1 is measured on
    the normalized state. Integration stops early, with ``truncated=True``,
    once the state norm exceeds 1e100.
    """
    if t_max <= 0 or dt <= 0:
        raise InvalidParameterError(f"t_max and dt must be positive, got {t_max}, {dt}")
    if x0 is None:
        x0 = random_unit_state(g.n, seed)
    x0 = _check_state(g, x0)
    if not np.any(x0):
        raise InvalidParameterError("initial state is zero")
    if dec is None:
        dec = decompose_graph(g)
    spec = system_spectrum(dec, params)
    lam, V = spec.lambdas, spec.modes
    principal = V[:, : len(dec.cluster_of(dec.n - 1))]

    steps = max(1, math.ceil(t_max / dt - 1e-9))
    times, states = [], []
    truncated = False

    if method == "exact_modal":
        coeffs = V.T @ x0
        for k in range(0, steps + 1, sample_every):
            t = k * dt
            with np.errstate(over="ignore", invalid="ignore"):
                x = V @ (coeffs * np.exp(lam * t))
            if not np.all(np.isfinite(x)) or np.linalg.norm(x) > OVERFLOW_NORM:
                truncated = True
                break
            times.append(t)
            states.append(x)
    elif method == "rk4":
        if dt * np.max(np.abs(lam)) > RK4_STEP_GUARD:
            raise InvalidParameterError(
                f"rk4 step too large: dt*max|lambda| = {dt * np.max(np.abs(lam)):.3g} > {RK4_STEP_GUARD}")
        H = hamiltonian(g, params)
        x = x0.copy()
        times.append(0.0)
        states.append(x.copy())
        for k in range(1, steps + 1):
            k1 = -H @ x
            k2 = -H @ (x + 0.5 * dt * k1)
            k3 = -H @ (x + 0.5 * dt * k2)
            k4 = -H @ (x + dt * k3)
            x = x + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
            if not np.all(np.isfinite(x)) or np.linalg.norm(x) > OVERFLOW_NORM:
                truncated = True
                break
            if k % sample_every == 0:
                times.append(k * dt)
                states.append(x.copy())
    else:
        raise InvalidParameterError(f"unknown method {method!r}; use exact_modal or rk4")

    states = np.array(states)
    dist = np.array([distance_to_subspace(x, principal) for x in states])
    return Trajectory(np.array(times), states, dist, method, truncated)


def breathing_mode_check(dec: SpectralDecomposition, which: str = "lambda_n",
                         angle_tol: float = 1e-6) -> bool:
    """Is the all-ones vector an eigenvector of the chosen extreme system mode?

    ``which="lambda_n"`` inspects the most stable mode (eigenspace of q_1),
    ``which="lambda_1"`` the principal one (eigenspace of q_n). The check
    passes when the angle between (1,...,1) and that eigenspace is within
    ``angle_tol``.
    """
    if which == "lambda_n":
        idx = dec.cluster_of(0)
    elif which == "lambda_1":
        idx = dec.cluster_of(dec.n - 1)
    else:
        raise InvalidParameterError(f"which must be 'lambda_n' or 'lambda_1', got {which!r}")
    basis = dec.eigenvectors[:, idx]
    ones = np.ones(dec.n) / math.sqrt(dec.n)
    sine = np.linalg.norm(ones - basis @ (basis.T @ ones))
    return math.asin(min(1.0, float(sine))) <= angle_tol
