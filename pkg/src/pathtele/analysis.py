"""Closed-form fidelity averages, advantage classification, and the two
independent averaging routes (Gauss-Legendre quadrature and Haar Monte
Carlo) over the simulated protocol.

Input averages are over the Bloch sphere: <F> = (1/2) int_0^pi F(n)
sin(n) dn, with the azimuth dropping out of every fidelity here.  All
the integrands are low-degree polynomials in cos(n), so the fixed
64-node rule is exact to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import acos, asin, cos, pi, sqrt
from typing import Callable, Iterable, List, Tuple

import numpy as np

from .states import ControlSpec, DiagonalSeparable, PureQubit, Werner
from .protocol import ProtocolConfig, branch_stats_batch

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)

CLASSICAL_LIMIT = 2.0 / 3.0


@dataclass(frozen=True)
class SweepPoint:
    """One (X, y) coordinate of the interference/resource plane."""

    x: float
    y: float

    def __post_init__(self):
        if not -1.0 <= self.x <= 1.0:
            raise ValueError(f"X must lie in [-1, 1], got {self.x}")
        if not 0.0 <= self.y <= 1.0:
            raise ValueError(f"y must lie in [0, 1], got {self.y}")


def _sign(branch: str) -> float:
    if branch == "plus":
        return 1.0
    if branch == "minus":
        return -1.0
    raise ValueError(f"branch must be 'plus' or 'minus', got {branch!r}")


def avg_fidelity_K(pt: SweepPoint, branch: str) -> float:
    """Average fidelity of one branch of the path-K protocol."""
    s = _sign(branch)
    return (2.0 * pt.y + s * pt.x * pt.y + 2.0) / (3.0 * (2.0 + s * pt.x * pt.y))

def avg_fidelity_L(pt: SweepPoint, branch: str) -> float:
    """Average fidelity of one branch of the path-L protocol (y -> 1-y)."""
    s = _sign(branch)
    z = 1.0 - pt.y
    return (2.0 * z + s * pt.x * z + 2.0) / (3.0 * (2.0 + s * pt.x * z))

def avg_fidelity_werner(p: float, x: float, branch: str) -> float:
    """Average fidelity of one branch of path-K over a Werner resource."""
    s = _sign(branch)
    return (6.0 * (1.0 + p) + s * x * (1.0 - p)) / (12.0 + 3.0 * s * x * (1.0 - p))

def avg_fidelity_coherence_opt(c: float) -> float:
    """Best average fidelity at control coherence c, matched pair unitary."""
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"coherence must lie in [0, 1], got {c}")
    return (4.0 - c) / (6.0 - 3.0 * c)

def max_avg_fidelity_hadamard(c: float, phi_c: float) -> float:
    """Best branch average over a y=1 resource with the Hadamard readout."""
    x = c * cos(phi_c)
    return (4.0 - abs(x)) / (6.0 - 3.0 * abs(x))


@dataclass(frozen=True)
class AdvantageVerdict:
    """Which protocol variant beats the classical 2/3, if any."""

    verdict: str  # "K-protocol" | "L-protocol" | "none"
    margin: float  # best branch average minus 2/3, may be negative
    branch: str = ""  # winning branch ("plus"/"minus"), "" when none


def classify_advantage(pt: SweepPoint) -> AdvantageVerdict:
    """Compare all four branch averages at a sweep point against 2/3."""
    candidates = (
        ("K-protocol", "plus", avg_fidelity_K(pt, "plus")),
        ("K-protocol", "minus", avg_fidelity_K(pt, "minus")),
        ("L-protocol", "plus", avg_fidelity_L(pt, "plus")),
        ("L-protocol", "minus", avg_fidelity_L(pt, "minus")),
    )
    name, branch, best = max(candidates, key=lambda c: c[2])
    margin = best - CLASSICAL_LIMIT
    if margin <= 0.0:
        return AdvantageVerdict("none", margin, "")
    return AdvantageVerdict(name, margin, branch)


# ---------------------------------------------------------------------------
# Averaging oracles.

def quadrature_avg_fidelity(fid: Callable[[float], float]) -> float:
    """Bloch-sphere average of a fidelity given as a function of the polar angle."""
    total = 0.0
    for t, w in zip(_GL_NODES, _GL_WEIGHTS):
        total += w * fid(acos(t))
    return total / 2.0


def _node_kets(eta: float) -> np.ndarray:
    a = np.sqrt((1.0 + _GL_NODES) / 2.0)
    b = np.sqrt((1.0 - _GL_NODES) / 2.0) * np.exp(1j * eta)
    return np.column_stack([a.astype(complex), b])


def simulated_avg_fidelity(config: ProtocolConfig, branch: str, eta: float = 0.0) -> float:
    """Quadrature average of the simulated per-input branch fidelity."""
    stats = branch_stats_batch(config, _node_kets(eta))
    fids = stats.fid_plus if branch == "plus" else stats.fid_minus
    if branch not in ("plus", "minus"):
        raise ValueError(f"branch must be 'plus' or 'minus', got {branch!r}")
    return float(np.dot(_GL_WEIGHTS, fids) / 2.0)


def simulated_max_avg_fidelity(config: ProtocolConfig, eta: float = 0.0) -> float:
    """The better branch's simulated average; a flagged branch is skipped."""
    stats = branch_stats_batch(config, _node_kets(eta))
    best = -np.inf
    for fids in (stats.fid_plus, stats.fid_minus):
        if not np.any(np.isnan(fids)):
            best = max(best, float(np.dot(_GL_WEIGHTS, fids) / 2.0))
    return best


def haar_input_kets(samples: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-uniform pure qubit kets: cos(n) uniform, azimuth uniform."""
    t = rng.uniform(-1.0, 1.0, samples)
    eta = rng.uniform(0.0, 2.0 * pi, samples)
    a = np.sqrt((1.0 + t) / 2.0)
    b = np.sqrt((1.0 - t) / 2.0) * np.exp(1j * eta)
    return np.column_stack([a.astype(complex), b])


def mc_avg_fidelity(
    config: ProtocolConfig, samples: int, seed: int, branch: str = "plus"
) -> Tuple[float, float]:
    """Monte Carlo estimate (mean, standard error) of a branch average."""
    if samples < 2:
        raise ValueError("need at least 2 samples for a standard error")
    rng = np.random.default_rng(seed)
    stats = branch_stats_batch(config, haar_input_kets(samples, rng))
    fids = stats.fid_plus if branch == "plus" else stats.fid_minus
    mean = float(np.mean(fids))
    se = float(np.std(fids, ddof=1) / sqrt(samples))
    return mean, se


# ---------------------------------------------------------------------------
# Derived scans.

def control_for_x(x: float) -> ControlSpec:
    """A maximally coherent control realizing interference weight x."""
    if not -1.0 <= x <= 1.0:
        raise ValueError(f"X must lie in [-1, 1], got {x}")
    return ControlSpec(pi / 2.0, acos(x))


def _diag_shared(y: float) -> DiagonalSeparable:
    return DiagonalSeparable((1.0 - y) / 2.0, y / 2.0, y / 2.0, (1.0 - y) / 2.0)


def grid_config(channel: str, x: float, y: float) -> ProtocolConfig:
    """Protocol configuration realizing a sweep point on a path channel."""
    return ProtocolConfig(
        shared=_diag_shared(y),
        input=PureQubit(1.0),
        control=control_for_x(x),
        channel=channel,
    )


@dataclass(frozen=True)
class SweepRow:
    x: float
    y: float
    closed_plus: float
    closed_minus: float
    sim_plus: float
    sim_minus: float
    verdict: str
    margin: float


def xy_sweep(channel: str, resolution: float) -> List[SweepRow]:
    """Closed-form and simulated branch averages on a uniform (X, y) grid."""
    xs = grid_axis(-1.0, 1.0, resolution)
    ys = grid_axis(0.0, 1.0, resolution)
    closed = avg_fidelity_K if channel == "path-K" else avg_fidelity_L
    rows = []
    for x in xs:
        for y in ys:
            pt = SweepPoint(x, y)
            config = grid_config(channel, x, y)
            verdict = classify_advantage(pt)
            rows.append(
                SweepRow(
                    x=x,
                    y=y,
                    closed_plus=closed(pt, "plus"),
                    closed_minus=closed(pt, "minus"),
                    sim_plus=simulated_avg_fidelity(config, "plus"),
                    sim_minus=simulated_avg_fidelity(config, "minus"),
                    verdict=verdict.verdict,
                    margin=verdict.margin,
                )
            )
    return rows


def grid_axis(lo: float, hi: float, resolution: float) -> List[float]:
    """Uniform grid covering [lo, hi]; the step must divide the span."""
    if resolution <= 0:
        raise ValueError(f"resolution must be positive, got {resolution}")
    steps = (hi - lo) / resolution
    n = round(steps)
    if n < 1 or abs(steps - n) > 1e-9:
        raise ValueError(f"resolution {resolution} does not divide the span [{lo}, {hi}]")
    return [lo + (hi - lo) * i / n for i in range(n + 1)]


def find_werner_threshold(
    x: float = -1.0,
    branch: str = "plus",
    tol: float = 1e-6,
    use_simulation: bool = True,
) -> float:
    """Bisection for the Werner weight where the branch average crosses 2/3."""
    control = control_for_x(x)

    def gap(p: float) -> float:
        if use_simulation:
            config = ProtocolConfig(
                shared=Werner(p), input=PureQubit(1.0), control=control, channel="path-K"
            )
            value = simulated_avg_fidelity(config, branch)
        else:
            value = avg_fidelity_werner(p, x, branch)
        return value - CLASSICAL_LIMIT

    lo, hi = 0.0, 1.0
    glo, ghi = gap(lo), gap(hi)
    if glo > 0.0 or ghi < 0.0:
        raise ValueError(f"no sign change on [0, 1] for X={x}, branch={branch}")
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        if gap(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2.0


@dataclass(frozen=True)
class CoherencePoint:
    coherence: float
    phi_c: float
    f_max_closed: float
    f_max_sim: float
    f_adv_closed: float
    f_adv_sim: float


def coherence_advantage_surface(
    coherences: Iterable[float],
    phi_cs: Iterable[float],
    unitary: str = "hadamard",
) -> List[CoherencePoint]:
    """Best-branch average and advantage over a (coherence, phi_c) grid.

    ``unitary`` is "hadamard" for the fixed readout (the advantage dies
    along phi_c = pi/2 and 3pi/2) or "matched" for the pair unitary with
    xi + zeta = phi_c, which keeps the branch asymmetry maximal at every
    azimuth.
    """
    if unitary not in ("hadamard", "matched"):
        raise ValueError(f"unitary must be 'hadamard' or 'matched', got {unitary!r}")
    shared = DiagonalSeparable(0.0, 0.5, 0.5, 0.0)  # y = 1 resource
    rows = []
    for c in coherences:
        theta = asin(min(max(c, 0.0), 1.0))
        for phi_c in phi_cs:
            control = ControlSpec(theta, phi_c)
            if unitary == "hadamard":
                readout: object = "hadamard"
                f_max_closed = max_avg_fidelity_hadamard(c, phi_c)
            else:
                readout = (phi_c / 2.0, phi_c / 2.0)
                f_max_closed = avg_fidelity_coherence_opt(c)
            config = ProtocolConfig(
                shared=shared,
                input=PureQubit(1.0),
                control=control,
                channel="path-K",
                control_unitary=readout,
            )
            f_max_sim = simulated_max_avg_fidelity(config)
            rows.append(
                CoherencePoint(
                    coherence=c,
                    phi_c=phi_c,
                    f_max_closed=f_max_closed,
                    f_max_sim=f_max_sim,
                    f_adv_closed=f_max_closed - CLASSICAL_LIMIT,
                    f_adv_sim=f_max_sim - CLASSICAL_LIMIT,
                )
            )
    return rows


def dephased_control_config(config: ProtocolConfig) -> ProtocolConfig:
    """The same protocol with the control coherences erased."""
    return replace(config, dephase_control=True)
