"""Acceptance suite: every headline number, re-checked from scratch.

Each criterion below runs the full density-matrix pipeline and compares it
against an independent reference (closed form, exact constant, or a second
averaging method). ``run_all`` returns a machine-readable report; the CLI
turns it into pass/fail lines and an exit code.
"""

from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from . import qcore
from .qcore import ATOL_INVARIANT, DensityMatrix, fidelity_to_pure
from .states import (
    ControlSpec,
    DiagonalSeparable,
    GeneralProductMix,
    PureQubit,
    Werner,
    aligned_mix,
    antialigned_mix,
    bell_state,
    build_shared,
)
from .channels import (
    basis_unitary,
    dephasing_channel,
    general_product_kraus,
    kraus_K,
    kraus_L,
    path_superposition,
    switch_kraus,
)
from .protocol import ProtocolConfig, joint_state_after_channel, run, standard_bob_state
from .analysis import (
    avg_fidelity_coherence_opt,
    coherence_advantage_surface,
    control_for_x,
    dephased_control_config,
    find_werner_threshold,
    grid_config,
    mc_avg_fidelity,
    quadrature_avg_fidelity,
    simulated_avg_fidelity,
    xy_sweep,
)

SUITE_VERSION = "0.1.0"
DEFAULT_SEED = 8021
DEFAULT_SAMPLES = 10000
DEFAULT_TRIALS = 100

CRITERION_NAMES = (
    "closed-form-grid",
    "product-resource-perfect",
    "diagonal-mixes",
    "werner-threshold",
    "switch-null",
    "coherence-optimum",
    "control-dephasing",
    "oracle-consistency",
    "well-formedness",
)


@dataclass(frozen=True)
class CriterionCheck:
    label: str
    measured: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.measured <= self.tolerance


@dataclass(frozen=True)
class CriterionResult:
    name: str
    description: str
    checks: Tuple[CriterionCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


@dataclass(frozen=True)
class VerifyReport:
    results: Tuple[CriterionResult, ...]
    seed: int
    samples: int
    trials: int

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failing(self) -> Tuple[str, ...]:
        return tuple(r.name for r in self.results if not r.passed)


def _chk(label: str, measured: float, tolerance: float) -> CriterionCheck:
    return CriterionCheck(label, float(measured), float(tolerance))


def _random_pure(rng: np.random.Generator) -> PureQubit:
    return PureQubit(rng.uniform(0.0, 1.0), rng.uniform(0.0, 2.0 * np.pi))


def _random_input(rng: np.random.Generator) -> PureQubit:
    return PureQubit.from_polar(rng.uniform(0.0, np.pi), rng.uniform(0.0, 2.0 * np.pi))


# ---------------------------------------------------------------------------
# 1. branch averages across the whole (X, y) grid match the closed forms

def criterion_closed_form_grid(tolerance: Optional[float] = None) -> CriterionResult:
    tol = 1e-9 if tolerance is None else tolerance
    worst = 0.0
    for channel in ("path-K", "path-L"):
        for row in xy_sweep(channel, 0.05):
            worst = max(
                worst,
                abs(row.sim_plus - row.closed_plus),
                abs(row.sim_minus - row.closed_minus),
            )
    return CriterionResult(
        "closed-form-grid",
        "quadrature-averaged simulation matches closed-form branch averages "
        "on the 41x21 (X, y) grid, both channels, both branches",
        (_chk("worst |simulated - closed|", worst, tol),),
    )


# ---------------------------------------------------------------------------
# 2. any pure-product-derived resource teleports perfectly at X = -1

def criterion_product_resource_perfect(
    tolerance: Optional[float] = None, seed: int = DEFAULT_SEED
) -> CriterionResult:
    ftol = 1e-10 if tolerance is None else tolerance
    ptol = 1e-12
    rng = np.random.default_rng(seed)
    control = control_for_x(-1.0)
    worst_f = 0.0
    worst_p = 0.0
    for _ in range(100):
        shared = GeneralProductMix(
            rng.uniform(0.0, 1.0), _random_pure(rng), _random_pure(rng)
        )
        config = ProtocolConfig(
            shared=shared,
            input=_random_input(rng),
            control=control,
            channel="general-product",
        )
        plus, _ = run(config)
        worst_f = max(worst_f, abs(plus.fidelity - 1.0))
        worst_p = max(worst_p, abs(plus.probability - 0.25))
    return CriterionResult(
        "product-resource-perfect",
        "100 random product-basis resources teleport any input exactly on "
        "the plus branch at X = -1, each with probability 1/4",
        (
            _chk("worst |fidelity - 1|", worst_f, ftol),
            _chk("worst |probability - 1/4|", worst_p, ptol),
        ),
    )


# ---------------------------------------------------------------------------
# 3. aligned / anti-aligned mixtures hit the perfect corners

def criterion_diagonal_mixes(tolerance: Optional[float] = None) -> CriterionResult:
    ftol = 1e-10 if tolerance is None else tolerance
    ptol = 1e-12
    worst_f = 0.0
    worst_p = 0.0
    weights = (0.0, 0.25, 0.5, 0.75, 1.0)
    cases = []
    for w in weights:
        cases.append((aligned_mix(w), "path-L"))
        cases.append((antialigned_mix(w), "path-K"))
    for shared, channel in cases:
        for x, branch in ((-1.0, 0), (1.0, 1)):
            config = ProtocolConfig(
                shared=shared,
                input=PureQubit.from_polar(1.1, 0.6),
                control=control_for_x(x),
                channel=channel,
            )
            out = run(config)[branch]
            worst_f = max(worst_f, abs(out.fidelity - 1.0))
            worst_p = max(worst_p, abs(out.probability - 0.25))
    return CriterionResult(
        "diagonal-mixes",
        "aligned mixtures via path-L and anti-aligned mixtures via path-K "
        "teleport exactly at X = -1 (plus branch) and X = +1 (minus branch)",
        (
            _chk("worst |fidelity - 1|", worst_f, ftol),
            _chk("worst |probability - 1/4|", worst_p, ptol),
        ),
    )


# ---------------------------------------------------------------------------
# 4. Werner advantage threshold sits at p = 1/5

def criterion_werner_threshold(tolerance: Optional[float] = None) -> CriterionResult:
    ttol = 1e-6 if tolerance is None else tolerance
    ftol = 1e-10
    threshold = find_werner_threshold(x=-1.0, branch="plus", tol=1e-7, use_simulation=True)
    config = ProtocolConfig(
        shared=Werner(1.0),
        input=PureQubit(1.0),
        control=control_for_x(-1.0),
        channel="path-K",
    )
    worst_perfect = max(
        abs(simulated_avg_fidelity(config, "plus") - 1.0),
        abs(simulated_avg_fidelity(config, "minus") - 1.0),
    )
    return CriterionResult(
        "werner-threshold",
        "simulated bisection puts the Werner advantage boundary at p = 0.2; "
        "the p = 1 resource teleports exactly on both branches",
        (
            _chk("|threshold - 0.2|", abs(threshold - 0.2), ttol),
            _chk("worst |fidelity - 1| at p = 1", worst_perfect, ftol),
        ),
    )


# ---------------------------------------------------------------------------
# 5. ordering superposition of the dephasing step buys nothing

def criterion_switch_null(
    tolerance: Optional[float] = None, seed: int = DEFAULT_SEED
) -> CriterionResult:
    atol = 1e-9 if tolerance is None else tolerance
    factol = 1e-10
    rng = np.random.default_rng(seed + 5)
    worst_avg = 0.0
    worst_fac = 0.0
    for _ in range(20):
        shared = GeneralProductMix(1.0, _random_pure(rng), _random_pure(rng))
        control = ControlSpec(rng.uniform(0.0, np.pi / 2), rng.uniform(0.0, 2.0 * np.pi))
        phi = _random_input(rng)
        config = ProtocolConfig(
            shared=shared, input=phi, control=control, channel="switch-dephase"
        )
        weighted = 0.0
        for out, branch in zip(run(config), ("plus", "minus")):
            if out.bob_state is not None:
                weighted += out.probability * simulated_avg_fidelity(config, branch)
        worst_avg = max(worst_avg, abs(weighted - 2.0 / 3.0))

        joint = joint_state_after_channel(config)
        rho = phi.density().mat
        rho_d = (rho + qcore.SIGMA_Z @ rho @ qcore.SIGMA_Z) / 2.0
        product = np.kron(control.density().mat, rho_d)
        worst_fac = max(worst_fac, np.abs(joint.mat - product).max())
    return CriterionResult(
        "switch-null",
        "for random pure product resources and control states the ordering "
        "superposition averages to exactly 2/3 and its output factorizes "
        "from the control",
        (
            _chk("worst |weighted average - 2/3|", worst_avg, atol),
            _chk("worst factorization deviation", worst_fac, factol),
        ),
    )


# ---------------------------------------------------------------------------
# 6. readout matched to the control azimuth recovers (4 - C)/(6 - 3C)

def criterion_coherence_optimum(tolerance: Optional[float] = None) -> CriterionResult:
    mtol = 1e-6 if tolerance is None else tolerance
    htol = 1e-10
    coherences = [round(0.1 * i, 10) for i in range(11)]
    worst_matched = 0.0
    for point in coherence_advantage_surface(coherences, [0.9], unitary="matched"):
        reference = avg_fidelity_coherence_opt(point.coherence)
        worst_matched = max(worst_matched, abs(point.f_max_sim - reference))
    worst_quarter = 0.0
    for point in coherence_advantage_surface(coherences, [np.pi / 2], unitary="hadamard"):
        worst_quarter = max(worst_quarter, abs(point.f_adv_sim))
    return CriterionResult(
        "coherence-optimum",
        "a readout matched to the control azimuth reaches (4-C)/(6-3C) for "
        "every coherence level; the fixed readout loses all advantage at a "
        "quarter-turn azimuth",
        (
            _chk("worst matched-readout deviation", worst_matched, mtol),
            _chk("worst advantage at quarter-turn azimuth", worst_quarter, htol),
        ),
    )


# ---------------------------------------------------------------------------
# 7. killing control coherence collapses everything to the plain channel

def _standard_average(config: ProtocolConfig) -> float:
    if config.channel == "path-K":
        base, corr = kraus_K(), None
    elif config.channel == "path-L":
        base, corr = kraus_L(), None
    else:
        base = general_product_kraus(config.shared.omega, config.shared.gamma)
        corr = basis_unitary(config.shared.gamma.ket())
    shared = build_shared(config.shared)

    def fid(n: float) -> float:
        phi = PureQubit.from_polar(n, 1.3)
        bob = standard_bob_state(base, phi, shared)
        mat = bob.mat if corr is None else corr.conj().T @ bob.mat @ corr
        return fidelity_to_pure(DensityMatrix(mat, (2,)), phi.ket())

    return quadrature_avg_fidelity(fid)


def criterion_control_dephasing(tolerance: Optional[float] = None) -> CriterionResult:
    tol = 1e-10 if tolerance is None else tolerance
    diag = DiagonalSeparable(0.1, 0.4, 0.3, 0.2)
    configs = (
        grid_config("path-K", -0.8, 0.75),
        grid_config("path-L", 0.6, 0.2),
        ProtocolConfig(
            shared=Werner(0.45),
            input=PureQubit(1.0),
            control=control_for_x(-1.0),
            channel="path-K",
        ),
        ProtocolConfig(
            shared=diag,
            input=PureQubit(1.0),
            control=ControlSpec(0.7, 2.4),
            channel="path-K",
        ),
        ProtocolConfig(
            shared=GeneralProductMix(0.7, PureQubit(0.45, 2.8), PureQubit(0.9, 1.4)),
            input=PureQubit(1.0),
            control=control_for_x(-0.6),
            channel="general-product",
        ),
    )
    worst = 0.0
    for config in configs:
        off = dephased_control_config(config)
        reference = _standard_average(config)
        for branch in ("plus", "minus"):
            worst = max(worst, abs(simulated_avg_fidelity(off, branch) - reference))
    return CriterionResult(
        "control-dephasing",
        "with the control coherences zeroed, every superposed protocol's "
        "branch average equals the plain single-channel value",
        (_chk("worst |dephased branch average - plain channel|", worst, tol),),
    )


# ---------------------------------------------------------------------------
# 8. Monte Carlo and quadrature tell the same story

def _mc_configs() -> Tuple[Tuple[str, ProtocolConfig, str], ...]:
    return (
        ("path-K mixed resource", grid_config("path-K", -0.7, 0.75), "plus"),
        ("path-L mixed resource", grid_config("path-L", 0.6, 0.2), "minus"),
        (
            "werner resource",
            ProtocolConfig(
                shared=Werner(0.35),
                input=PureQubit(1.0),
                control=control_for_x(-1.0),
                channel="path-K",
            ),
            "plus",
        ),
        (
            "ordering switch",
            ProtocolConfig(
                shared=GeneralProductMix(1.0, PureQubit(0.55, 1.1), PureQubit(0.4, 2.6)),
                input=PureQubit(1.0),
                control=ControlSpec(1.0, 0.8),
                channel="switch-dephase",
            ),
            "plus",
        ),
        (
            "adapted product resource",
            ProtocolConfig(
                shared=GeneralProductMix(0.6, PureQubit(0.45, 2.8), PureQubit(0.9, 1.4)),
                input=PureQubit(1.0),
                control=control_for_x(-0.6),
                channel="general-product",
            ),
            "plus",
        ),
    )


def criterion_oracle_consistency(
    tolerance: Optional[float] = None,
    seed: int = DEFAULT_SEED,
    samples: int = DEFAULT_SAMPLES,
    trials: int = DEFAULT_TRIALS,
) -> CriterionResult:
    allowed = (trials - int(np.ceil(0.99 * trials))) if tolerance is None else tolerance
    worst_misses = 0
    for index, (_, config, branch) in enumerate(_mc_configs()):
        quad = simulated_avg_fidelity(config, branch)
        misses = 0
        for trial in range(trials):
            mean, se = mc_avg_fidelity(
                config, samples, seed=seed + 7919 * index + trial, branch=branch
            )
            if abs(mean - quad) > 3.0 * se:
                misses += 1
        worst_misses = max(worst_misses, misses)
    return CriterionResult(
        "oracle-consistency",
        "Monte Carlo branch averages land within 3 standard errors of the "
        "quadrature value in at least 99% of seeded trials for five "
        "representative configurations",
        (_chk("most trials outside 3 standard errors", worst_misses, allowed),),
    )


# ---------------------------------------------------------------------------
# 9. every operator set resolves the identity, every state is a state

def criterion_well_formedness(tolerance: Optional[float] = None) -> CriterionResult:
    ktol = 1e-12 if tolerance is None else tolerance
    stol = ATOL_INVARIANT
    rng = np.random.default_rng(17)
    sets = [
        kraus_K(),
        kraus_L(),
        path_superposition(kraus_K()),
        path_superposition(kraus_L()),
        dephasing_channel(),
        switch_kraus(dephasing_channel(), dephasing_channel()),
    ]
    resources = [
        GeneralProductMix(rng.uniform(0.0, 1.0), _random_pure(rng), _random_pure(rng))
        for _ in range(3)
    ]
    for mix in resources:
        sets.append(general_product_kraus(mix.omega, mix.gamma))
    worst_k = max(s.completeness_deviation() for s in sets)

    states = [
        DensityMatrix(np.outer(bell_state(label), bell_state(label).conj()), (2, 2))
        for label in ("phi+", "phi-", "psi+", "psi-")
    ]
    states.append(PureQubit(0.3, 0.7).density())
    states.append(ControlSpec(1.0, 2.0).density())
    states.append(ControlSpec(1.0, 2.0).dephased_density())
    states.append(build_shared(DiagonalSeparable(0.1, 0.4, 0.3, 0.2)))
    states.append(build_shared(Werner(0.5)))
    for mix in resources:
        states.append(build_shared(mix))
    states.append(joint_state_after_channel(grid_config("path-K", -0.7, 0.75)))
    for out in run(grid_config("path-L", 0.4, 0.3)):
        states.append(out.bob_state)

    worst_s = 0.0
    for state in states:
        mat = state.mat
        herm = np.abs(mat - mat.conj().T).max()
        tracedev = abs(np.trace(mat).real - 1.0)
        eigs = np.linalg.eigvalsh((mat + mat.conj().T) / 2.0)
        negativity = max(0.0, -float(eigs.min()))
        worst_s = max(worst_s, herm, tracedev, negativity)
    return CriterionResult(
        "well-formedness",
        "all operator sets resolve the identity and all produced states are "
        "Hermitian, unit-trace, and positive within tolerance",
        (
            _chk("worst completeness deviation", worst_k, ktol),
            _chk("worst state-validity deviation", worst_s, stol),
        ),
    )


# ---------------------------------------------------------------------------

def run_all(
    seed: int = DEFAULT_SEED,
    samples: int = DEFAULT_SAMPLES,
    trials: int = DEFAULT_TRIALS,
    overrides: Optional[Dict[str, float]] = None,
) -> VerifyReport:
    """Run all nine criteria; ``overrides`` replaces primary tolerances."""
    ov = dict(overrides or {})
    unknown = sorted(set(ov) - set(CRITERION_NAMES))
    if unknown:
        raise ValueError(f"unknown criterion name(s): {', '.join(unknown)}")
    results = (
        criterion_closed_form_grid(ov.get("closed-form-grid")),
        criterion_product_resource_perfect(ov.get("product-resource-perfect"), seed=seed),
        criterion_diagonal_mixes(ov.get("diagonal-mixes")),
        criterion_werner_threshold(ov.get("werner-threshold")),
        criterion_switch_null(ov.get("switch-null"), seed=seed),
        criterion_coherence_optimum(ov.get("coherence-optimum")),
        criterion_control_dephasing(ov.get("control-dephasing")),
        criterion_oracle_consistency(
            ov.get("oracle-consistency"), seed=seed, samples=samples, trials=trials
        ),
        criterion_well_formedness(ov.get("well-formedness")),
    )
    return VerifyReport(results, seed, samples, trials)
