"""Exact density-matrix toolkit for teleportation assisted by coherently
controlled channels: path superposition of teleportation variants over
imperfect resources, and causal-order superposition of the reduced
phase-flip channel.

The package is organized as

- :mod:`pathtele.qcore`     validated small-matrix linear algebra
- :mod:`pathtele.states`    input/control/resource state families
- :mod:`pathtele.channels`  Kraus constructions and the depolarizing reduction
- :mod:`pathtele.protocol`  end-to-end runs and closed branch forms
- :mod:`pathtele.analysis`  fidelity averages, thresholds, surfaces
- :mod:`pathtele.verify`    the acceptance checks behind `pathtele verify`
- :mod:`pathtele.cli`       the command line front end
"""

__version__ = "0.1.0"

from .qcore import DensityMatrix, apply_kraus, fidelity_to_pure, partial_trace, tensor
from .states import (
    ControlSpec,
    DiagonalSeparable,
    GeneralProductMix,
    PureQubit,
    Werner,
    bell_state,
    build_shared,
    coherence_l1,
)
from .channels import (
    KrausSet,
    control_unitary,
    general_product_kraus,
    generalized_depolarizing_probs,
    kraus_K,
    kraus_L,
    path_superposition,
    switch_kraus,
)
from .protocol import BranchOutcome, ProtocolConfig, branch_closed_form_check, run
from .analysis import (
    AdvantageVerdict,
    SweepPoint,
    avg_fidelity_K,
    avg_fidelity_L,
    avg_fidelity_coherence_opt,
    avg_fidelity_werner,
    classify_advantage,
    coherence_advantage_surface,
    control_for_x,
    find_werner_threshold,
    mc_avg_fidelity,
    quadrature_avg_fidelity,
    simulated_avg_fidelity,
    xy_sweep,
)
from .verify import VerifyReport, run_all

__all__ = [
    "__version__",
    "DensityMatrix", "apply_kraus", "fidelity_to_pure", "partial_trace", "tensor",
    "ControlSpec", "DiagonalSeparable", "GeneralProductMix", "PureQubit", "Werner",
    "bell_state", "build_shared", "coherence_l1",
    "KrausSet", "control_unitary", "general_product_kraus",
    "generalized_depolarizing_probs", "kraus_K", "kraus_L",
    "path_superposition", "switch_kraus",
    "BranchOutcome", "ProtocolConfig", "branch_closed_form_check", "run",
    "AdvantageVerdict", "SweepPoint", "avg_fidelity_K", "avg_fidelity_L",
    "avg_fidelity_coherence_opt", "avg_fidelity_werner", "classify_advantage",
    "coherence_advantage_surface", "control_for_x", "find_werner_threshold",
    "mc_avg_fidelity", "quadrature_avg_fidelity", "simulated_avg_fidelity",
    "xy_sweep",
    "VerifyReport", "run_all",
]
