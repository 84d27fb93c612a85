"""Numerical radius, seminorm and spectral radius for operators on a semi-Hilbert space
(a PSD metric A), with an executable catalog of 2 x 2 operator-matrix bounds."""
from .blocks import BlockOperator, assemble, lift_metric, proof_unitaries, split
from .catalog import BoundResult, BoundSpec, compare_bounds, evaluate_bound, get_spec, registry
from .core import (CompatibleOperator, MetricSpace, a_inner, a_numerical_radius, a_op_norm,
                   a_seminorm, a_spectral_radius, compatible, compress, im_part, is_a_positive,
                   is_a_selfadjoint, is_a_unitary, is_compatible, make_space, re_part, sharp, zm_sup)
from .errors import ShkitError
from .harness import TrialConfig, VerificationReport, run_suite

__all__ = [
    "BlockOperator", "BoundResult", "BoundSpec", "CompatibleOperator", "MetricSpace", "ShkitError",
    "TrialConfig", "VerificationReport", "a_inner", "a_numerical_radius", "a_op_norm", "a_seminorm",
    "a_spectral_radius", "assemble", "compare_bounds", "compatible", "compress", "evaluate_bound",
    "get_spec", "im_part", "is_a_positive", "is_a_selfadjoint", "is_a_unitary", "is_compatible",
    "lift_metric", "make_space", "proof_unitaries", "re_part", "registry", "run_suite", "sharp", "split",
    "zm_sup",
]
