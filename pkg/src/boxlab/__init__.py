"""Exact simulator and analysis toolkit for multi-party non-signaling boxes."""
from .boolfn import AnfForm, BooleanFunction, anf_decompose, best_affine_approx, from_anf
from .boxcore import Box, PartyAssignment, is_non_signaling, l1_distance, mix, success_probability, validate_box
from .boxlib import (
    closest_local_fc_box,
    correlated_noise_box,
    full_correlation_box,
    n_pr_box,
    nk_pr_box,
    noisy_box,
)

__version__ = "0.1.0"
