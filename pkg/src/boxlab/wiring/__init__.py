from .core import LocalityViolation, Slot, Wiring, WiringError, apply_wiring, check_locality
from .expr import And, Const, Expr, InputBit, Not, OutputBit, RandomBit, Xor, and_, to_text, xor
from .library import (
    IsolationError,
    affine_flip_wiring,
    augment_shared_randomness,
    augment_wiring,
    bs_wiring,
    default_isolation_assignment,
    fix_inputs,
    fix_inputs_wiring,
    identity_wiring,
    isolate_term,
    isolation_blockers,
    recursive_pr_wiring,
    xor_combine,
    xor_wiring,
)

__all__ = [
    "And",
    "Const",
    "Expr",
    "InputBit",
    "IsolationError",
    "LocalityViolation",
    "Not",
    "OutputBit",
    "RandomBit",
    "Slot",
    "Wiring",
    "WiringError",
    "Xor",
    "affine_flip_wiring",
    "and_",
    "apply_wiring",
    "augment_shared_randomness",
    "augment_wiring",
    "bs_wiring",
    "check_locality",
    "default_isolation_assignment",
    "fix_inputs",
    "fix_inputs_wiring",
    "identity_wiring",
    "isolate_term",
    "isolation_blockers",
    "recursive_pr_wiring",
    "to_text",
    "xor",
    "xor_combine",
    "xor_wiring",
]
