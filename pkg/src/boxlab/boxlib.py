"""Named box families."""
from __future__ import annotations

from fractions import Fraction

from .boolfn import BooleanFunction, best_affine_approx
from .boxcore import ZERO, Box, l1_distance, parity


def full_correlation_box(f: BooleanFunction) -> Box:
    """Uniform over output words whose parity equals ``f(x)``."""
    n = f.var_count
    weight = Fraction(1, 1 << (n - 1))
    return Box.from_function(n, lambda a, x: weight if parity(a) == f(x) else ZERO)


def n_pr_box(n: int) -> Box:
    if n < 1:
        raise ValueError("n must be at least 1")
    return full_correlation_box(BooleanFunction.conjunction(n))


def nk_pr_box(n: int, k: int) -> Box:
    """Full-correlation box for the AND of the first ``k`` of ``n`` inputs."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    return full_correlation_box(BooleanFunction.conjunction(n, range(1, k + 1)))


def correlated_noise_box(n: int) -> Box:
    if n < 1:
        raise ValueError("n must be at least 1")
    return full_correlation_box(BooleanFunction.constant(n, 0))


def noisy_box(f: BooleanFunction, eps) -> Box:
    """``eps * P_f + (1 - eps) * P^c``, built entrywise."""
    eps = Fraction(eps)
    if not 0 <= eps <= 1:
        raise ValueError(f"epsilon {eps} outside [0, 1]")
    n = f.var_count
    w = Fraction(1, 1 << (n - 1))

    def prob(a, x):
        par = parity(a)
        return eps * w * (par == f(x)) + (1 - eps) * w * (par == 0)

    return Box.from_function(n, prob)


def closest_local_fc_box(f: BooleanFunction) -> tuple[Box, Fraction]:
    """Full-correlation box of the best affine approximation, with its L1 distance."""
    approx = best_affine_approx(f)
    return full_correlation_box(approx.function), Fraction(2 * approx.distance)
