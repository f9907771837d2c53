"""Block transform and density fattening.

block_transform collapses A to the set of block indices whose length-n block
meets A; fatten searches a schedule of block lengths for one whose block set
has sliding-window density at least 1 - epsilon.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .density import banach_estimate, default_schedule, window_banach_density
from .windowset import ValidationError, WindowSet, _from_indicator


@dataclass(frozen=True)
class BlockTransformResult:
    n: int
    blocks: WindowSet
    achieved_density: Fraction
    epsilon: float
    dropped_low: int  # elements of A below n (block index 0), ignored


@dataclass(frozen=True)
class FattenOutcome:
    ok: bool
    result: BlockTransformResult | None
    attempts: tuple[tuple[int, Fraction], ...]  # (n, achieved) including failures


def block_transform(a: WindowSet, n: int, epsilon: float = 0.0) -> BlockTransformResult:
    """Block index k is kept iff [kn, kn+n-1] meets A, for k in [1, floor(N/n) - 1]."""
    if not 1 <= n <= a.window_len // 4:
        raise ValidationError(f"n={n} outside [1, N/4] for N={a.window_len}")
    k_max = a.window_len // n - 1
    ind = a.indicator()
    hits = ind[n : n + k_max * n].reshape(k_max, n).max(axis=1)
    block_ind = np.zeros(k_max + 1, dtype=np.uint8)
    block_ind[1:] = hits
    blocks = _from_indicator(block_ind, k_max, label=f"{a.label}[{n}]")
    dropped_low = int(ind[1:n].sum())
    achieved = banach_estimate(blocks)
    return BlockTransformResult(
        n=n, blocks=blocks, achieved_density=achieved, epsilon=epsilon, dropped_low=dropped_low
    )


def default_n_schedule(window_len: int) -> list[int]:
    """Small block lengths 1..64 plus powers of two up to N/64."""
    ns = list(range(1, 65))
    p = 128
    while p <= window_len // 64:
        ns.append(p)
        p *= 2
    return [n for n in ns if n <= window_len // 4]


def fatten(
    a: WindowSet, epsilon: float, n_schedule: list[int] | None = None
) -> FattenOutcome:
    """Smallest n in the schedule whose block set reaches density >= 1 - epsilon.

    A miss is a structured negative result carrying the (n, achieved) trace,
    not an exception.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValidationError(f"epsilon={epsilon} outside (0, 1)")
    if n_schedule is None:
        n_schedule = default_n_schedule(a.window_len)
    target = Fraction(1) - Fraction(epsilon)
    attempts: list[tuple[int, Fraction]] = []
    for n in n_schedule:
        res = block_transform(a, n, epsilon=epsilon)
        attempts.append((n, res.achieved_density))
        if res.achieved_density >= target:
            return FattenOutcome(ok=True, result=res, attempts=tuple(attempts))
    return FattenOutcome(ok=False, result=None, attempts=tuple(attempts))
