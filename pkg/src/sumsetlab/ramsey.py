"""Pair coloring over block-level sumsets and greedy one-color subset search,
driving the one-shift pipeline B + C ⊆ A ∪ (A + k).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .construct import (
    BCCertificate,
    StageFailure,
    find_bc_high_density,
    verify_bc,
)
from .density import banach_estimate
from .transform import fatten
from .windowset import ValidationError, WindowSet

Color = tuple[Optional[int], Optional[int]]


@dataclass(frozen=True)
class ColoringTable:
    n: int
    b_idx: tuple[int, ...]
    c_idx: tuple[int, ...]
    colors: dict[tuple[int, int], Color]  # (i, j) with i < j, 0-based positions
    warnings: tuple[str, ...]


@dataclass(frozen=True)
class MonoResult:
    indices: tuple[int, ...]  # ascending positions
    color: Color
    target: int
    complete: bool


def color_pairs(
    a: WindowSet, n: int, b_idx: Sequence[int], c_idx: Sequence[int]
) -> ColoringTable:
    """Color pair {i, j}, i < j, by the offsets of the first element of A in
    the blocks at indices b_i + c_j and c_i + b_j."""
    for name, seq in (("b_idx", b_idx), ("c_idx", c_idx)):
        if any(seq[t] >= seq[t + 1] for t in range(len(seq) - 1)):
            raise ValidationError(f"{name} must be strictly increasing")
    if len(b_idx) != len(c_idx):
        raise ValidationError("b_idx and c_idx must have equal length")
    k_max = a.window_len // n - 1
    ind = a.indicator()
    size = len(b_idx)
    colors: dict[tuple[int, int], Color] = {}
    warnings: list[str] = []

    def first_offset(block: int, i: int, j: int) -> Optional[int]:
        if not 1 <= block <= k_max:
            raise ValidationError(
                f"pair ({i}, {j}): block {block} outside [1, {k_max}] for n={n}"
            )
        seg = ind[block * n : block * n + n]
        if not seg.any():
            warnings.append(f"pair ({i}, {j}): block {block} misses A")
            return None
        return int(seg.argmax())

    for i in range(size):
        for j in range(i + 1, size):
            nu = first_offset(b_idx[i] + c_idx[j], i, j)
            xi = first_offset(c_idx[i] + b_idx[j], i, j)
            colors[(i, j)] = (nu, xi)
    return ColoringTable(
        n=n, b_idx=tuple(b_idx), c_idx=tuple(c_idx), colors=colors, warnings=tuple(warnings)
    )


def _pair_color(table: ColoringTable, u: int, v: int) -> Color:
    return table.colors[(u, v) if u < v else (v, u)]


def mono_subset(table: ColoringTable, target: int, restarts: int = 24) -> MonoResult:
    """Largest one-color subset the greedy pigeonhole search can reach.

    For each color class the max-degree greedy runs once per seed, seeds taken
    in descending same-color-degree order (up to `restarts` of them): fix the
    seed as the first pick, then repeatedly pick the survivor with the most
    same-color pairs among the survivors (ties to the lowest index) and keep
    only its same-color partners.  The first color subset reaching `target`
    wins; otherwise the largest found does.  The result is verified
    exhaustively before return and a short fall is flagged, not hidden.
    """
    size = len(table.b_idx)
    blocked = np.zeros(size, dtype=bool)
    seen: set[Color] = set()
    for (i, j), c in table.colors.items():
        if None in c:
            blocked[i] = blocked[j] = True
        else:
            seen.add(c)
    usable = np.flatnonzero(~blocked)
    palette = sorted(seen)
    if usable.size == 0 or not palette:
        return MonoResult(indices=(), color=(None, None), target=target, complete=False)
    pos = np.full(size, -1, dtype=np.int64)
    pos[usable] = np.arange(usable.size)
    s = int(usable.size)
    code = np.full((s, s), -1, dtype=np.int32)
    color_ids = {c: t for t, c in enumerate(palette)}
    for (i, j), c in table.colors.items():
        if not (blocked[i] or blocked[j]):
            code[pos[i], pos[j]] = code[pos[j], pos[i]] = color_ids[c]
    best: Optional[tuple[tuple[int, ...], Color]] = None
    for color in palette:
        adj = code == color_ids[color]
        degrees = adj.sum(axis=1)
        seeds = np.argsort(-degrees, kind="stable")[: max(1, restarts)]
        for seed in seeds:
            alive = adj[seed].copy()
            chosen = [int(seed)]
            while alive.any():
                counts = (adj & alive[None, :]).sum(axis=1)
                counts[~alive] = -1
                pick = int(counts.argmax())  # argmax ties to the lowest index
                chosen.append(pick)
                alive &= adj[pick]
            j = tuple(sorted(int(usable[t]) for t in chosen))
            if best is None or len(j) > len(best[0]) or (
                len(j) == len(best[0]) and color < best[1]
            ):
                best = (j, color)
            if len(best[0]) >= target:
                break
        if len(best[0]) >= target:
            break
    j, color = best
    for a_pos in range(len(j)):
        for b_pos in range(a_pos + 1, len(j)):
            if _pair_color(table, j[a_pos], j[b_pos]) != color:
                raise AssertionError("greedy bookkeeping produced a non-monochromatic subset")
    return MonoResult(indices=j, color=color, target=target, complete=len(j) >= target)


def one_shift(
    a: WindowSet,
    m: int,
    epsilon: float = 0.1,
    margin: float = 0.05,
    candidates: int = 8,
    max_supply: int = 4096,
) -> BCCertificate:
    """Fatten, run the high-density pipeline on the block set, color, take a
    one-color subset, and split it into B (odd positions) and C (even ones).

    Block-supply exhaustion before a one-color subset of size 2m is reported
    as a StageFailure; a verification failure of an emitted certificate is an
    internal error, never a return value.
    """
    est = banach_estimate(a)
    if est <= 0:
        raise StageFailure("one_shift", "input set has zero density estimate")
    eps_eff = max(epsilon, 0.5 - margin)
    fo = fatten(a, eps_eff)
    if not fo.ok:
        raise StageFailure(
            "fatten",
            f"no block length reached density {1 - eps_eff:.3f}",
            {"attempts": [(n, str(v)) for n, v in fo.attempts]},
        )
    n = fo.result.n
    blocks = fo.result.blocks
    supply = 2 * m + max(2, m)
    best_j = 0
    while True:
        cert = find_bc_high_density(blocks, supply, candidates=candidates)
        b_idx = cert.b.members()
        c_idx = cert.c.members()
        avail = min(len(b_idx), len(c_idx))
        table = color_pairs(a, n, b_idx[:avail], c_idx[:avail])
        mono = mono_subset(table, 2 * m)
        best_j = max(best_j, len(mono.indices))
        if mono.complete:
            return _assemble_one_shift(a, n, table, mono, m, cert)
        exhausted = cert.partial or avail < supply or supply >= max_supply
        if exhausted:
            raise StageFailure(
                "mono_subset",
                f"block supply exhausted at {avail} indices; best one-color "
                f"subset has {best_j} of the needed {2 * m}",
                {"n": n, "supply": avail, "best": best_j},
            )
        supply *= 2


def _assemble_one_shift(
    a: WindowSet,
    n: int,
    table: ColoringTable,
    mono: MonoResult,
    m: int,
    block_cert: BCCertificate,
) -> BCCertificate:
    j = mono.indices[: 2 * m]
    nu, xi = mono.color
    k = nu - xi
    b_elems = [n * table.b_idx[j[t]] + nu for t in range(0, 2 * m, 2)]  # odd 1-based positions
    c_elems = [n * table.c_idx[j[t]] for t in range(1, 2 * m, 2)]  # even 1-based positions
    cert = verify_bc(a, b_elems, c_elems, k)
    if not cert.verified:
        raise AssertionError(f"one-shift pipeline bug: emitted certificate fails: {cert.violations}")
    dichotomy = []
    for s in range(0, 2 * m, 2):
        for t in range(1, 2 * m, 2):
            i_idx, j_idx = j[s], j[t]
            total = n * table.b_idx[i_idx] + nu + n * table.c_idx[j_idx]
            if i_idx < j_idx:
                side = "A"
                ok = total in a
            else:
                side = "A+k"
                ok = (total - k) in a
            dichotomy.append((i_idx, j_idx, side))
            if not ok:
                raise AssertionError(
                    f"one-shift pipeline bug: dichotomy fails at pair ({i_idx}, {j_idx})"
                )
    trace = block_cert.pipeline_trace + (
        f"one_shift: n={n}, nu={nu}, xi={xi}, k={k}, |J|={len(mono.indices)}",
    )
    return BCCertificate(
        b=cert.b,
        c=cert.c,
        k=k,
        verified=True,
        violations=(),
        pipeline_trace=trace,
        requested_size=m,
        partial=False,
        hypothesis_unmet=block_cert.hypothesis_unmet,
        meta={
            "n": n,
            "nu": nu,
            "xi": xi,
            "k": k,
            "J": list(j),
            "dichotomy": dichotomy,
        },
    )
