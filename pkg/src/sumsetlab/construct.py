"""Greedy sumset constructions: translate extraction, the D-sequence,
intersection thinning, interleaved B/C picks, and exact certificate checking.

Every stage's output satisfies a defining predicate that is rechecked by an
independent naive scan in the tests; the certificate checker here is the only
authority on B+C containment and is deliberately a dumb all-pairs loop.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Optional, Sequence

from .density import banach_estimate, default_schedule, window_banach_density
from .windowset import ValidationError, WindowSet, window_mask


class StageFailure(Exception):
    """A pipeline stage could not produce its output; carries the stage name."""

    def __init__(self, stage: str, message: str, detail: Optional[dict] = None):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
        self.detail = detail or {}


@dataclass(frozen=True)
class LTranslate:
    base_point: int
    l_set: WindowSet  # {l : base_point + l in A}, window [1, N - base_point]
    density_score: Fraction
    robustness_score: int


@dataclass(frozen=True)
class BCCertificate:
    b: WindowSet
    c: WindowSet
    k: int
    verified: bool
    violations: tuple[tuple[int, int, int], ...]  # (b, c, b + c) outside A ∪ (A+k)
    pipeline_trace: tuple[str, ...]
    requested_size: int = 0
    partial: bool = False
    hypothesis_unmet: bool = False
    meta: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class DSequence:
    d: tuple[int, ...]
    complete: bool
    dropped_constraints: tuple[int, ...]


@dataclass(frozen=True)
class ThinResult:
    survivors: tuple[int, ...]
    intersection_sizes: tuple[int, ...]  # after each accepted element
    thresholds: tuple[int, ...]  # the floor each acceptance had to clear
    skipped: tuple[int, ...]


def _scoring_schedule(window_len: int) -> list[int]:
    # Coarse schedule (a handful of large lengths) so candidate scoring stays
    # cheap; full reports use density.default_schedule.
    return default_schedule(window_len, min_length=max(16, window_len // 8))


def extract_L(a: WindowSet, candidates: int = 8) -> LTranslate:
    """Best translate {l : x0 + l in A} over base points from a dense interval.

    Candidates are members of A inside the sliding-window witness at the
    largest useful length; the winner maximizes (density_score,
    robustness_score) lexicographically, ties to the smallest base point.
    """
    if a.cardinality == 0:
        raise StageFailure("extract_L", "input set is empty")
    if candidates < 1:
        raise ValidationError(f"candidates={candidates} must be positive")
    witness_len = max(1, a.window_len // 8)
    _, (w_lo, w_hi) = window_banach_density(a, witness_len)
    xs: list[int] = []
    x = w_lo - 1
    while len(xs) < candidates:
        x = a.next_member(x)
        if x is None or (x > w_hi and xs):
            break
        xs.append(x)
    best: Optional[LTranslate] = None
    for x0 in xs:
        w = a.window_len - x0
        if w < 1:
            continue
        l_bits = (a.bits >> x0) & window_mask(w)
        l_set = WindowSet(w, l_bits, label=f"L(x0={x0})")
        if l_set.cardinality == 0:
            continue
        score = banach_estimate(l_set, _scoring_schedule(w))
        cand = LTranslate(x0, l_set, score, _robustness(a, l_set))
        if best is None or (cand.density_score, cand.robustness_score) > (
            best.density_score,
            best.robustness_score,
        ):
            best = cand
    if best is None:
        raise StageFailure("extract_L", "every candidate base point yields an empty translate")
    return best


def _robustness(a: WindowSet, l_set: WindowSet) -> int:
    """Min over a few deterministic finite F ⊆ L of |A ∩ ⋂_{l∈F}(A − l)|."""
    firsts: list[int] = []
    x = 0
    while len(firsts) < 4:
        x = l_set.next_member(x)
        if x is None:
            break
        firsts.append(x)
    score = a.cardinality
    for take in (2, 4):
        sample = firsts[:take]
        if not sample:
            break
        bits = a.bits
        for l in sample:
            bits &= a.bits >> l
        score = min(score, bits.bit_count())
    return score


def build_D(
    a: WindowSet,
    l_enum: Sequence[int],
    m: int,
    extra_mask: Optional[int] = None,
    require_membership: bool = True,
) -> DSequence:
    """Increasing d_1 < ... < d_m with l_i + d_j in A for i <= j.

    Smallest qualifying d is taken at each step.  When stuck, the most
    recently added constraint l is dropped, at most ceil(m/2) times.  The
    ``extra_mask`` restricts candidates to an additional bitset (used by the
    pseudorandom route, where d must also be a good shift).
    """
    if m < 1:
        raise ValidationError(f"m={m} must be positive")
    if not l_enum:
        raise ValidationError("l_enum must be nonempty")
    active = list(l_enum)
    base = a.bits if require_membership else window_mask(a.window_len)
    if extra_mask is not None:
        base &= extra_mask
    d: list[int] = []
    dropped: list[int] = []
    max_drops = ceil(m / 2)
    cur_mask = base
    depth = 0  # how many constraints are folded into cur_mask
    prev = 0
    while len(d) < m:
        want = min(len(d) + 1, len(active))
        while depth < want:
            cur_mask &= a.bits >> active[depth]
            depth += 1
        rest = cur_mask >> (prev + 1)
        if rest:
            nxt = prev + 1 + (rest & -rest).bit_length() - 1
            d.append(nxt)
            prev = nxt
            continue
        if len(dropped) < max_drops and active:
            dropped.append(active.pop())
            cur_mask = base
            depth = 0
            for l in active[: min(len(d) + 1, len(active))]:
                cur_mask &= a.bits >> l
                depth += 1
            continue
        break
    return DSequence(d=tuple(d), complete=len(d) >= m, dropped_constraints=tuple(dropped))


def bergelson_thin(
    a: WindowSet,
    l_set: WindowSet,
    d_seq: Sequence[int],
    tau: float,
    rho: Optional[float] = None,
) -> ThinResult:
    """Greedy subsequence of D whose running intersection with L stays large.

    Candidate d is accepted iff |L ∩ ⋂(A − e_i) ∩ (A − d)| stays at or above
    tau * rho^n * |window| for the next position n.  Candidates below the base
    threshold tau are skipped up front (they fail the measure->=a premise).
    """
    if tau < 0:
        raise ValidationError(f"tau={tau} must be nonnegative")
    w = l_set.window_len
    if rho is None:
        # Shrink floor matched to the ambient density of A: each extra
        # translate constraint thins the intersection by about that factor,
        # so a slower-decaying floor would reject every honest candidate.
        rho = min(0.95, max(0.5, a.cardinality / a.window_len))
    lw_mask = window_mask(w)
    cur = l_set.bits
    survivors: list[int] = []
    sizes: list[int] = []
    thresholds: list[int] = []
    skipped: list[int] = []
    for d in d_seq:
        overlap = w - d  # the shift truncates the far edge of the window
        if overlap < 1:
            skipped.append(d)
            continue
        shifted = (a.bits >> d) & lw_mask
        if (l_set.bits & shifted).bit_count() < tau * overlap:
            skipped.append(d)
            continue
        nxt = cur & shifted
        floor = tau * (rho ** (len(survivors) + 1)) * overlap
        if nxt.bit_count() >= floor:
            survivors.append(d)
            sizes.append(nxt.bit_count())
            thresholds.append(ceil(floor))
            cur = nxt
        else:
            skipped.append(d)
    if len(survivors) < 2:
        raise StageFailure(
            "bergelson_thin",
            f"only {len(survivors)} survivors; try a smaller tau (tau={tau})",
            {"survivors": survivors, "skipped": skipped},
        )
    return ThinResult(
        survivors=tuple(survivors),
        intersection_sizes=tuple(sizes),
        thresholds=tuple(thresholds),
        skipped=tuple(skipped),
    )


def interleave_bc(
    a: WindowSet,
    l_set: WindowSet,
    e_seq: Sequence[int],
    m: int,
    trace: tuple[str, ...] = (),
) -> BCCertificate:
    """Alternate picks b_j from the running intersection of L with (A - c_i),
    c_j from E with all b_1..b_j + c_j in A; exhaustion yields a flagged
    partial certificate."""
    if m < 1:
        raise ValidationError(f"m={m} must be positive")
    run = l_set.bits
    used_b = 0
    b_list: list[int] = []
    c_list: list[int] = []
    e_pos = 0
    while len(b_list) < m:
        avail = run & ~used_b
        if avail == 0:
            break
        b = (avail & -avail).bit_length() - 1
        b_list.append(b)
        used_b |= 1 << b
        chosen = None
        while e_pos < len(e_seq):
            cand = e_seq[e_pos]
            e_pos += 1
            if all((x + cand) in a for x in b_list):
                chosen = cand
                break
        if chosen is None:
            b_list.pop()
            break
        c_list.append(chosen)
        run &= (a.bits >> chosen) & window_mask(l_set.window_len)
    partial = len(b_list) < m
    cert = verify_bc(a, sorted(b_list), sorted(c_list), 0)
    steps = trace + (
        f"interleave_bc: picked {len(b_list)} of {m} pairs",
    )
    return BCCertificate(
        b=cert.b,
        c=cert.c,
        k=0,
        verified=cert.verified,
        violations=cert.violations,
        pipeline_trace=steps,
        requested_size=m,
        partial=partial,
    )


def verify_bc(
    a: WindowSet,
    b_members: Sequence[int] | WindowSet,
    c_members: Sequence[int] | WindowSet,
    k: int = 0,
) -> BCCertificate:
    """Exhaustive all-pairs check of b + c in A ∪ (A + k); exact and total.

    Sums outside [1, N] are violations, never silently clipped.
    """
    bs = b_members.members() if isinstance(b_members, WindowSet) else sorted(b_members)
    cs = c_members.members() if isinstance(c_members, WindowSet) else sorted(c_members)
    n = a.window_len
    union_bits = a.bits | ((a.bits << k) if k >= 0 else (a.bits >> -k))
    union_bits &= window_mask(n)
    violations = []
    for b in bs:
        for c in cs:
            s = b + c
            if not 1 <= s <= n or not (union_bits >> s) & 1:
                violations.append((b, c, s))
    b_set = WindowSet.from_members(bs, n) if bs else WindowSet(n)
    c_set = WindowSet.from_members(cs, n) if cs else WindowSet(n)
    return BCCertificate(
        b=b_set,
        c=c_set,
        k=k,
        verified=not violations,
        violations=tuple(violations),
        pipeline_trace=(),
    )


def find_bc_high_density(
    a: WindowSet,
    m: int,
    candidates: int = 8,
    tau: Optional[float] = None,
    rho: Optional[float] = None,
) -> BCCertificate:
    """Full greedy pipeline for B + C ⊆ A with C ⊆ A.

    Meant for sets whose sliding-window density estimate exceeds 1/2; below
    that the run proceeds but the certificate is tagged hypothesis_unmet.
    """
    est = banach_estimate(a)
    hypothesis_unmet = not est > Fraction(1, 2)
    if tau is None:
        tau = max(0.0, 2 * float(est) - 1)
    lt = extract_L(a, candidates)
    l_members: list[int] = []
    x = 0
    while len(l_members) < max(2 * m, 8):
        x = lt.l_set.next_member(x)
        if x is None:
            break
        l_members.append(x)
    d_res = build_D(a, l_members, 3 * m + 4)
    thin = bergelson_thin(a, lt.l_set, d_res.d, tau, rho)
    trace = (
        f"extract_L: x0={lt.base_point}, |L|={lt.l_set.cardinality}, "
        f"density_score={float(lt.density_score):.4f}",
        f"build_D: |D|={len(d_res.d)}, dropped={len(d_res.dropped_constraints)}",
        f"bergelson_thin: tau={tau:.4f}, survivors={len(thin.survivors)}, "
        f"skipped={len(thin.skipped)}",
    )
    cert = interleave_bc(a, lt.l_set, thin.survivors, m, trace)
    if cert.verified and not cert.partial:
        for cval in cert.c.members():
            assert cval in a, "pipeline bug: emitted C is not a subset of A"
    return BCCertificate(
        b=cert.b,
        c=cert.c,
        k=cert.k,
        verified=cert.verified,
        violations=cert.violations,
        pipeline_trace=cert.pipeline_trace,
        requested_size=m,
        partial=cert.partial,
        hypothesis_unmet=hypothesis_unmet,
        meta={"banach_estimate": str(est), "tau": tau},
    )
