"""Shift-autocorrelation diagnostics and the pseudorandom B+C pipeline.

gamma(i) is the density of A ∩ (A - i); its deviation from alpha^2, averaged
in the Cesaro sense, separates mixing-like sets from structured ones.  The
cyclic mode wraps shifts around the window and is the default for reports.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .construct import (
    BCCertificate,
    StageFailure,
    bergelson_thin,
    build_D,
    extract_L,
    interleave_bc,
)
from .density import density_report
from .windowset import ValidationError, WindowSet, window_mask

THETA_MIX_DEFAULT = 0.02
THETA_STR_DEFAULT = 0.1


@dataclass(frozen=True)
class MixingReport:
    alpha: Fraction
    gamma: dict[int, Fraction]
    r: dict[int, Fraction]
    cesaro: dict[int, Fraction]
    r_eps_density: dict[float, Fraction]
    classification: str  # mixing-like | structured | inconclusive
    theta_mix: float
    theta_str: float
    n_max: int
    mode: str


def autocorrelation(a: WindowSet, i: int, mode: str = "cyclic") -> Fraction:
    """Density of A ∩ (A - i): truncated over [1, N - i], or with wraparound."""
    n = a.window_len
    if not 0 <= i < n:
        raise ValidationError(f"shift i={i} outside [0, {n})")
    if mode == "truncated":
        mask = window_mask(n - i) if i else window_mask(n)
        count = (a.bits & (a.bits >> i) & mask).bit_count()
        return Fraction(count, n - i)
    if mode == "cyclic":
        rot = (a.bits >> i) | ((a.bits << (n - i)) if i else 0)
        count = (a.bits & rot & window_mask(n)).bit_count()
        return Fraction(count, n)
    raise ValidationError(f"mode must be truncated or cyclic, got {mode!r}")


def cross_correlation(a: WindowSet, target: WindowSet, i: int) -> Fraction:
    """Density of (A - i) ∩ Y over Y's window (truncated convention)."""
    w = target.window_len
    count = (target.bits & (a.bits >> i) & window_mask(w)).bit_count()
    return Fraction(count, w)


def mixing_report(
    a: WindowSet,
    n_max: int,
    eps_list: Sequence[float] = (0.01, 0.05, 0.1),
    mode: str = "cyclic",
    theta_mix: float = THETA_MIX_DEFAULT,
    theta_str: float = THETA_STR_DEFAULT,
) -> MixingReport:
    """Exact-rational autocorrelation report with a threshold classification.

    The thresholds are configuration, not claims; they ride along in the
    report.  The finitized Cesaro/density inequality is asserted on every
    report it is arithmetic, so a failure means a bug, not bad data.
    """
    if not 1 <= n_max <= a.window_len // 2:
        raise ValidationError(f"n_max={n_max} outside [1, N/2]")
    alpha = density_report(a).upper_estimate
    alpha_sq = alpha * alpha
    gamma: dict[int, Fraction] = {}
    r: dict[int, Fraction] = {}
    cesaro: dict[int, Fraction] = {}
    running = Fraction(0)
    for i in range(1, n_max + 1):
        g = autocorrelation(a, i, mode)
        gamma[i] = g
        r[i] = abs(g - alpha_sq)
        running += r[i]
        cesaro[i] = running / i
    r_eps_density: dict[float, Fraction] = {}
    for eps in eps_list:
        low = sum(1 for i in r if r[i] <= eps)
        r_eps_density[eps] = Fraction(low, n_max)
    final = cesaro[n_max]
    if final <= theta_mix:
        classification = "mixing-like"
    elif final >= theta_str:
        classification = "structured"
    else:
        classification = "inconclusive"
    _assert_cesaro_density_bound(r, cesaro[n_max], eps_list)
    return MixingReport(
        alpha=alpha,
        gamma=gamma,
        r=r,
        cesaro=cesaro,
        r_eps_density=r_eps_density,
        classification=classification,
        theta_mix=theta_mix,
        theta_str=theta_str,
        n_max=n_max,
        mode=mode,
    )


def _assert_cesaro_density_bound(
    r: dict[int, Fraction], final_cesaro: Fraction, eps_list: Sequence[float]
) -> None:
    # Finite form of the Cesaro/density duality: mean(r) <= eps*delta +
    # max(r)*(1-delta) with delta the fraction of shifts whose r is <= eps.
    # Pure arithmetic, so it must hold exactly for every eps.
    n = len(r)
    r_max = max(r.values()) if r else Fraction(0)
    for eps in eps_list:
        eps_f = Fraction(eps)
        delta = Fraction(sum(1 for i in r if r[i] <= eps_f), n)
        bound = eps_f * delta + r_max * (1 - delta)
        assert final_cesaro <= bound, "Cesaro/density inequality violated (bug)"


def r_epsilon(
    a: WindowSet,
    eps: float,
    n_max: int,
    target: Optional[WindowSet] = None,
    mode: str = "cyclic",
) -> WindowSet:
    """Shifts i <= n_max whose deviation r(i) is at most eps, as a WindowSet.

    With a target set Y the deviation is |density((A - i) ∩ Y) - alpha * beta|
    (beta = density of Y); without one it is the A-vs-A special case.
    """
    if not 1 <= n_max <= a.window_len // 2:
        raise ValidationError(f"n_max={n_max} outside [1, N/2]")
    alpha = density_report(a).upper_estimate
    bits = 0
    if target is None:
        ref = alpha * alpha
        for i in range(1, n_max + 1):
            if abs(autocorrelation(a, i, mode) - ref) <= eps:
                bits |= 1 << i
    else:
        beta = Fraction(target.cardinality, target.window_len)
        ref = alpha * beta
        for i in range(1, n_max + 1):
            if abs(cross_correlation(a, target, i) - ref) <= eps:
                bits |= 1 << i
    return WindowSet(n_max, bits, label=f"R_eps({eps})")


def find_bc_pseudorandom(
    a: WindowSet,
    m: int,
    candidates: int = 8,
    n_max: Optional[int] = None,
    mode: str = "cyclic",
) -> BCCertificate:
    """B + C ⊆ A via good shifts: translate extraction, the d-sequence drawn
    from the near-independent shifts R_eta with eta = alpha^2 / 2, thinning,
    and interleaving.  Non-mixing inputs run anyway, tagged hypothesis_unmet.
    """
    if n_max is None:
        n_max = min(a.window_len // 2, max(1024, 64 * m))
    report = mixing_report(a, n_max, mode=mode)
    hypothesis_unmet = report.classification != "mixing-like"
    alpha = report.alpha
    if alpha == 0:
        raise StageFailure("find_bc_pseudorandom", "input set has zero density estimate")
    lt = extract_L(a, candidates)
    eta = float(alpha * alpha) / 2
    r_eta = r_epsilon(a, eta, n_max, target=lt.l_set, mode="truncated")
    l_members: list[int] = []
    x = 0
    while len(l_members) < max(2 * m, 8):
        x = lt.l_set.next_member(x)
        if x is None:
            break
        l_members.append(x)
    d_res = build_D(a, l_members, 3 * m + 4, extra_mask=r_eta.bits, require_membership=False)
    thin = bergelson_thin(a, lt.l_set, d_res.d, tau=eta)
    trace = (
        f"mixing_report: classification={report.classification}, "
        f"cesaro={float(report.cesaro[n_max]):.5f}",
        f"extract_L: x0={lt.base_point}, |L|={lt.l_set.cardinality}",
        f"R_eta: eta={eta:.4f}, |R|={r_eta.cardinality} of {n_max}",
        f"build_D: |D|={len(d_res.d)}",
        f"bergelson_thin: survivors={len(thin.survivors)}",
    )
    cert = interleave_bc(a, lt.l_set, thin.survivors, m, trace)
    return BCCertificate(
        b=cert.b,
        c=cert.c,
        k=0,
        verified=cert.verified,
        violations=cert.violations,
        pipeline_trace=cert.pipeline_trace,
        requested_size=m,
        partial=cert.partial,
        hypothesis_unmet=hypothesis_unmet,
        meta={"alpha": str(alpha), "eta": eta, "classification": report.classification},
    )
