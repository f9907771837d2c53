"""JSON rendering of reports and certificates.

Exact rationals are rendered as "p/q" strings; float duplicates are advisory.
Output is deterministic: no clocks, no environment, fixed key order.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .construct import BCCertificate
from .density import DensityReport
from .mixing import MixingReport
from .transform import BlockTransformResult, FattenOutcome

SCHEMA_VERSION = 1


def frac(x: Fraction) -> dict[str, Any]:
    return {"exact": f"{x.numerator}/{x.denominator}", "float": float(x)}


def parse_frac(s: str) -> Fraction:
    p, q = s.split("/")
    return Fraction(int(p), int(q))


def density_report_json(rep: DensityReport) -> dict[str, Any]:
    return {
        "prefix_density_at": {str(n): frac(v) for n, v in rep.prefix_density_at.items()},
        "lower_estimate": frac(rep.lower_estimate),
        "upper_estimate": frac(rep.upper_estimate),
        "banach_estimates": {
            str(length): {"density": frac(v), "witness": [lo, hi]}
            for length, (v, (lo, hi)) in rep.banach_estimates.items()
        },
        "schedule": list(rep.schedule),
    }


def block_result_json(res: BlockTransformResult) -> dict[str, Any]:
    return {
        "n": res.n,
        "block_window_len": res.blocks.window_len,
        "block_count": res.blocks.cardinality,
        "achieved_density": frac(res.achieved_density),
        "epsilon": res.epsilon,
        "dropped_low": res.dropped_low,
    }


def fatten_json(out: FattenOutcome) -> dict[str, Any]:
    body: dict[str, Any] = {
        "ok": out.ok,
        "attempts": [{"n": n, "achieved": frac(v)} for n, v in out.attempts],
    }
    if out.result is not None:
        body["result"] = block_result_json(out.result)
    return body


def certificate_json(cert: BCCertificate) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "window_len": cert.b.window_len,
        "B": cert.b.members(),
        "C": cert.c.members(),
        "k": cert.k,
        "verified": cert.verified,
        "violations": [list(v) for v in cert.violations],
        "requested_size": cert.requested_size,
        "partial": cert.partial,
        "hypothesis_unmet": cert.hypothesis_unmet,
        "pipeline_trace": list(cert.pipeline_trace),
        "meta": cert.meta,
    }


def mixing_json(rep: MixingReport) -> dict[str, Any]:
    n_max = rep.n_max
    return {
        "alpha": frac(rep.alpha),
        "n_max": n_max,
        "mode": rep.mode,
        "cesaro_final": frac(rep.cesaro[n_max]),
        "r_eps_density": {str(eps): frac(v) for eps, v in rep.r_eps_density.items()},
        "classification": rep.classification,
        "thresholds": {"mixing": rep.theta_mix, "structured": rep.theta_str},
        "gamma": {str(i): frac(v) for i, v in rep.gamma.items()},
        "r": {str(i): frac(v) for i, v in rep.r.items()},
    }


def dumps(payload: dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, sort_keys=False) + "\n"
