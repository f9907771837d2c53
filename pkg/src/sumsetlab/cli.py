"""Command-line front end: deterministic JSON reports for every subcommand.

Exit codes: 0 verified success, 1 structured negative result, 2 usage or
validation error.  Every report embeds the run configuration that produced
it; reruns with the same configuration are byte-identical at any --threads.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any, Optional

from . import harness as harness_mod
from . import report
from .construct import StageFailure, find_bc_high_density, verify_bc
from .density import density_report
from .mixing import find_bc_pseudorandom, mixing_report
from .ramsey import one_shift
from .transform import default_n_schedule, fatten
from .windowset import GeneratorSpec, ValidationError, WindowSet, generate, read_set, write_set


def _add_input_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", help="set file (N=<len> header format)")
    p.add_argument("--kind", help="generator kind instead of --input "
                   "(bernoulli|periodic|interval_blocks|explicit)")
    p.add_argument("--n", type=int, default=0, help="window length for --kind")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p", type=float, default=0.5, help="bernoulli inclusion probability")
    p.add_argument("--modulus", type=int, default=2)
    p.add_argument("--residues", type=int, nargs="*", default=[0])
    p.add_argument("--block-len", type=int, default=1)
    p.add_argument("--gap-len", type=int, default=1)
    p.add_argument("--members", type=int, nargs="*", default=[])


def _spec_from_args(args: argparse.Namespace) -> GeneratorSpec:
    return GeneratorSpec(
        kind=args.kind,
        window_len=args.n,
        seed=args.seed,
        p=args.p,
        modulus=args.modulus,
        residues=tuple(args.residues),
        block_len=args.block_len,
        gap_len=args.gap_len,
        members=tuple(args.members),
    )


def _load_input(args: argparse.Namespace) -> tuple[WindowSet, dict[str, Any]]:
    if args.input:
        return read_set(args.input), {"input": args.input}
    if args.kind:
        spec = _spec_from_args(args)
        return generate(spec), {"generator": _spec_config(spec)}
    raise ValidationError("provide --input FILE or --kind KIND")


def _spec_config(spec: GeneratorSpec) -> dict[str, Any]:
    cfg: dict[str, Any] = {"kind": spec.kind, "window_len": spec.window_len, "seed": spec.seed}
    if spec.kind == "bernoulli":
        cfg["p"] = spec.p
    elif spec.kind == "periodic":
        cfg.update(modulus=spec.modulus, residues=sorted(spec.residues))
    elif spec.kind == "interval_blocks":
        cfg.update(block_len=spec.block_len, gap_len=spec.gap_len)
    elif spec.kind == "explicit":
        cfg["members"] = list(spec.members)
    return cfg


def _emit(payload: dict[str, Any], args: argparse.Namespace) -> None:
    text = report.dumps(payload)
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config_block(args: argparse.Namespace, extra: dict[str, Any]) -> dict[str, Any]:
    # --threads is an execution knob, not part of the mathematical run
    # configuration; leaving it out keeps reports byte-identical across
    # thread counts.
    cfg = {"subcommand": args.command}
    cfg.update(extra)
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sumsetlab")
    parser.add_argument(
        "--threads",
        type=int,
        default=int(os.environ.get("SUMSET_THREADS", "1")),
        help="cap on internal parallelism; results are identical at any value",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a set file")
    _add_input_args(p)
    p.add_argument("--out", required=True)
    p.add_argument("--rle", action="store_true")

    p = sub.add_parser("density", help="density report")
    _add_input_args(p)
    p.add_argument("--output")

    p = sub.add_parser("fatten", help="block-length search for dense block sets")
    _add_input_args(p)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--n-max", type=int, default=0, help="cap the block-length schedule")
    p.add_argument("--output")

    p = sub.add_parser("find-bc", help="greedy B+C ⊆ A pipeline")
    _add_input_args(p)
    p.add_argument("--size", type=int, default=5)
    p.add_argument("--candidates", type=int, default=8)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--pseudorandom", action="store_true", help="use the mixing-based route")
    p.add_argument("--output")

    p = sub.add_parser("one-shift", help="B+C ⊆ A ∪ (A+k) pipeline")
    _add_input_args(p)
    p.add_argument("--size", type=int, default=3)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--output")

    p = sub.add_parser("mixing", help="autocorrelation mixing report")
    _add_input_args(p)
    p.add_argument("--n-max", type=int, default=1000)
    p.add_argument("--eps", type=float, action="append", default=None)
    p.add_argument("--mode", choices=["cyclic", "truncated"], default="cyclic")
    p.add_argument("--output")

    p = sub.add_parser("verify", help="re-verify a certificate JSON against a set file")
    p.add_argument("--certificate", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--output")

    p = sub.add_parser("harness", help="run a pinned-seed suite")
    p.add_argument("--suite", choices=["acceptance", "oracle", "quick"], default="quick")
    p.add_argument("--output")
    return parser


def run(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return _dispatch(args)
    except (ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "gen":
        a, src = _load_input(args)
        write_set(a, args.out, rle=args.rle)
        return 0

    if args.command == "density":
        a, src = _load_input(args)
        rep = density_report(a)
        _emit({"config": _config_block(args, src), "density": report.density_report_json(rep)}, args)
        return 0

    if args.command == "fatten":
        a, src = _load_input(args)
        schedule = None
        if args.n_max:
            schedule = [n for n in default_n_schedule(a.window_len) if n <= args.n_max]
        out = fatten(a, args.epsilon, schedule)
        payload = {
            "config": _config_block(args, {**src, "epsilon": args.epsilon, "n_max": args.n_max}),
            "fatten": report.fatten_json(out),
        }
        _emit(payload, args)
        return 0 if out.ok else 1

    if args.command == "find-bc":
        a, src = _load_input(args)
        cfg = {**src, "size": args.size, "candidates": args.candidates, "tau": args.tau,
               "pseudorandom": args.pseudorandom}
        try:
            if args.pseudorandom:
                cert = find_bc_pseudorandom(a, args.size, candidates=args.candidates)
            else:
                cert = find_bc_high_density(a, args.size, candidates=args.candidates, tau=args.tau)
        except StageFailure as exc:
            _emit({"config": _config_block(args, cfg),
                   "failure": {"stage": exc.stage, "message": str(exc), "detail": exc.detail}}, args)
            return 1
        payload = {"config": _config_block(args, cfg), "certificate": report.certificate_json(cert)}
        _emit(payload, args)
        return 0 if cert.verified and not cert.partial else 1

    if args.command == "one-shift":
        a, src = _load_input(args)
        cfg = {**src, "size": args.size, "epsilon": args.epsilon}
        try:
            cert = one_shift(a, args.size, args.epsilon)
        except StageFailure as exc:
            _emit({"config": _config_block(args, cfg),
                   "failure": {"stage": exc.stage, "message": str(exc), "detail": exc.detail}}, args)
            return 1
        payload = {"config": _config_block(args, cfg), "certificate": report.certificate_json(cert)}
        _emit(payload, args)
        return 0 if cert.verified and not cert.partial else 1

    if args.command == "mixing":
        a, src = _load_input(args)
        eps_list = args.eps if args.eps else [0.01, 0.05, 0.1]
        rep = mixing_report(a, args.n_max, eps_list=eps_list, mode=args.mode)
        payload = {
            "config": _config_block(args, {**src, "n_max": args.n_max, "eps": eps_list,
                                           "mode": args.mode}),
            "mixing": report.mixing_json(rep),
        }
        _emit(payload, args)
        return 0

    if args.command == "verify":
        with open(args.certificate) as fh:
            doc = json.load(fh)
        cert_doc = doc.get("certificate", doc)
        if cert_doc.get("schema_version", 1) > report.SCHEMA_VERSION:
            raise ValidationError(
                f"certificate schema {cert_doc.get('schema_version')} is newer than "
                f"supported {report.SCHEMA_VERSION}"
            )
        a = read_set(args.input)
        cert = verify_bc(a, cert_doc["B"], cert_doc["C"], cert_doc.get("k", 0))
        payload = {
            "config": _config_block(args, {"certificate": args.certificate, "input": args.input}),
            "certificate": report.certificate_json(cert),
        }
        _emit(payload, args)
        return 0 if cert.verified else 1

    if args.command == "harness":
        results = harness_mod.run_suite(args.suite)
        payload = {
            "config": _config_block(args, {"suite": args.suite}),
            "results": [
                {
                    "name": r.name,
                    "measured": r.measured,
                    "threshold": r.threshold,
                    "passed": r.passed,
                    "seconds": round(r.seconds, 2),
                }
                for r in results
            ],
            "all_passed": all(r.passed for r in results),
        }
        _emit(payload, args)
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            print(f"{status} {r.name}: {r.measured} (need {r.threshold})", file=sys.stderr)
        return 0 if all(r.passed for r in results) else 1

    raise AssertionError(f"unhandled command {args.command}")


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
