"""Finite-window experiments on sumset structure in dense integer sets:
densities with witnesses, block fattening, greedy B+C pipelines, one-shift
certificates, and autocorrelation mixing diagnostics."""

from .windowset import GeneratorSpec, ValidationError, WindowSet, generate
from .density import DensityReport, density_report, prefix_density, window_banach_density
from .transform import BlockTransformResult, FattenOutcome, block_transform, fatten
from .construct import (
    BCCertificate,
    LTranslate,
    StageFailure,
    bergelson_thin,
    build_D,
    extract_L,
    find_bc_high_density,
    interleave_bc,
    verify_bc,
)
from .ramsey import ColoringTable, MonoResult, color_pairs, mono_subset, one_shift
from .mixing import MixingReport, autocorrelation, find_bc_pseudorandom, mixing_report, r_epsilon

__all__ = [
    "GeneratorSpec",
    "ValidationError",
    "WindowSet",
    "generate",
    "DensityReport",
    "density_report",
    "prefix_density",
    "window_banach_density",
    "BlockTransformResult",
    "FattenOutcome",
    "block_transform",
    "fatten",
    "BCCertificate",
    "LTranslate",
    "StageFailure",
    "bergelson_thin",
    "build_D",
    "extract_L",
    "find_bc_high_density",
    "interleave_bc",
    "verify_bc",
    "ColoringTable",
    "MonoResult",
    "color_pairs",
    "mono_subset",
    "one_shift",
    "MixingReport",
    "autocorrelation",
    "find_bc_pseudorandom",
    "mixing_report",
    "r_epsilon",
]

__version__ = "0.1.0"
