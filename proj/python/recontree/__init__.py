"""Reconstruction-tree quantizers on dyadic partitions of the unit cube."""

from ._core import (
    CapTooSmallError,
    DepthLimitError,
    DomainError,
    FormatError,
    Quantizer,
    RateSchedule,
    StructureError,
    approximation_error,
    approximation_trend,
    decode,
    distortion,
    encode,
    fit,
    kmeans,
    rate_experiment,
    sample,
    sweep,
)

__all__ = [
    "CapTooSmallError",
    "DepthLimitError",
    "DomainError",
    "FormatError",
    "Quantizer",
    "RateSchedule",
    "StructureError",
    "approximation_error",
    "approximation_trend",
    "decode",
    "distortion",
    "encode",
    "fit",
    "kmeans",
    "rate_experiment",
    "sample",
    "sweep",
]
