"""3D moment descriptors for voxelized molecules."""

from ._core import (
    FAMILIES,
    FEATURE_COUNT,
    FEATURE_ORDER,
    DomainError,
    Error,
    HahnParams,
    ParseError,
    class_dispersion,
    deinterleave,
    hahn_normalized,
    interleave,
    mad,
    median,
    moments,
    nmad,
    qcd,
    quartiles,
    read_binvox,
    reconstruct_hahn,
    voxelize_xyz,
    write_binvox,
)

__all__ = [
    "FAMILIES",
    "FEATURE_COUNT",
    "FEATURE_ORDER",
    "DomainError",
    "Error",
    "HahnParams",
    "ParseError",
    "class_dispersion",
    "deinterleave",
    "hahn_normalized",
    "interleave",
    "mad",
    "median",
    "moments",
    "nmad",
    "qcd",
    "quartiles",
    "read_binvox",
    "reconstruct_hahn",
    "voxelize_xyz",
    "write_binvox",
]
