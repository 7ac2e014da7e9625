"""Multi-frequency topological-derivative imaging of thin inclusions."""

from ._mftd import (
    Error,
    bessel_j,
    canonical_config,
    chebyshev_fit,
    etd_multi_map,
    find_resonance,
    git_blob_sha1,
    lambda_fn,
    localization_metric,
    neumann,
    omegas,
    presets,
    run,
    struve_h,
    validate_config,
)

__all__ = [
    "Error",
    "bessel_j",
    "canonical_config",
    "chebyshev_fit",
    "etd_multi_map",
    "find_resonance",
    "git_blob_sha1",
    "lambda_fn",
    "localization_metric",
    "neumann",
    "omegas",
    "presets",
    "run",
    "struve_h",
    "validate_config",
]
