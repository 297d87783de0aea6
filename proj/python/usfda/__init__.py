"""Fourier domain adaptation and speckle simulation for ultrasound images.

Images are 2-D float64 arrays of shape (height, width) with values in [0, 1].
"""

from ._usfda import (
    ConfigurationError,
    Error,
    IngestionError,
    IntegrityError,
    InvalidInputError,
    ManifestError,
    PairingError,
    ParameterError,
    ShapeError,
    SpectralInconsistencyError,
    __version__,
    adapt,
    build_mask,
    dice,
    forward_dft,
    inverse_dft,
    log_magnitude,
    make_pairing,
    simulate,
    split,
    threshold,
)

__all__ = [
    "ConfigurationError",
    "Error",
    "IngestionError",
    "IntegrityError",
    "InvalidInputError",
    "ManifestError",
    "PairingError",
    "ParameterError",
    "ShapeError",
    "SpectralInconsistencyError",
    "__version__",
    "adapt",
    "build_mask",
    "dice",
    "forward_dft",
    "inverse_dft",
    "log_magnitude",
    "make_pairing",
    "simulate",
    "split",
    "threshold",
]
