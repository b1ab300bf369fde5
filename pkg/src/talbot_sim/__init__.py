"""Near-field diffraction simulator for binary gratings on a spatial
light modulator: closed-form propagation, a brute-force Fresnel oracle,
photon-counting statistics, and pattern analysis."""

from .analysis import fringe_width_fraction, revival_distance, visibility
from .config import DEFAULTS, RunConfig, build_config, read_config_file
from .errors import ConfigError, DomainError, ResolutionCapError, TalbotSimError
from .grating import (SlmProfile, binary_transmission, fourier_coefficient,
                      render_slm_mask, truncated_transmission, write_pgm)
from .model import (Carpet, DetectionSpec, GratingSpec, Pattern, SourceSpec,
                    beta_from_fwhm, effective_distance, magnification,
                    spectral_grid, talbot_length)
from .montecarlo import McRun, sample_wavelength, simulate_scan
from .oracle import fresnel_field, fresnel_intensity, oracle_slit_rate
from .propagation import carpet, intensity, polychromatic_rate, scan, slit_rate

__version__ = "0.1.0"

__all__ = [
    "Carpet", "ConfigError", "DEFAULTS", "DetectionSpec", "DomainError",
    "GratingSpec", "McRun", "Pattern", "ResolutionCapError", "RunConfig",
    "SlmProfile", "SourceSpec", "TalbotSimError", "beta_from_fwhm",
    "binary_transmission", "build_config", "carpet", "effective_distance",
    "fourier_coefficient", "fresnel_field", "fresnel_intensity",
    "fringe_width_fraction", "intensity", "magnification",
    "oracle_slit_rate", "polychromatic_rate", "read_config_file",
    "render_slm_mask", "revival_distance", "sample_wavelength", "scan",
    "simulate_scan", "slit_rate", "spectral_grid", "talbot_length",
    "truncated_transmission", "visibility", "write_pgm",
]
