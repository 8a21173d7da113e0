from ._core import (
    Config,
    ConfigError,
    IoError,
    __version__,
    classify_shift,
    derive_seed,
    dipole_shift_hz,
    forbidden_shifts_mhz,
    fret_critical_distance_nm,
    fret_rate,
    generate,
    inhomogeneous_fwhm_ghz,
    min_channel_spacing_ghz,
    reserved_offsets_ghz,
    sweep,
)

__all__ = [
    "Config",
    "ConfigError",
    "IoError",
    "__version__",
    "classify_shift",
    "derive_seed",
    "dipole_shift_hz",
    "forbidden_shifts_mhz",
    "fret_critical_distance_nm",
    "fret_rate",
    "generate",
    "inhomogeneous_fwhm_ghz",
    "min_channel_spacing_ghz",
    "reserved_offsets_ghz",
    "sweep",
]
