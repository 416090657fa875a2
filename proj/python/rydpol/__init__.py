"""Optical-probe transmission of an RF-dressed Rydberg EIT ladder.

Thin Python veneer over the C++ core: angular-momentum algebra, preset
excitation ladders, analytic dressed states, Lindblad steady states, and
(theta, coupling-detuning) spectrogram sweeps.
"""

from rydpol._core import (
    FieldConfig,
    LadderSpec,
    RateConfig,
    Spectrogram,
    SweepOptions,
    VaporConfig,
    build_hamiltonian,
    central_cut,
    clebsch_gordan,
    diagonalize_mF_block,
    dress_rydberg_pair,
    dressed_strength_residual,
    extinction,
    find_peaks,
    preset,
    preset_names,
    steady_state_density,
    sweep_spectrogram,
    transmission,
    wigner_3j,
    wigner_6j,
)

__all__ = [
    "FieldConfig",
    "LadderSpec",
    "RateConfig",
    "Spectrogram",
    "SweepOptions",
    "VaporConfig",
    "build_hamiltonian",
    "central_cut",
    "clebsch_gordan",
    "diagonalize_mF_block",
    "dress_rydberg_pair",
    "dressed_strength_residual",
    "extinction",
    "find_peaks",
    "preset",
    "preset_names",
    "steady_state_density",
    "sweep_spectrogram",
    "transmission",
    "wigner_3j",
    "wigner_6j",
]

__version__ = "1.0.0"
