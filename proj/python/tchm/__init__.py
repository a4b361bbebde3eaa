"""Tavis-Cummings-Hubbard coupled-cavity array simulator."""

from tchm._core import (
    TWO_PI,
    Boundary,
    EigenState,
    Realization,
    SystemParams,
    basis_dimension,
    build_h_eff,
    cca_band,
    classify_bands,
    derive_realization_seed,
    eigensolve,
    emission_spectra,
    figure_preset_names,
    most_polaritonic_state,
    nodal_participation,
    open_momenta,
    periodic_momenta,
    polariton_bands,
    polariton_eigenvector,
    polaritonic_participation,
    run_figure_preset,
    sample_disorder,
)

__all__ = [
    "TWO_PI",
    "Boundary",
    "EigenState",
    "Realization",
    "SystemParams",
    "basis_dimension",
    "build_h_eff",
    "cca_band",
    "classify_bands",
    "derive_realization_seed",
    "eigensolve",
    "emission_spectra",
    "figure_preset_names",
    "most_polaritonic_state",
    "nodal_participation",
    "open_momenta",
    "periodic_momenta",
    "polariton_bands",
    "polariton_eigenvector",
    "polaritonic_participation",
    "run_figure_preset",
    "sample_disorder",
]

__version__ = "0.1.0"
