"""Pure-dephasing qubit toolkit: bath energetics and information flow."""

from ._core import (
    ExpansionRefused,
    MellinPoleError,
    QuadratureError,
    QuadratureOptions,
    QubitPreparation,
    SpectralModel,
    bath_energy,
    classify_energy_regime,
    classify_flow_direction,
    coherence,
    correspondence_report,
    d0,
    gamma,
    gamma0,
    gammaT,
    lambda_of_t,
    long_time_expansion,
    make_state,
    mellin_K,
    mellin_K_numeric,
    non_markovianity,
    short_time_coefficient,
    xi_of_t,
)

__all__ = [
    "ExpansionRefused",
    "MellinPoleError",
    "QuadratureError",
    "QuadratureOptions",
    "QubitPreparation",
    "SpectralModel",
    "bath_energy",
    "classify_energy_regime",
    "classify_flow_direction",
    "coherence",
    "correspondence_report",
    "d0",
    "gamma",
    "gamma0",
    "gammaT",
    "lambda_of_t",
    "long_time_expansion",
    "make_state",
    "mellin_K",
    "mellin_K_numeric",
    "non_markovianity",
    "short_time_coefficient",
    "xi_of_t",
]
