"""Quantum speed limit time of a boosted spin-1/2 wavepacket under Ohmic-like dephasing."""

__version__ = "0.1.0"

from .dephasing import (  # noqa: E402
    DephasingSpec,
    decoherence_drop,
    decoherence_factor,
    dephasing_generator,
    gamma_accumulated,
    gamma_infinity,
    gamma_rate,
    is_markovian_window,
    kraus_evolve,
    spectral_density,
)
from .numerics import ConvergenceError, QuadratureResult, Tolerance  # noqa: E402
from .qslt import (  # noqa: E402
    EvolutionWindow,
    QsltProblem,
    QsltResult,
    markovian_qslt,
    relativistic_qslt,
    unified_qslt,
)
from .relativity import BoostedPacketSpec, ChiResult, chi, chi_infinite, chi_mc_oracle, initial_state  # noqa: E402
from .sweep import SweepSpec, SweepTable, preset, run_sweep  # noqa: E402
