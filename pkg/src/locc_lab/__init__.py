"""Information ledgers, LOCC protocol traces, and restricted-commutator
diagnostics for small bipartite quantum systems."""

from .ledger import ClassicalBoundReport, InfoLedger, Interval
from .qmat import (
    BipartiteState,
    ComplexMatrix,
    NotAStateError,
    SchmidtForm,
    SpectralDecomposition,
    dephase,
    fidelity_pure,
    negativity,
    partial_trace,
    partial_transpose,
    schmidt,
    shannon_entropy,
    spectral,
    tensor,
    von_neumann_entropy,
)

__version__ = "0.1.0"

__all__ = [
    "BipartiteState",
    "ClassicalBoundReport",
    "ComplexMatrix",
    "InfoLedger",
    "Interval",
    "NotAStateError",
    "SchmidtForm",
    "SpectralDecomposition",
    "__version__",
    "dephase",
    "fidelity_pure",
    "negativity",
    "partial_trace",
    "partial_transpose",
    "schmidt",
    "shannon_entropy",
    "spectral",
    "tensor",
    "von_neumann_entropy",
]
