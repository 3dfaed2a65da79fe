"""Information ledgers for bipartite states.

Splits the total information of a state into local, mutual, classical and
quantum shares, exactly for pure states and as certified intervals for mixed
ones. Conventions: n counts qubits (log2 of total dimension), everything is
in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qmat import (
    BipartiteState,
    partial_trace,
    shannon_entropy,
    von_neumann_entropy,
)


@dataclass(frozen=True)
class Interval:
    """Closed interval certified to contain an information quantity."""

    lower: float
    upper: float

    def __post_init__(self):
        if self.lower > self.upper + 1e-12:
            raise ValueError(f"empty interval [{self.lower}, {self.upper}]")

    def contains(self, value: float, tol: float = 1e-9) -> bool:
        return self.lower - tol <= value <= self.upper + tol

    @property
    def width(self) -> float:
        return self.upper - self.lower


Bits = float


@dataclass(frozen=True)
class InfoLedger:
    """One state's information accounts.

    ``classical`` is the information extractable with local operations plus a
    classical channel; ``classical_deficit`` / ``quantum_deficit`` are the
    gains from adding that channel / upgrading it to a quantum one. The two
    deficits always add up to ``mutual``. ``distillable`` and ``formation``
    are present for pure states only, where both equal the entropy of either
    reduction.
    """

    n: float
    total: Bits
    local_a: Bits
    local_b: Bits
    mutual: Bits
    local_only: Bits
    classical: Bits | Interval
    classical_deficit: Bits | Interval
    quantum_deficit: Bits | Interval
    distillable: Bits | None = None
    formation: Bits | None = None


@dataclass(frozen=True)
class PureStateQuantities:
    distillable: Bits
    formation: Bits
    classical: Bits
    classical_deficit: Bits
    quantum_deficit: Bits


@dataclass(frozen=True)
class ClassicalBoundReport:
    mutual: Bits
    diagonal_entropy: Bits
    margin_entropy: Bits  # H - I_M, nonnegative for diagonal states
    margin_dimension: Bits  # log2 min(d_A, d_B) - I_M


def _entropies(state: BipartiteState) -> tuple[float, float, float]:
    s_ab = von_neumann_entropy(state.matrix)
    s_a = von_neumann_entropy(partial_trace(state, "A"))
    s_b = von_neumann_entropy(partial_trace(state, "B"))
    return s_ab, s_a, s_b


def pure_state_quantities(state: BipartiteState) -> PureStateQuantities:
    """Exact classical/quantum split for a pure state.

    Both entanglement measures coincide with the reduction entropy, the
    classical share is n minus that entropy, and the quantum deficit equals
    the distillable entanglement.
    """
    if not state.is_pure:
        raise ValueError("pure state required; use mixed_state_bounds for mixed states")
    s_ab, s_a, s_b = _entropies(state)
    n = state.n_qubits
    total = n - s_ab
    local_only = (math.log2(state.dim_a) - s_a) + (math.log2(state.dim_b) - s_b)
    classical = n - s_a
    return PureStateQuantities(
        distillable=s_a,
        formation=s_a,
        classical=classical,
        classical_deficit=classical - local_only,
        quantum_deficit=total - classical,
    )


def mixed_state_bounds(state: BipartiteState) -> Interval:
    """Certified interval for the extractable classical information.

    Lower end is what local operations alone give; the upper end
    n - max(S_A, S_B) is conjectural in general. If the matrix is actually
    pure the interval collapses to the exact point n - S_A.
    """
    _, s_a, s_b = _entropies(state)
    n = state.n_qubits
    upper = n - max(s_a, s_b)
    if state.purity() >= 1.0 - 1e-10:
        return Interval(upper, upper)
    local_only = (math.log2(state.dim_a) - s_a) + (math.log2(state.dim_b) - s_b)
    return Interval(local_only, upper)


def ledger(state: BipartiteState) -> InfoLedger:
    """Full information ledger; exact for pure inputs, intervals for mixed."""
    s_ab, s_a, s_b = _entropies(state)
    n = state.n_qubits
    n_a, n_b = math.log2(state.dim_a), math.log2(state.dim_b)
    total = n - s_ab
    local_a = n_a - s_a
    local_b = n_b - s_b
    mutual = s_a + s_b - s_ab
    local_only = local_a + local_b
    if state.is_pure:
        pure = pure_state_quantities(state)
        return InfoLedger(
            n=n,
            total=total,
            local_a=local_a,
            local_b=local_b,
            mutual=mutual,
            local_only=local_only,
            classical=pure.classical,
            classical_deficit=pure.classical_deficit,
            quantum_deficit=pure.quantum_deficit,
            distillable=pure.distillable,
            formation=pure.formation,
        )
    classical = mixed_state_bounds(state)
    # deficits cannot be negative: each widened operation class only adds power
    return InfoLedger(
        n=n,
        total=total,
        local_a=local_a,
        local_b=local_b,
        mutual=mutual,
        local_only=local_only,
        classical=classical,
        classical_deficit=Interval(
            max(0.0, classical.lower - local_only), classical.upper - local_only
        ),
        quantum_deficit=Interval(max(0.0, total - classical.upper), total - classical.lower),
    )


def classical_bound_check(state: BipartiteState) -> ClassicalBoundReport:
    """Check the classical correlation bounds on a product-basis-diagonal state.

    For such states the mutual information can exceed neither the entropy of
    the diagonal distribution nor log2 of the smaller local dimension.
    Raises if the input has off-diagonal entries (not a classical state) or,
    impossibly, if either bound fails.
    """
    rho = state.matrix.entries
    off = rho - np.diag(np.diag(rho))
    worst = float(np.max(np.abs(off)))
    if worst > 1e-10:
        raise ValueError(f"not diagonal in the product basis: max off-diagonal {worst:.3e}")
    diag = np.clip(np.real(np.diag(rho)), 0.0, 1.0)
    h_diag = shannon_entropy(diag)
    _, s_a, s_b = _entropies(state)
    mutual = s_a + s_b - h_diag
    margin_entropy = h_diag - mutual
    margin_dimension = math.log2(min(state.dim_a, state.dim_b)) - mutual
    if margin_entropy < -1e-9 or margin_dimension < -1e-9:
        raise ArithmeticError(
            f"classical bound violated by a diagonal state: margins "
            f"{margin_entropy:.3e}, {margin_dimension:.3e}"
        )
    return ClassicalBoundReport(mutual, h_diag, margin_entropy, margin_dimension)
