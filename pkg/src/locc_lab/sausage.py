"""Nine orthogonal product states on 3x3 and their local measurement lab.

The nine states are pairwise orthogonal and each a product, yet no sequence
of local measurements and classical messages can tell all nine apart. Two
commuting observables built on them can each be measured locally, but the
local implementations stop commuting: their commutator is itself a product
operator, so unlike the parity/phase case it can never create entanglement.
Includes the alternating projective ("ping-pong") discrimination sequence
for the modified eigenbasis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .commutators import kron_factorize
from .qmat import (
    BipartiteState,
    ComplexMatrix,
    basis_ket,
    haar_ket,
    negativity,
    schmidt,
    spectral,
)

_I3 = np.eye(3, dtype=complex)

# Pauli action embedded on span{|1>, |2>} of a qutrit, zero on |0>.
BOB_SIGMA_X = np.zeros((3, 3), dtype=complex)
BOB_SIGMA_X[1, 2] = BOB_SIGMA_X[2, 1] = 1.0
BOB_SIGMA_Z = np.zeros((3, 3), dtype=complex)
BOB_SIGMA_Z[1, 1], BOB_SIGMA_Z[2, 2] = 1.0, -1.0
BOB_SIGMA_Y = np.zeros((3, 3), dtype=complex)
BOB_SIGMA_Y[1, 2], BOB_SIGMA_Y[2, 1] = -1j, 1j
PROJECTOR_2 = np.zeros((3, 3), dtype=complex)
PROJECTOR_2[2, 2] = 1.0


def _plus(i: int, j: int, sign: float = 1.0) -> np.ndarray:
    return (basis_ket(3, i) + sign * basis_ket(3, j)) / math.sqrt(2)


@dataclass(frozen=True)
class SausageState:
    label: str
    alice: np.ndarray
    bob: np.ndarray

    @property
    def ket(self) -> np.ndarray:
        return np.kron(self.alice, self.bob)


def _factor_table() -> dict[str, tuple[np.ndarray, np.ndarray]]:
    return {
        "psi1": (_plus(0, 1), basis_ket(3, 2)),
        "psi2": (_plus(0, 1, -1), basis_ket(3, 2)),
        "psi3": (basis_ket(3, 0), _plus(0, 1)),
        "psi4": (basis_ket(3, 0), _plus(0, 1, -1)),
        "psi5": (_plus(1, 2), basis_ket(3, 0)),
        "psi6": (_plus(1, 2, -1), basis_ket(3, 0)),
        "psi7": (basis_ket(3, 1), basis_ket(3, 1)),
        "psi8": (basis_ket(3, 2), _plus(1, 2)),
        "psi9": (basis_ket(3, 2), _plus(1, 2, -1)),
    }


@dataclass(frozen=True)
class NineStateTable:
    states: tuple[SausageState, ...]

    def ket(self, label: str) -> np.ndarray:
        for state in self.states:
            if state.label == label:
                return state.ket
        raise KeyError(label)

    def gram(self) -> np.ndarray:
        kets = [s.ket for s in self.states]
        return np.array([[k1.conj() @ k2 for k2 in kets] for k1 in kets])


def build_nine_states() -> NineStateTable:
    """The nine orthogonal product states, each stored with its local factors."""
    return NineStateTable(
        tuple(SausageState(label, a, b) for label, (a, b) in _factor_table().items())
    )


def modified_basis() -> dict[str, np.ndarray]:
    """Eigenbasis of the locally measurable stand-in for the seven-state observable.

    The first seven states are unchanged; the last two become |2>|2> and
    |2>|1>, which is what a local implementation can actually pin down.
    """
    table = {label: np.kron(a, b) for label, (a, b) in _factor_table().items() if label not in ("psi8", "psi9")}
    table["psi10"] = np.kron(basis_ket(3, 2), basis_ket(3, 2))
    table["psi11"] = np.kron(basis_ket(3, 2), basis_ket(3, 1))
    return table


@dataclass(frozen=True)
class SausageOperators:
    """The two commuting observables and their local implementations.

    o1 has eigenvalues 1..7 on the first seven states and 0 elsewhere; o2
    acts as the embedded sigma_x on Bob behind Alice's |2> projector, with
    eigenvalues +1/-1 on psi8/psi9. o2 is already local; o1_locc adds the
    embedded sigma_z block, which shifts the missing eigenspace onto the
    modified basis.
    """

    o1: ComplexMatrix
    o2: ComplexMatrix
    o1_locc: ComplexMatrix
    o2_locc: ComplexMatrix


def build_operators() -> SausageOperators:
    table = build_nine_states()
    o1 = np.zeros((9, 9), dtype=complex)
    for value, label in enumerate(["psi1", "psi2", "psi3", "psi4", "psi5", "psi6", "psi7"], start=1):
        ket = table.ket(label)
        o1 += value * np.outer(ket, ket.conj())
    o2 = np.kron(PROJECTOR_2, BOB_SIGMA_X)
    o1_locc = o1 + np.kron(PROJECTOR_2, BOB_SIGMA_Z)
    dims = (3, 3)
    return SausageOperators(
        ComplexMatrix(o1, dims),
        ComplexMatrix(o2, dims),
        ComplexMatrix(o1_locc, dims),
        ComplexMatrix(o2, dims),
    )


# ---------------------------------------------------------------------------
# ping-pong discrimination

@dataclass(frozen=True)
class PingPongRound:
    actor: str
    side: str  # A or B
    projectors: tuple[str, ...]
    outcome: str
    message: str


@dataclass(frozen=True)
class PingPongTranscript:
    rounds: tuple[PingPongRound, ...]
    verdict: str
    surplus_flag: bool


def _measure(ket: np.ndarray, side: str, outcomes: list[tuple[str, np.ndarray]]):
    """Deterministic side-local projective measurement; raises if any outcome
    probability is away from 0 or 1."""
    for label, local in outcomes:
        full = np.kron(local, _I3) if side == "A" else np.kron(_I3, local)
        amp = full @ ket
        prob = float(np.real(amp.conj() @ amp))
        if prob > 1.0 - 1e-9:
            return label, amp / math.sqrt(prob)
        if prob > 1e-9:
            raise ValueError(f"nondeterministic outcome {label!r} with probability {prob:.6f}")
    raise ValueError("no outcome fired; input not in the measured basis")


def _proj(vec: np.ndarray) -> np.ndarray:
    return np.outer(vec, vec.conj())


def ping_pong(state) -> PingPongTranscript:
    """Identify one of the nine modified-basis states by alternating local
    projections and classical messages.

    Every round measures a single side; the verdict is deterministic and
    correct for every valid input. The two extra states |2>|2> and |2>|1>
    carry a surplus flag: telling them apart goes beyond what the global
    seven-state observable would reveal.
    """
    basis = modified_basis()
    if isinstance(state, str):
        if state not in basis:
            raise ValueError(f"unknown state label {state!r}; expected one of {sorted(basis)}")
        ket = basis[state]
    else:
        ket = np.asarray(state, dtype=complex).reshape(-1)
        ket = ket / np.linalg.norm(ket)
        overlaps = {label: abs(ref.conj() @ ket) for label, ref in basis.items()}
        if max(overlaps.values()) < 1.0 - 1e-9:
            raise ValueError("input ket is not one of the nine modified-basis states")

    rounds: list[PingPongRound] = []

    def play(actor, side, outcomes, current):
        label, nxt = _measure(current, side, outcomes)
        rounds.append(
            PingPongRound(actor, side, tuple(name for name, _ in outcomes), label, label)
        )
        return label, nxt

    # Bob asks whether his qutrit sits in |2>
    outcome, ket = play(
        "bob", "B", [("|2>", PROJECTOR_2), ("not-|2>", _I3 - PROJECTOR_2)], ket
    )
    if outcome == "|2>":
        # Alice separates |0+1>, |0-1>, |2>
        outcome, ket = play(
            "alice",
            "A",
            [("|0+1>", _proj(_plus(0, 1))), ("|0-1>", _proj(_plus(0, 1, -1))), ("|2>", _proj(basis_ket(3, 2)))],
            ket,
        )
        verdict = {"|0+1>": "psi1", "|0-1>": "psi2", "|2>": "psi10"}[outcome]
        return PingPongTranscript(tuple(rounds), verdict, verdict == "psi10")

    # Alice asks whether her qutrit sits in |0>
    outcome, ket = play(
        "alice", "A", [("|0>", _proj(basis_ket(3, 0))), ("not-|0>", _I3 - _proj(basis_ket(3, 0)))], ket
    )
    if outcome == "|0>":
        # Bob separates |0+1> from |0-1>
        outcome, ket = play(
            "bob",
            "B",
            [("|0+1>", _proj(_plus(0, 1))), ("|0-1>", _proj(_plus(0, 1, -1))), ("|2>", _proj(basis_ket(3, 2)))],
            ket,
        )
        verdict = {"|0+1>": "psi3", "|0-1>": "psi4"}[outcome]
        return PingPongTranscript(tuple(rounds), verdict, False)

    # Bob resolves |0> vs |1> vs |2>
    outcome, ket = play(
        "bob",
        "B",
        [("|0>", _proj(basis_ket(3, 0))), ("|1>", _proj(basis_ket(3, 1))), ("|2>", _proj(basis_ket(3, 2)))],
        ket,
    )
    if outcome == "|0>":
        outcome, ket = play(
            "alice",
            "A",
            [("|1+2>", _proj(_plus(1, 2))), ("|1-2>", _proj(_plus(1, 2, -1))), ("|0>", _proj(basis_ket(3, 0)))],
            ket,
        )
        verdict = {"|1+2>": "psi5", "|1-2>": "psi6"}[outcome]
        return PingPongTranscript(tuple(rounds), verdict, False)
    if outcome == "|1>":
        outcome, ket = play(
            "alice",
            "A",
            [("|1>", _proj(basis_ket(3, 1))), ("|2>", _proj(basis_ket(3, 2))), ("|0>", _proj(basis_ket(3, 0)))],
            ket,
        )
        verdict = {"|1>": "psi7", "|2>": "psi11"}[outcome]
        return PingPongTranscript(tuple(rounds), verdict, verdict == "psi11")
    raise ValueError("Bob found |2> after a negative first round; input not in the table")


# ---------------------------------------------------------------------------
# diagnostics

@dataclass(frozen=True)
class SeparabilityReport:
    trials: int
    seed: int
    zero_outputs: int
    max_negativity: float
    max_second_schmidt: float


def product_commutator_separability(
    trials: int = 1000, seed: int = 0, commutator_matrix=None
) -> SeparabilityReport:
    """Check that the local-implementation commutator cannot entangle.

    The commutator must Kronecker-factorize (it is a product operator); its
    nonzero images of random product kets must all have Schmidt rank 1 and
    zero negativity. Annihilated inputs are counted separately.
    """
    if commutator_matrix is None:
        ops = build_operators()
        a, b = ops.o1_locc.entries, ops.o2_locc.entries
        commutator_matrix = a @ b - b @ a
    k = np.asarray(commutator_matrix, dtype=complex)
    factor = kron_factorize(k, (3, 3))
    if not factor.is_product:
        raise ValueError(f"commutator is not a product operator: residual {factor.residual:.3e}")
    rng = np.random.default_rng(seed)
    zero_outputs = 0
    max_neg = 0.0
    max_second = 0.0
    for _ in range(trials):
        ket = np.kron(haar_ket(3, rng), haar_ket(3, rng))
        out = k @ ket
        norm = float(np.linalg.norm(out))
        if norm <= 1e-12:
            zero_outputs += 1
            continue
        out = out / norm
        coeffs = schmidt(out, (3, 3)).coefficients
        max_second = max(max_second, float(coeffs[1]))
        max_neg = max(max_neg, negativity(BipartiteState.from_ket(out, (3, 3))))
    return SeparabilityReport(trials, seed, zero_outputs, max_neg, max_second)


@dataclass(frozen=True)
class EquivalenceReport:
    """Evidence that the local implementation measures the seven-state observable."""

    eigen_residuals: tuple[float, ...]  # || O'1 psi_i - i psi_i ||, i = 1..7
    subspace_overlaps: tuple[float, ...]  # || P(eigenvalue=i) psi_i ||, i = 1..7
    verdict_eigenvalues: dict[str, int]
    phase_pair_resolved: bool  # psi8/psi9 separated by Bob's |1+2>/|1-2> projectors


def o1_measurement_equivalence() -> EquivalenceReport:
    """Match the local implementation's spectrum and verdicts to the original.

    Eigenvalue 1 of the implementation is doubly degenerate (the first state
    shares it with |2>|1>), so membership is checked with eigenspace
    projectors rather than raw solver eigenvectors.
    """
    table = build_nine_states()
    ops = build_operators()
    o1p = ops.o1_locc.entries
    decomp = spectral(ops.o1_locc)
    residuals = []
    overlaps = []
    for value in range(1, 8):
        ket = table.ket(f"psi{value}")
        residuals.append(float(np.linalg.norm(o1p @ ket - value * ket)))
        cols = [i for i, lam in enumerate(decomp.eigenvalues) if abs(lam - value) < 1e-8]
        proj = np.zeros((9, 9), dtype=complex)
        for i in cols:
            v = decomp.eigenvectors[:, i]
            proj += np.outer(v, v.conj())
        overlaps.append(float(np.linalg.norm(proj @ ket)))
    verdicts = {}
    for value in range(1, 8):
        label = f"psi{value}"
        verdict = ping_pong(label).verdict
        if verdict != label:
            raise AssertionError(f"verdict {verdict} for input {label}")
        verdicts[label] = value
    plus = np.kron(_I3, _proj(_plus(1, 2)))
    minus = np.kron(_I3, _proj(_plus(1, 2, -1)))
    psi8, psi9 = table.ket("psi8"), table.ket("psi9")
    resolved = (
        abs(float(np.real(psi8.conj() @ plus @ psi8)) - 1.0) < 1e-10
        and abs(float(np.real(psi9.conj() @ minus @ psi9)) - 1.0) < 1e-10
    )
    return EquivalenceReport(tuple(residuals), tuple(overlaps), verdicts, resolved)
