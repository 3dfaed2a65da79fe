"""Step-traced LOCC protocols and the concentration trade-off ledger.

Two explicit channel-sequence protocols are simulated on full density
matrices: turning a shared singlet into one locally usable bit, and
teleportation over a singlet. The many-copy concentration scheme is handled
at the outcome-ledger level (probabilities and Schmidt ranks), which is all
its information accounting depends on.

Classical-channel model: only subsystems already dephased in the agreed
basis may be transmitted, and the channel applies that dephasing again
(idempotent). Every send step records which subsystems crossed the channel
so the model can be audited after the fact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qmat import (
    BipartiteState,
    ComplexMatrix,
    PAULI_X,
    PAULI_Z,
    _dephase_array,
    basis_ket,
    binary_entropy,
    fidelity_pure,
    partial_trace,
    partial_trace_dims,
    schmidt_ket,
    shannon_entropy,
    singlet_ket,
    von_neumann_entropy,
)
from .report import Check

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)

# Pauli corrections for teleportation over the singlet pair, keyed by the
# two measurement bits (control qubit bit first).
SINGLET_CORRECTIONS = {
    0: np.array([[0, 1], [-1, 0]], dtype=complex),
    1: PAULI_Z,
    2: PAULI_X,
    3: np.eye(2, dtype=complex),
}


@dataclass(frozen=True)
class ProtocolStep:
    actor: str
    kind: str  # local_unitary | local_measurement | dephase | send_classical | send_dephased_qubit
    payload: dict
    state_after: ComplexMatrix
    entropy_delta_environment: float
    transmitted: tuple[int, ...] = ()


@dataclass(frozen=True)
class TraceDeltas:
    classical_bits_gained: float
    singlets_spent: int
    singlets_gained: int
    bits_dephased: float


@dataclass(frozen=True)
class ProtocolTrace:
    labels: tuple[str, ...]
    dims: tuple[int, ...]
    initial: ComplexMatrix
    steps: tuple[ProtocolStep, ...]
    final: ComplexMatrix
    deltas: TraceDeltas
    notes: dict


@dataclass(frozen=True)
class TraceValidation:
    max_channel_offdiag: float
    max_trace_drift: float
    max_hermiticity_defect: float
    min_eigenvalue: float
    ok: bool


def _cnot(n_qubits: int, control: int, target: int) -> np.ndarray:
    dim = 2**n_qubits
    mat = np.zeros((dim, dim), dtype=complex)
    for src in range(dim):
        bits = [(src >> (n_qubits - 1 - q)) & 1 for q in range(n_qubits)]
        if bits[control]:
            bits[target] ^= 1
        dst = 0
        for bit in bits:
            dst = (dst << 1) | bit
        mat[dst, src] = 1.0
    return mat


def _lift(op: np.ndarray, n_qubits: int, site: int) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for q in range(n_qubits):
        out = np.kron(out, op if q == site else np.eye(2, dtype=complex))
    return out


def _local_info(rho: np.ndarray, dims: tuple[int, ...], idx: int) -> float:
    red = partial_trace_dims(rho, dims, [idx])
    return math.log2(dims[idx]) - von_neumann_entropy(red)


def singlet_extraction() -> ProtocolTrace:
    """Convert a shared singlet into one bit of locally held information.

    Alice copies her singlet half onto a fresh ancilla, dephases the ancilla
    (one bit leaks to the environment there), ships the now-classical record
    to Bob who folds it into his qubit, then the record travels back and
    Alice resets it. Bob's qubit ends pure, Alice's maximally mixed, and the
    pair has gained exactly one locally extractable bit.
    """
    labels = ("alice", "bob", "ancilla")
    dims = (2, 2, 2)
    psi = np.kron(singlet_ket(), basis_ket(2, 0))
    rho = np.outer(psi, psi.conj())
    initial = ComplexMatrix(rho, dims)
    info_start = _local_info(rho, dims, 0) + _local_info(rho, dims, 1)

    steps: list[ProtocolStep] = []

    def record(actor, kind, payload, rho_after, env_delta, transmitted=()):
        steps.append(
            ProtocolStep(
                actor, kind, payload, ComplexMatrix(rho_after, dims), float(env_delta), tuple(transmitted)
            )
        )
        return rho_after

    copy_to_ancilla = _cnot(3, 0, 2)
    rho = record(
        "alice",
        "local_unitary",
        {"gate": "cnot", "control": "alice", "target": "ancilla"},
        copy_to_ancilla @ rho @ copy_to_ancilla.conj().T,
        0.0,
    )

    entropy_before = von_neumann_entropy(rho)
    dephased = _dephase_array(rho, dims, 2, None)
    rho = record(
        "alice",
        "dephase",
        {"subsystem": "ancilla", "basis": "computational"},
        dephased,
        von_neumann_entropy(dephased) - entropy_before,
    )

    through_channel = _dephase_array(rho, dims, 2, None)
    rho = record(
        "alice",
        "send_dephased_qubit",
        {"subsystem": "ancilla", "to": "bob"},
        through_channel,
        von_neumann_entropy(through_channel) - von_neumann_entropy(rho),
        transmitted=(2,),
    )

    write_to_bob = _cnot(3, 2, 1)
    rho = record(
        "bob",
        "local_unitary",
        {"gate": "cnot", "control": "ancilla", "target": "bob"},
        write_to_bob @ rho @ write_to_bob.conj().T,
        0.0,
    )

    back_channel = _dephase_array(rho, dims, 2, None)
    rho = record(
        "bob",
        "send_dephased_qubit",
        {"subsystem": "ancilla", "to": "alice"},
        back_channel,
        von_neumann_entropy(back_channel) - von_neumann_entropy(rho),
        transmitted=(2,),
    )

    reset = _cnot(3, 0, 2)
    rho = record(
        "alice",
        "local_unitary",
        {"gate": "cnot", "control": "alice", "target": "ancilla"},
        reset @ rho @ reset.conj().T,
        0.0,
    )

    info_end = _local_info(rho, dims, 0) + _local_info(rho, dims, 1)
    bob_final = partial_trace_dims(rho, dims, [1])
    bob_label = "1" if float(np.real(bob_final[1, 1])) > 0.5 else "0"
    ancilla_fidelity = fidelity_pure(basis_ket(2, 0), partial_trace_dims(rho, dims, [2]))
    deltas = TraceDeltas(
        classical_bits_gained=info_end - info_start,
        singlets_spent=1,
        singlets_gained=0,
        bits_dephased=math.fsum(s.entropy_delta_environment for s in steps),
    )
    notes = {
        "bob_final_state": bob_label,
        "ancilla_restored_fidelity": float(ancilla_fidelity),
    }
    return ProtocolTrace(labels, dims, initial, tuple(steps), ComplexMatrix(rho, dims), deltas, notes)


def teleport(psi) -> ProtocolTrace:
    """Teleport a single-qubit ket over a shared singlet.

    Alice entangles the payload with her singlet half, dephases both qubits
    (her measurement record), sends the two classical bits, and Bob applies
    the matching Pauli correction. Averaged over outcomes Bob holds the
    payload exactly while the two qubits left behind are maximally mixed.
    """
    vec = np.asarray(psi, dtype=complex).reshape(-1)
    if vec.size != 2:
        raise ValueError(f"single-qubit ket required, got length {vec.size}")
    if abs(np.linalg.norm(vec) - 1.0) > 1e-9:
        raise ValueError(f"ket not normalized: |psi| = {np.linalg.norm(vec):.12f}")

    labels = ("message", "alice", "bob")
    dims = (2, 2, 2)
    full = np.kron(vec, singlet_ket())
    rho = np.outer(full, full.conj())
    initial = ComplexMatrix(rho, dims)

    steps: list[ProtocolStep] = []

    def record(actor, kind, payload, rho_after, env_delta, transmitted=()):
        steps.append(
            ProtocolStep(
                actor, kind, payload, ComplexMatrix(rho_after, dims), float(env_delta), tuple(transmitted)
            )
        )
        return rho_after

    entangle = _cnot(3, 0, 1)
    rho = record(
        "alice",
        "local_unitary",
        {"gate": "cnot", "control": "message", "target": "alice"},
        entangle @ rho @ entangle.conj().T,
        0.0,
    )
    mix = _lift(HADAMARD, 3, 0)
    rho = record(
        "alice",
        "local_unitary",
        {"gate": "hadamard", "target": "message"},
        mix @ rho @ mix.conj().T,
        0.0,
    )
    for site, name in ((0, "message"), (1, "alice")):
        before = von_neumann_entropy(rho)
        dephased = _dephase_array(rho, dims, site, None)
        rho = record(
            "alice",
            "dephase",
            {"subsystem": name, "basis": "computational"},
            dephased,
            von_neumann_entropy(dephased) - before,
        )
    rho = record(
        "alice",
        "send_classical",
        {"bits": 2, "register": ["message", "alice"], "to": "bob"},
        _dephase_array(_dephase_array(rho, dims, 0, None), dims, 1, None),
        0.0,
        transmitted=(0, 1),
    )
    correction = np.zeros((8, 8), dtype=complex)
    for outcome, fix in SINGLET_CORRECTIONS.items():
        proj = np.zeros((4, 4), dtype=complex)
        proj[outcome, outcome] = 1.0
        correction += np.kron(proj, fix)
    rho = record(
        "bob",
        "local_unitary",
        {"gate": "pauli_correction", "conditioned_on": ["message", "alice"]},
        correction @ rho @ correction.conj().T,
        0.0,
    )

    bob_state = partial_trace_dims(rho, dims, [2])
    deltas = TraceDeltas(
        classical_bits_gained=0.0,
        singlets_spent=1,
        singlets_gained=0,
        bits_dephased=math.fsum(s.entropy_delta_environment for s in steps),
    )
    notes = {"output_fidelity": float(fidelity_pure(vec, bob_state))}
    return ProtocolTrace(labels, dims, initial, tuple(steps), ComplexMatrix(rho, dims), deltas, notes)


def validate_trace(trace: ProtocolTrace, tol: float = 1e-10) -> TraceValidation:
    """Audit a trace against the classical-channel model and state sanity.

    Any subsystem crossing the channel must already be dephased in the
    computational basis at the moment of sending; traces must be preserved
    and every intermediate state must stay a state.
    """
    worst_off = 0.0
    worst_trace = abs(float(np.real(np.trace(trace.initial.entries))) - 1.0)
    worst_herm = trace.initial.hermiticity_defect()
    min_eig = float(np.min(np.linalg.eigvalsh(trace.initial.entries)))
    prev = trace.initial.entries
    for step in trace.steps:
        if step.transmitted:
            dephased = prev
            for idx in step.transmitted:
                dephased = _dephase_array(dephased, trace.dims, idx, None)
            worst_off = max(worst_off, float(np.max(np.abs(prev - dephased))))
        cur = step.state_after.entries
        worst_trace = max(worst_trace, abs(float(np.real(np.trace(cur))) - 1.0))
        worst_herm = max(worst_herm, step.state_after.hermiticity_defect())
        min_eig = min(min_eig, float(np.min(np.linalg.eigvalsh(cur))))
        prev = cur
    ok = worst_off <= tol and worst_trace <= 1e-9 and worst_herm <= 1e-9 and min_eig >= -1e-9
    return TraceValidation(worst_off, worst_trace, worst_herm, min_eig, ok)


# ---------------------------------------------------------------------------
# concentration outcomes and the trade-off ledger

@dataclass(frozen=True)
class ConcentrationOutcome:
    k: int
    probability: float
    schmidt_rank: int  # binomial(n, k), exact
    log2_rank: float


def concentration_outcomes(n: int, a: float) -> list[ConcentrationOutcome]:
    """Outcome table for measuring n copies of sqrt(a2)|00> + sqrt(1-a2)|11>.

    Outcome k occurs with probability binom(n,k) a^2k (1-a^2)^(n-k) and
    leaves a maximally entangled state of Schmidt rank binom(n,k).
    Probabilities are computed in log space so n up to 10^4 stays finite.
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"need at least one copy, got n={n}")
    if not 0.0 < a < 1.0:
        raise ValueError(f"Schmidt coefficient must lie strictly in (0, 1), got {a}")
    a2 = a * a
    b2 = 1.0 - a2
    la2, lb2 = math.log2(a2), math.log2(b2)
    out: list[ConcentrationOutcome] = []
    comb = 1
    for k in range(n + 1):
        log2_rank = math.log2(comb)
        log2_p = log2_rank + k * la2 + (n - k) * lb2
        out.append(ConcentrationOutcome(k, 2.0**log2_p, comb, log2_rank))
        if k < n:
            comb = comb * (n - k) // (k + 1)
    return out


@dataclass(frozen=True)
class TradeoffLedger:
    """Information drawn by one choice of which outcomes bank singlets.

    Outcomes in ``k_quantum`` have their diluted entanglement concentrated
    (e_d) with the leftover qubits cashed in classically (i_c1); the rest are
    drained classically outright (i_c2). i_er is the erasure cost of keeping
    the outcome record, and i_total the net haul, which is independent of the
    partition.
    """

    n: int
    a2: float
    k_quantum: tuple[int, ...]
    k_classical: tuple[int, ...]
    e_d: float
    i_c1: float
    i_c2: float
    i_er: float
    i_total: float


def tradeoff_ledger(n: int, a: float, k_quantum) -> TradeoffLedger:
    outcomes = concentration_outcomes(n, a)
    chosen = sorted({int(k) for k in k_quantum})
    if chosen and (chosen[0] < 0 or chosen[-1] > n):
        raise ValueError(f"outcome indices {chosen} outside 0..{n}")
    quantum = set(chosen)
    two_n = 2.0 * n
    e_d = math.fsum(o.probability * o.log2_rank for o in outcomes if o.k in quantum)
    i_c1 = math.fsum(o.probability * (two_n - 2.0 * o.log2_rank) for o in outcomes if o.k in quantum)
    i_c2 = math.fsum(o.probability * (two_n - o.log2_rank) for o in outcomes if o.k not in quantum)
    i_er = shannon_entropy([o.probability for o in outcomes])
    i_total = math.fsum((e_d, i_c1, i_c2, -i_er))
    return TradeoffLedger(
        n=n,
        a2=a * a,
        k_quantum=tuple(chosen),
        k_classical=tuple(k for k in range(n + 1) if k not in quantum),
        e_d=e_d,
        i_c1=i_c1,
        i_c2=i_c2,
        i_er=i_er,
        i_total=i_total,
    )


def balance_closed_form(n: int, a: float) -> float:
    """Partition-independent value of the net haul: 2n - sum p log2 d - H(p)."""
    outcomes = concentration_outcomes(n, a)
    h = shannon_entropy([o.probability for o in outcomes])
    return 2.0 * n - math.fsum(o.probability * o.log2_rank for o in outcomes) - h


def balance_identity_residual(ledger: TradeoffLedger) -> float:
    return ledger.i_total - balance_closed_form(ledger.n, math.sqrt(ledger.a2))


def complementarity_margin(n: int, a2: float) -> float:
    """Slack in the quantum-plus-classical bound: sum p log2 d + H(p) - n*h(a2).

    Identically zero in exact arithmetic for this outcome family; only float
    noise survives, so the bound always holds.
    """
    outcomes = concentration_outcomes(n, math.sqrt(a2))
    h = shannon_entropy([o.probability for o in outcomes])
    return math.fsum(o.probability * o.log2_rank for o in outcomes) + h - n * binary_entropy(a2)


@dataclass(frozen=True)
class AsymptoticRate:
    rate: float  # net information per pair
    gap: float  # distance from the per-pair optimum 2 - S_A


def asymptotic_rate(n: int, a: float) -> AsymptoticRate:
    total = balance_closed_form(n, a)
    rate = total / n
    return AsymptoticRate(rate, abs(rate - (2.0 - binary_entropy(a * a))))


def fit_gap_constant(ns, a: float) -> float:
    """Smallest C such that gap <= C*log2(n)/n over the sampled sizes."""
    worst = 0.0
    for n in ns:
        if n < 2:
            continue
        worst = max(worst, asymptotic_rate(n, a).gap * n / math.log2(n))
    return worst


@dataclass(frozen=True)
class PartitionSweep:
    """Vectorized trade-off ledgers for many partitions at one (n, a2)."""

    n: int
    a2: float
    members: np.ndarray  # bool (partitions, n+1); True = outcome banks singlets
    e_d: np.ndarray
    i_c1: np.ndarray
    i_c2: np.ndarray
    i_er: float
    i_total: np.ndarray
    residuals: np.ndarray  # identity residual per partition
    margin: float  # complementarity margin (partition independent)

    def masks(self) -> list[int]:
        out = []
        for row in self.members:
            mask = 0
            for k, flag in enumerate(row):
                if flag:
                    mask |= 1 << k
            out.append(mask)
        return out


def partition_sweep(
    n: int,
    a2: float,
    members: np.ndarray | None = None,
    rng: np.random.Generator | None = None,
    samples: int = 100,
) -> PartitionSweep:
    """Evaluate the trade-off ledger over many partitions at once.

    With ``members`` omitted, all 2^(n+1) partitions are enumerated for
    n <= 12; larger n draws ``samples`` random partitions from ``rng``.
    """
    outcomes = concentration_outcomes(n, math.sqrt(a2))
    p = np.array([o.probability for o in outcomes])
    log2d = np.array([o.log2_rank for o in outcomes])
    if members is None:
        if n <= 12:
            idx = np.arange(2 ** (n + 1), dtype=np.int64)
            members = ((idx[:, None] >> np.arange(n + 1)) & 1).astype(bool)
        else:
            if rng is None:
                raise ValueError("rng required to sample partitions for n > 12")
            members = rng.random((samples, n + 1)) < 0.5
    members = np.asarray(members, dtype=bool)
    h = shannon_entropy(p)
    two_n = 2.0 * n
    weight_ed = p * log2d
    weight_c1 = p * (two_n - 2.0 * log2d)
    weight_c2 = p * (two_n - log2d)
    e_d = members @ weight_ed
    i_c1 = members @ weight_c1
    i_c2 = (~members) @ weight_c2
    i_total = e_d + i_c1 + i_c2 - h
    closed = two_n - float(np.sum(weight_ed)) - h
    residuals = i_total - closed
    margin = complementarity_margin(n, a2)
    return PartitionSweep(n, a2, members, e_d, i_c1, i_c2, h, i_total, residuals, margin)


# ---------------------------------------------------------------------------
# complementarity checks

@dataclass(frozen=True)
class ComplementarityReport:
    copies: int
    reduction_entropy: float
    process_quantum: float
    process_classical: float
    checks: tuple[Check, ...]

    def margin(self, name: str) -> float:
        for check in self.checks:
            if check.name == name:
                return check.margin
        raise KeyError(name)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def complementarity_check(
    state: BipartiteState,
    process_quantum: float,
    process_classical: float,
    copies: int = 1,
    tolerance: float = 1e-9,
) -> ComplementarityReport:
    """Verify the complementarity bounds for one process on a pure state.

    ``process_quantum`` and ``process_classical`` are the bits of quantum and
    classical information the process draws in total from ``copies`` copies.
    The bounds checked: the two together cannot beat the best purely
    classical haul; net of purely local information they cannot beat the
    classical deficit, nor log2 of the smaller local dimension per copy; and
    the equivalent entropic forms, including the pure-state form whose right
    side is twice the distillable entanglement.
    """
    if not state.is_pure:
        raise ValueError("pure state required")
    s_a = von_neumann_entropy(partial_trace(state, "A"))
    n_per = state.n_qubits
    d_min = min(state.dim_a, state.dim_b)
    n_tot = copies * n_per
    classical_opt = copies * (n_per - s_a)
    local_only = copies * (n_per - 2.0 * s_a)
    deficit = classical_opt - local_only
    formation = copies * s_a
    distillable = copies * s_a
    drawn = process_quantum + process_classical
    from_correlations = process_classical - local_only
    entropic_lhs = (n_tot - process_classical) + (formation - process_quantum)
    checks = (
        Check.from_margin("tradeoff_bound", classical_opt - drawn, tolerance),
        Check.from_margin("correlation_bound", deficit - (process_quantum + from_correlations), tolerance),
        Check.from_margin(
            "dimension_bound",
            copies * math.log2(d_min) - (process_quantum + from_correlations),
            tolerance,
        ),
        Check.from_margin(
            "entropic_bound", entropic_lhs - (n_tot + formation - classical_opt), tolerance
        ),
        Check.from_margin("pure_entropic_bound", entropic_lhs - 2.0 * distillable, tolerance),
    )
    return ComplementarityReport(copies, s_a, process_quantum, process_classical, checks)


def complementarity_check_ledger(ledger: TradeoffLedger, tolerance: float = 1e-9) -> ComplementarityReport:
    """Complementarity bounds for a concentration trade-off ledger.

    The process classical share is the drawn bits net of the erasure cost.
    """
    state = BipartiteState.from_ket(schmidt_ket(ledger.a2))
    return complementarity_check(
        state,
        process_quantum=ledger.e_d,
        process_classical=ledger.i_c1 + ledger.i_c2 - ledger.i_er,
        copies=ledger.n,
        tolerance=tolerance,
    )
