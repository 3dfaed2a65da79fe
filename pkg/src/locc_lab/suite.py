"""One-shot verification suite covering every headline claim of the library.

Each block mirrors one acceptance criterion at its stated tolerance and
produces named checks; the CLI ``suite`` subcommand renders the result as a
deterministic report. Equality checks use margin = -|deviation| so that a
check passes exactly when the deviation is within tolerance.
"""

from __future__ import annotations

import math

import numpy as np

from . import commutators, protocols, sausage
from .ledger import ledger
from .qmat import (
    BipartiteState,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    haar_ket,
    partial_trace_dims,
    singlet_ket,
)
from .report import Check

A2_GRID = tuple(k / 10 for k in range(1, 10))
LARGE_N = (50, 100, 150, 200)
ASYMPTOTIC_N = (20, 50, 100, 200)
ASYMPTOTIC_A2 = (0.1, 0.3, 0.5)
ALPHA_GRID = (0.25, 0.5, 1.0, 2.0, 4.0)


def singlet_ledger_block() -> tuple[dict, list[Check]]:
    led = ledger(BipartiteState.from_ket(singlet_ket()))
    checks = [
        Check.from_margin("singlet_ledger_total", -abs(led.total - 2.0), 1e-9),
        Check.from_margin("singlet_ledger_local_a", -abs(led.local_a), 1e-9),
        Check.from_margin("singlet_ledger_local_b", -abs(led.local_b), 1e-9),
        Check.from_margin("singlet_ledger_mutual", -abs(led.mutual - 2.0), 1e-9),
    ]
    results = {
        "total": led.total,
        "local_a": led.local_a,
        "local_b": led.local_b,
        "mutual": led.mutual,
    }
    return results, checks


def extraction_block() -> tuple[dict, list[Check]]:
    trace = protocols.singlet_extraction()
    final = trace.final.entries
    alice = partial_trace_dims(final, trace.dims, [0])
    bob = partial_trace_dims(final, trace.dims, [1])
    alice_dev = float(np.max(np.abs(alice - np.eye(2) / 2)))
    bob_purity = float(np.real(np.trace(bob @ bob)))
    env_bits = max(
        (s.entropy_delta_environment for s in trace.steps if s.kind == "dephase"), default=0.0
    )
    audit = protocols.validate_trace(trace)
    checks = [
        Check.from_margin(
            "extraction_bits_gained", -abs(trace.deltas.classical_bits_gained - 1.0), 1e-9
        ),
        Check.from_margin("extraction_environment_bit", -abs(env_bits - 1.0), 1e-9),
        Check.from_margin("extraction_alice_mixed", -alice_dev, 1e-9),
        Check.from_margin("extraction_bob_pure", -(1.0 - bob_purity), 1e-9),
        Check.from_margin(
            "extraction_ancilla_reset", -abs(trace.notes["ancilla_restored_fidelity"] - 1.0), 1e-9
        ),
        Check.from_margin("extraction_channel_model", -audit.max_channel_offdiag, 1e-10),
    ]
    results = {
        "bits_gained": trace.deltas.classical_bits_gained,
        "environment_bits": env_bits,
        "bob_final_state": trace.notes["bob_final_state"],
        "ancilla_restored_fidelity": trace.notes["ancilla_restored_fidelity"],
    }
    return results, checks


def teleport_block(rng: np.random.Generator, trials: int = 100) -> tuple[dict, list[Check]]:
    worst_fidelity = 1.0
    worst_residual = 0.0
    worst_ledger = 0.0
    worst_channel = 0.0
    for _ in range(trials):
        trace = protocols.teleport(haar_ket(2, rng))
        worst_fidelity = min(worst_fidelity, trace.notes["output_fidelity"])
        residual = partial_trace_dims(trace.final.entries, trace.dims, [0, 1])
        worst_residual = max(worst_residual, float(np.max(np.abs(residual - np.eye(4) / 4))))
        led = ledger(BipartiteState.from_density(residual, (2, 2)))
        worst_ledger = max(worst_ledger, abs(led.total))
        worst_channel = max(worst_channel, protocols.validate_trace(trace).max_channel_offdiag)
    checks = [
        Check.from_margin("teleport_fidelity", worst_fidelity - 1.0, 1e-9),
        Check.from_margin("teleport_residual_identity", -worst_residual, 1e-9),
        Check.from_margin("teleport_residual_ledger", -worst_ledger, 1e-9),
        Check.from_margin("teleport_channel_model", -worst_channel, 1e-10),
    ]
    results = {
        "trials": trials,
        "min_fidelity": worst_fidelity,
        "max_residual_deviation": worst_residual,
        "max_residual_information": worst_ledger,
    }
    return results, checks


def balance_block(rng: np.random.Generator) -> tuple[dict, list[Check]]:
    worst_exhaustive = 0.0
    min_margin = math.inf
    for n in range(1, 13):
        for a2 in A2_GRID:
            sweep = protocols.partition_sweep(n, a2)
            worst_exhaustive = max(worst_exhaustive, float(np.max(np.abs(sweep.residuals))))
            min_margin = min(min_margin, sweep.margin)
    worst_random = 0.0
    for n in LARGE_N:
        for a2 in A2_GRID:
            sweep = protocols.partition_sweep(n, a2, rng=rng, samples=100)
            worst_random = max(worst_random, float(np.max(np.abs(sweep.residuals))))
            min_margin = min(min_margin, sweep.margin)
    checks = [
        Check.from_margin("balance_identity_exhaustive", -worst_exhaustive, 1e-9),
        Check.from_margin("balance_identity_random", -worst_random, 1e-9),
    ]
    results = {
        "max_residual_exhaustive": worst_exhaustive,
        "max_residual_random": worst_random,
        "min_complementarity_margin": min_margin,
    }
    return results, checks, min_margin


def complementarity_block(min_margin: float) -> tuple[dict, list[Check]]:
    singlet = BipartiteState.from_ket(singlet_ket())
    teleport_choice = protocols.complementarity_check(singlet, 1.0, 0.0)
    extraction_choice = protocols.complementarity_check(singlet, 0.0, 1.0)
    teleport_sum = teleport_choice.process_quantum + (
        teleport_choice.process_classical - 0.0
    )  # i_lo of the singlet is 0
    entropic_dev = max(
        abs(teleport_choice.margin("entropic_bound") - teleport_choice.margin("tradeoff_bound")),
        abs(teleport_choice.margin("pure_entropic_bound") - teleport_choice.margin("tradeoff_bound")),
        abs(extraction_choice.margin("entropic_bound") - extraction_choice.margin("tradeoff_bound")),
        abs(
            extraction_choice.margin("pure_entropic_bound")
            - extraction_choice.margin("tradeoff_bound")
        ),
    )
    checks = [
        Check.from_margin("complementarity_margin_sweep", min_margin, 1e-9),
        Check.from_margin(
            "complementarity_singlet_teleport_saturation",
            -abs(teleport_choice.margin("dimension_bound")),
            1e-9,
        ),
        Check.from_margin(
            "complementarity_singlet_extraction_saturation",
            -abs(extraction_choice.margin("tradeoff_bound")),
            1e-9,
        ),
        Check.from_margin("complementarity_entropic_forms", -entropic_dev, 1e-9),
    ]
    results = {
        "sweep_min_margin": min_margin,
        "teleport_choice_sum": teleport_sum,
        "extraction_choice_sum": extraction_choice.process_quantum
        + extraction_choice.process_classical,
    }
    return results, checks


def asymptotics_block() -> tuple[dict, list[Check]]:
    min_slack = math.inf
    worst_at_half = 0.0
    fitted = 0.0
    for a2 in ASYMPTOTIC_A2:
        a = math.sqrt(a2)
        for n in ASYMPTOTIC_N:
            rate = protocols.asymptotic_rate(n, a)
            bound = 2.0 * math.log2(n) / n
            min_slack = min(min_slack, bound - rate.gap)
            fitted = max(fitted, rate.gap * n / math.log2(n))
            if a2 == 0.5:
                worst_at_half = max(worst_at_half, rate.gap)
    checks = [
        Check.from_margin("asymptotic_gap_bound", min_slack, 1e-12),
        Check.from_margin("asymptotic_gap_exact_at_half", -worst_at_half, 1e-9),
    ]
    results = {
        "min_bound_slack": min_slack,
        "max_gap_at_half": worst_at_half,
        "fitted_gap_constant": fitted,
    }
    return results, checks


def commutator_block() -> tuple[dict, list[Check]]:
    parity, phase = commutators.parity_phase_pair()
    global_norm = commutators.commutator(phase, parity).frobenius_norm
    worst_expansion = 0.0
    for alpha in ALPHA_GRID:
        phase_impl = commutators.locc_implementation("phase", alpha)
        parity_impl = commutators.locc_implementation("parity", alpha)
        report = commutators.commutator(phase_impl, parity_impl)
        expected = -2j * (np.kron(PAULI_Y, np.eye(2)) + alpha * alpha * np.kron(np.eye(2), PAULI_Y))
        worst_expansion = max(
            worst_expansion, float(np.max(np.abs(report.matrix.entries - expected)))
        )
    probe = np.zeros(4, dtype=complex)
    probe[0] = 1.0
    unit = commutators.commutator(
        commutators.locc_implementation("phase", 1.0),
        commutators.locc_implementation("parity", 1.0),
        probe=probe,
    )
    entropy = unit.entangling.entanglement_entropy
    checks = [
        Check.from_margin("parity_phase_global_commute", -global_norm, 1e-14),
        Check.from_margin("locc_commutator_expansion", -worst_expansion, 1e-12),
        Check.from_margin("entangling_action_maximal", -abs(entropy - 1.0), 1e-9),
    ]
    results = {
        "global_commutator_norm": global_norm,
        "max_expansion_deviation": worst_expansion,
        "entangling_entropy_alpha_1": entropy,
    }
    return results, checks


def kron_proposition_block(rng: np.random.Generator, seed: int) -> tuple[dict, list[Check]]:
    worst_roundtrip = 0.0
    for i in range(1000):
        d = 2 if i % 2 == 0 else 3
        x = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        y = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        product = np.kron(x, y)
        factor = commutators.kron_factorize(product, (d, d))
        worst_roundtrip = max(
            worst_roundtrip, float(np.max(np.abs(factor.reconstruct() - product)))
        )
    search = commutators.proposition1_search(10_000, 1_000, seed)
    checks = [
        Check.from_margin("kron_roundtrip", -worst_roundtrip, 1e-10),
        Check.from_margin("proposition_no_false_commuters", -float(search.false_commuters), 0.0),
        Check.from_margin(
            "proposition_dressed_certified",
            float(search.dressed_certified - search.dressed_samples),
            0.0,
        ),
        Check.from_margin("proposition_generic_norm", search.generic_min_norm - 1e-6, 0.0),
    ]
    results = {
        "max_roundtrip_error": worst_roundtrip,
        "false_commuters": search.false_commuters,
        "dressed_certified": search.dressed_certified,
        "generic_min_norm": search.generic_min_norm,
    }
    return results, checks


def sausage_block(seed: int) -> tuple[dict, list[Check]]:
    table = sausage.build_nine_states()
    gram_dev = float(np.max(np.abs(table.gram() - np.eye(9))))
    ops = sausage.build_operators()
    global_norm = commutators.commutator(ops.o1, ops.o2).frobenius_norm
    locc_report = commutators.commutator(ops.o1_locc, ops.o2_locc)
    expected = 2j * np.kron(sausage.PROJECTOR_2, sausage.BOB_SIGMA_Y)
    form_dev = float(np.max(np.abs(locc_report.matrix.entries - expected)))
    verdict_fail = 0
    deterministic_fail = 0
    for label in sausage.modified_basis():
        first = sausage.ping_pong(label)
        again = sausage.ping_pong(label)
        if first.verdict != label:
            verdict_fail += 1
        if first != again:
            deterministic_fail += 1
    separability = sausage.product_commutator_separability(trials=1000, seed=seed)
    checks = [
        Check.from_margin("sausage_gram", -gram_dev, 1e-12),
        Check.from_margin("sausage_global_commute", -global_norm, 1e-12),
        Check.from_margin("sausage_locc_commutator_form", -form_dev, 1e-12),
        Check.from_margin(
            "sausage_pingpong", -float(verdict_fail + deterministic_fail), 0.0
        ),
        Check.from_margin("sausage_negativity", -separability.max_negativity, 1e-10),
    ]
    results = {
        "gram_deviation": gram_dev,
        "global_commutator_norm": global_norm,
        "locc_commutator_deviation": form_dev,
        "pingpong_failures": verdict_fail,
        "max_negativity": separability.max_negativity,
        "zero_outputs": separability.zero_outputs,
    }
    return results, checks


def run_suite(seed: int) -> tuple[dict, list[Check]]:
    """Run every verification block; deterministic for a fixed seed."""
    rng = np.random.default_rng(seed)
    results: dict = {}
    checks: list[Check] = []

    block, block_checks = singlet_ledger_block()
    results["singlet_ledger"] = block
    checks.extend(block_checks)

    block, block_checks = extraction_block()
    results["singlet_extraction"] = block
    checks.extend(block_checks)

    block, block_checks = teleport_block(rng)
    results["teleportation"] = block
    checks.extend(block_checks)

    block, block_checks, min_margin = balance_block(rng)
    results["balance_identity"] = block
    checks.extend(block_checks)

    block, block_checks = complementarity_block(min_margin)
    results["complementarity"] = block
    checks.extend(block_checks)

    block, block_checks = asymptotics_block()
    results["asymptotics"] = block
    checks.extend(block_checks)

    block, block_checks = commutator_block()
    results["commutators"] = block
    checks.extend(block_checks)

    block, block_checks = kron_proposition_block(rng, seed)
    results["kron_proposition"] = block
    checks.extend(block_checks)

    block, block_checks = sausage_block(seed)
    results["sausage"] = block
    checks.extend(block_checks)

    return results, checks
