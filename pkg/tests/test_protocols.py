import math

import numpy as np
import pytest

from locc_lab.protocols import (
    ComplexMatrix,
    ProtocolStep,
    ProtocolTrace,
    TraceDeltas,
    asymptotic_rate,
    balance_closed_form,
    balance_identity_residual,
    complementarity_check,
    complementarity_check_ledger,
    complementarity_margin,
    concentration_outcomes,
    fit_gap_constant,
    partition_sweep,
    singlet_extraction,
    teleport,
    tradeoff_ledger,
    validate_trace,
)
from locc_lab.ledger import ledger
from locc_lab.qmat import (
    BipartiteState,
    basis_ket,
    binary_entropy,
    haar_ket,
    partial_trace_dims,
    shannon_entropy,
    singlet_ket,
    von_neumann_entropy,
)


class TestSingletExtraction:
    def test_one_bit_gained(self):
        trace = singlet_extraction()
        assert abs(trace.deltas.classical_bits_gained - 1.0) < 1e-9

    def test_dephasing_step_leaks_one_bit(self):
        trace = singlet_extraction()
        deltas = [s.entropy_delta_environment for s in trace.steps if s.kind == "dephase"]
        assert len(deltas) == 1
        assert abs(deltas[0] - 1.0) < 1e-9
        assert abs(trace.deltas.bits_dephased - 1.0) < 1e-9

    def test_final_states(self):
        trace = singlet_extraction()
        final = trace.final.entries
        alice = partial_trace_dims(final, trace.dims, [0])
        bob = partial_trace_dims(final, trace.dims, [1])
        ancilla = partial_trace_dims(final, trace.dims, [2])
        np.testing.assert_allclose(alice, np.eye(2) / 2, atol=1e-9)
        assert float(np.real(np.trace(bob @ bob))) > 1.0 - 1e-9
        np.testing.assert_allclose(ancilla, np.diag([1.0, 0.0]), atol=1e-9)
        assert abs(trace.notes["ancilla_restored_fidelity"] - 1.0) < 1e-9

    def test_singlet_spent_recorded(self):
        deltas = singlet_extraction().deltas
        assert deltas.singlets_spent == 1
        assert deltas.singlets_gained == 0

    def test_deterministic_and_bit_identical(self):
        first = singlet_extraction()
        second = singlet_extraction()
        assert len(first.steps) == len(second.steps)
        for a, b in zip(first.steps, second.steps):
            assert a.kind == b.kind and a.actor == b.actor and a.payload == b.payload
            assert np.array_equal(a.state_after.entries, b.state_after.entries)

    def test_channel_model_respected(self):
        audit = validate_trace(singlet_extraction())
        assert audit.ok
        assert audit.max_channel_offdiag <= 1e-10


class TestTeleport:
    def test_basis_state(self):
        trace = teleport(basis_ket(2, 0))
        assert abs(trace.notes["output_fidelity"] - 1.0) < 1e-9
        residual = partial_trace_dims(trace.final.entries, trace.dims, [0, 1])
        np.testing.assert_allclose(residual, np.eye(4) / 4, atol=1e-9)

    def test_phase_state(self):
        ket = (basis_ket(2, 0) + 1j * basis_ket(2, 1)) / math.sqrt(2)
        trace = teleport(ket)
        assert abs(trace.notes["output_fidelity"] - 1.0) < 1e-9

    def test_residual_has_no_information(self):
        trace = teleport(basis_ket(2, 1))
        residual = partial_trace_dims(trace.final.entries, trace.dims, [0, 1])
        led = ledger(BipartiteState.from_density(residual, (2, 2)))
        assert abs(led.total) < 1e-9

    def test_two_classical_bits_logged(self):
        trace = teleport(basis_ket(2, 0))
        sends = [s for s in trace.steps if s.kind == "send_classical"]
        assert len(sends) == 1
        assert sends[0].payload["bits"] == 2
        assert abs(trace.deltas.bits_dephased - 2.0) < 1e-9

    def test_haar_random_inputs(self):
        rng = np.random.default_rng(61)
        for _ in range(25):
            trace = teleport(haar_ket(2, rng))
            assert trace.notes["output_fidelity"] > 1.0 - 1e-9
            residual = partial_trace_dims(trace.final.entries, trace.dims, [0, 1])
            assert float(np.max(np.abs(residual - np.eye(4) / 4))) < 1e-9
            assert validate_trace(trace).ok

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            teleport(np.array([1.0, 1.0]))

    def test_rejects_wrong_size(self):
        with pytest.raises(ValueError):
            teleport(np.array([1.0, 0.0, 0.0, 0.0]))


class TestValidateTrace:
    def test_flags_coherent_transmission(self):
        # a fake trace that ships half a singlet while it is still coherent
        rho = np.outer(singlet_ket(), singlet_ket().conj())
        state = ComplexMatrix(rho, (2, 2))
        step = ProtocolStep("alice", "send_dephased_qubit", {}, state, 0.0, transmitted=(0,))
        trace = ProtocolTrace(
            ("alice", "bob"),
            (2, 2),
            state,
            (step,),
            state,
            TraceDeltas(0.0, 0, 0, 0.0),
            {},
        )
        audit = validate_trace(trace)
        assert not audit.ok
        assert audit.max_channel_offdiag > 0.4


class TestConcentrationOutcomes:
    def test_two_copies_balanced(self):
        outs = concentration_outcomes(2, math.sqrt(0.5))
        assert [o.schmidt_rank for o in outs] == [1, 2, 1]
        np.testing.assert_allclose([o.probability for o in outs], [0.25, 0.5, 0.25], atol=1e-12)

    def test_single_copy(self):
        a2 = 0.3
        outs = concentration_outcomes(1, math.sqrt(a2))
        assert [o.schmidt_rank for o in outs] == [1, 1]
        np.testing.assert_allclose([o.probability for o in outs], [1 - a2, a2], atol=1e-12)

    def test_matches_direct_formula(self):
        # oracle: plain float powers and exact binomials, no log-space
        a2 = 0.37
        n = 40
        outs = concentration_outcomes(n, math.sqrt(a2))
        for o in outs:
            direct = math.comb(n, o.k) * a2**o.k * (1 - a2) ** (n - o.k)
            assert abs(o.probability - direct) < 1e-12
            assert o.schmidt_rank == math.comb(n, o.k)

    def test_normalization_large_n(self):
        outs = concentration_outcomes(200, math.sqrt(0.3))
        assert abs(math.fsum(o.probability for o in outs) - 1.0) < 1e-9

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            concentration_outcomes(0, 0.5)
        with pytest.raises(ValueError):
            concentration_outcomes(3, 1.0)
        with pytest.raises(ValueError):
            concentration_outcomes(3, 0.0)


class TestTradeoffLedger:
    def test_hand_worked_example(self):
        led = tradeoff_ledger(2, math.sqrt(0.5), [1])
        assert abs(led.e_d - 0.5) < 1e-12
        assert abs(led.i_c1 - 1.0) < 1e-12
        assert abs(led.i_c2 - 2.0) < 1e-12
        assert abs(led.i_er - 1.5) < 1e-12
        assert abs(led.i_total - 2.0) < 1e-12

    def test_empty_quantum_set(self):
        led = tradeoff_ledger(2, math.sqrt(0.5), [])
        assert led.e_d == 0.0
        assert led.i_c1 == 0.0
        assert abs(led.i_total - 2.0) < 1e-12

    def test_total_equals_per_copy_optimum_at_half(self):
        # S_A = 1 at a2 = 1/2, so the net haul is n * (2 - 1) = n exactly
        for n in (1, 2, 5, 9):
            led = tradeoff_ledger(n, math.sqrt(0.5), list(range(0, n + 1, 2)))
            assert abs(led.i_total - n) < 1e-9

    def test_identity_for_every_partition(self):
        n = 4
        a = math.sqrt(0.3)
        for mask in range(2 ** (n + 1)):
            chosen = [k for k in range(n + 1) if mask >> k & 1]
            led = tradeoff_ledger(n, a, chosen)
            assert abs(balance_identity_residual(led)) < 1e-9

    def test_brute_force_oracle(self):
        # oracle: accumulate the three draws outcome by outcome with plain floats
        n, a2 = 6, 0.42
        chosen = {0, 2, 3, 6}
        e_d = i_c1 = i_c2 = 0.0
        probs = []
        for k in range(n + 1):
            d = math.comb(n, k)
            p = d * a2**k * (1 - a2) ** (n - k)
            probs.append(p)
            if k in chosen:
                e_d += p * math.log2(d)
                i_c1 += p * (2 * n - 2 * math.log2(d))
            else:
                i_c2 += p * (2 * n - math.log2(d))
        i_er = shannon_entropy(probs)
        led = tradeoff_ledger(n, math.sqrt(a2), sorted(chosen))
        assert abs(led.e_d - e_d) < 1e-10
        assert abs(led.i_c1 - i_c1) < 1e-10
        assert abs(led.i_c2 - i_c2) < 1e-10
        assert abs(led.i_er - i_er) < 1e-10
        assert abs(led.i_total - (e_d + i_c1 + i_c2 - i_er)) < 1e-10

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            tradeoff_ledger(3, 0.5, [4])


class TestAsymptotics:
    def test_exact_at_balanced_weight(self):
        for n in (1, 5, 20, 200):
            assert asymptotic_rate(n, math.sqrt(0.5)).gap < 1e-12

    def test_gap_is_float_noise_everywhere(self):
        # the outcome family satisfies the balance identity exactly, so the
        # nominal log(n)/n allowance is never actually used
        for a2 in (0.1, 0.3, 0.5, 0.7):
            for n in (20, 200):
                assert asymptotic_rate(n, math.sqrt(a2)).gap < 1e-9

    def test_single_copy_rate(self):
        a2 = 0.3
        rate = asymptotic_rate(1, math.sqrt(a2)).rate
        assert abs(rate - (2.0 - shannon_entropy([1 - a2, a2]))) < 1e-12

    def test_fitted_constant_tiny(self):
        assert fit_gap_constant((20, 50, 100, 200), math.sqrt(0.3)) < 1e-9


class TestPartitionSweep:
    def test_exhaustive_matches_scalar_ledger(self):
        n, a2 = 5, 0.3
        sweep = partition_sweep(n, a2)
        assert sweep.members.shape == (2 ** (n + 1), n + 1)
        masks = sweep.masks()
        for idx in (0, 7, 21, 63):
            chosen = [k for k in range(n + 1) if masks[idx] >> k & 1]
            led = tradeoff_ledger(n, math.sqrt(a2), chosen)
            assert abs(sweep.e_d[idx] - led.e_d) < 1e-10
            assert abs(sweep.i_total[idx] - led.i_total) < 1e-10

    def test_identity_residuals_tiny(self):
        for n in (1, 6, 12):
            for a2 in (0.1, 0.5, 0.9):
                sweep = partition_sweep(n, a2)
                assert float(np.max(np.abs(sweep.residuals))) < 1e-9

    def test_random_partitions_large_n(self):
        rng = np.random.default_rng(67)
        sweep = partition_sweep(200, 0.3, rng=rng, samples=100)
        assert sweep.members.shape == (100, 201)
        assert float(np.max(np.abs(sweep.residuals))) < 1e-9
        assert sweep.margin > -1e-9

    def test_rng_required_for_large_n(self):
        with pytest.raises(ValueError):
            partition_sweep(50, 0.3)


class TestComplementarity:
    def test_margin_equals_identity_slack(self):
        n, a2 = 7, 0.4
        margin = complementarity_margin(n, a2)
        optimum = n * (2.0 - binary_entropy(a2))
        assert abs(margin - (optimum - balance_closed_form(n, math.sqrt(a2)))) < 1e-9

    def test_singlet_teleport_choice_saturates(self):
        state = BipartiteState.from_ket(singlet_ket())
        report = complementarity_check(state, process_quantum=1.0, process_classical=0.0)
        assert report.all_passed
        assert abs(report.margin("dimension_bound")) < 1e-9
        assert abs(report.margin("tradeoff_bound")) < 1e-9

    def test_singlet_extraction_choice_saturates(self):
        state = BipartiteState.from_ket(singlet_ket())
        report = complementarity_check(state, process_quantum=0.0, process_classical=1.0)
        assert report.all_passed
        assert abs(report.margin("tradeoff_bound")) < 1e-9

    def test_entropic_forms_share_the_margin(self):
        state = BipartiteState.from_ket(singlet_ket())
        report = complementarity_check(state, 0.25, 0.5)
        base = report.margin("tradeoff_bound")
        assert abs(report.margin("entropic_bound") - base) < 1e-12
        assert abs(report.margin("pure_entropic_bound") - base) < 1e-12

    def test_ledger_checks_hold_over_grid(self):
        for n in (1, 3, 8):
            for a2 in (0.2, 0.5, 0.8):
                led = tradeoff_ledger(n, math.sqrt(a2), list(range(0, n + 1, 2)))
                report = complementarity_check_ledger(led)
                assert report.all_passed, [c for c in report.checks if not c.passed]

    def test_rejects_mixed_state(self):
        from locc_lab.qmat import maximally_mixed

        with pytest.raises(ValueError):
            complementarity_check(maximally_mixed((2, 2)), 0.0, 0.0)

    def test_overdrawn_process_fails(self):
        state = BipartiteState.from_ket(singlet_ket())
        report = complementarity_check(state, process_quantum=1.0, process_classical=1.0)
        assert not report.all_passed
        assert report.margin("tradeoff_bound") < -0.5
