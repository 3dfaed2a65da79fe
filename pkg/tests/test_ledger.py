import math

import numpy as np
import pytest
from conftest import random_density

from locc_lab.ledger import (
    Interval,
    classical_bound_check,
    ledger,
    mixed_state_bounds,
    pure_state_quantities,
)
from locc_lab.qmat import (
    BipartiteState,
    basis_ket,
    haar_ket,
    maximally_mixed,
    partial_trace_dims,
    schmidt_ket,
    singlet_ket,
    von_neumann_entropy,
)

H_QUARTER = 0.8112781244591328  # binary entropy of 1/4


def random_mixed_state(rng, env_dim=4):
    """Random two-qubit mixed state from a purification."""
    ket = haar_ket(4 * env_dim, rng)
    rho = partial_trace_dims(np.outer(ket, ket.conj()), (2, 2, env_dim), [0, 1])
    return BipartiteState.from_density(rho, (2, 2))


class TestLedger:
    def test_singlet(self):
        led = ledger(BipartiteState.from_ket(singlet_ket()))
        assert abs(led.total - 2.0) < 1e-9
        assert abs(led.local_a) < 1e-9
        assert abs(led.local_b) < 1e-9
        assert abs(led.mutual - 2.0) < 1e-9
        assert abs(led.classical - 1.0) < 1e-9
        assert abs(led.quantum_deficit - 1.0) < 1e-9
        assert abs(led.classical_deficit - 1.0) < 1e-9

    def test_product_pure(self):
        ket = np.kron(basis_ket(2, 0), basis_ket(2, 0))
        led = ledger(BipartiteState.from_ket(ket))
        assert abs(led.total - 2.0) < 1e-9
        assert abs(led.local_a - 1.0) < 1e-9
        assert abs(led.local_b - 1.0) < 1e-9
        assert abs(led.mutual) < 1e-9

    def test_maximally_mixed(self):
        led = ledger(maximally_mixed((2, 2)))
        for value in (led.total, led.local_a, led.local_b, led.mutual, led.local_only):
            assert abs(value) < 1e-9
        assert isinstance(led.classical, Interval)
        assert led.classical.contains(0.0)

    def test_decomposition_identity_random_mixed(self):
        rng = np.random.default_rng(41)
        for _ in range(1000):
            led = ledger(random_mixed_state(rng))
            assert abs(led.total - (led.local_a + led.local_b + led.mutual)) < 1e-9
            assert -1e-9 <= led.mutual <= 2.0 + 1e-9

    def test_pure_state_deficit_split(self):
        rng = np.random.default_rng(43)
        for _ in range(200):
            state = BipartiteState.from_ket(haar_ket(4, rng))
            led = ledger(state)
            s_a = von_neumann_entropy(
                partial_trace_dims(state.matrix.entries, (2, 2), [0])
            )
            assert abs(led.quantum_deficit + led.classical_deficit - led.mutual) < 1e-9
            assert abs(led.quantum_deficit - s_a) < 1e-9


class TestPureStateQuantities:
    def test_singlet_values(self):
        q = pure_state_quantities(BipartiteState.from_ket(singlet_ket()))
        assert abs(q.distillable - 1.0) < 1e-9
        assert abs(q.formation - 1.0) < 1e-9
        assert abs(q.classical - 1.0) < 1e-9
        assert abs(q.quantum_deficit - 1.0) < 1e-9
        assert abs(q.classical_deficit - 1.0) < 1e-9

    def test_product_pure(self):
        ket = np.kron(basis_ket(2, 0), basis_ket(2, 0))
        q = pure_state_quantities(BipartiteState.from_ket(ket))
        assert abs(q.distillable) < 1e-9
        assert abs(q.classical - 2.0) < 1e-9
        assert abs(q.quantum_deficit) < 1e-9

    def test_partially_entangled(self):
        q = pure_state_quantities(BipartiteState.from_ket(schmidt_ket(0.25)))
        assert abs(q.distillable - H_QUARTER) < 1e-12
        assert abs(q.classical - (2.0 - H_QUARTER)) < 1e-12

    def test_rejects_mixed(self):
        with pytest.raises(ValueError):
            pure_state_quantities(maximally_mixed((2, 2)))


class TestMixedStateBounds:
    def test_maximally_mixed(self):
        interval = mixed_state_bounds(maximally_mixed((2, 2)))
        assert abs(interval.lower) < 1e-9
        assert abs(interval.upper - 1.0) < 1e-9

    def test_classically_correlated(self):
        rho = np.diag([0.5, 0.0, 0.0, 0.5]).astype(complex)
        interval = mixed_state_bounds(BipartiteState.from_density(rho, (2, 2)))
        assert abs(interval.lower) < 1e-9
        assert abs(interval.upper - 1.0) < 1e-9

    def test_pure_state_collapses_to_point(self):
        ket = schmidt_ket(0.25)
        state = BipartiteState.from_density(np.outer(ket, ket.conj()), (2, 2))
        interval = mixed_state_bounds(state)
        assert interval.width < 1e-9
        assert abs(interval.lower - (2.0 - H_QUARTER)) < 1e-9

    def test_interval_contains_exact_value_for_pure_inputs(self):
        rng = np.random.default_rng(47)
        for _ in range(50):
            ket = haar_ket(4, rng)
            exact = pure_state_quantities(BipartiteState.from_ket(ket)).classical
            as_mixed = BipartiteState.from_density(np.outer(ket, ket.conj()), (2, 2))
            assert mixed_state_bounds(as_mixed).contains(exact)


class TestClassicalBound:
    def test_correlated_pair(self):
        rho = np.diag([0.5, 0.0, 0.0, 0.5]).astype(complex)
        report = classical_bound_check(BipartiteState.from_density(rho, (2, 2)))
        assert abs(report.mutual - 1.0) < 1e-9
        assert abs(report.diagonal_entropy - 1.0) < 1e-9
        assert abs(report.margin_entropy) < 1e-9
        assert abs(report.margin_dimension) < 1e-9

    def test_pure_product(self):
        rho = np.diag([1.0, 0.0, 0.0, 0.0]).astype(complex)
        report = classical_bound_check(BipartiteState.from_density(rho, (2, 2)))
        assert abs(report.mutual) < 1e-9
        assert abs(report.margin_entropy) < 1e-9

    def test_uniform_diagonal(self):
        report = classical_bound_check(maximally_mixed((2, 2)))
        assert abs(report.mutual) < 1e-9
        assert abs(report.margin_entropy - 2.0) < 1e-9
        assert abs(report.margin_dimension - 1.0) < 1e-9

    def test_random_diagonal_states_always_pass(self):
        rng = np.random.default_rng(53)
        for _ in range(200):
            diag = rng.dirichlet(np.ones(4))
            state = BipartiteState.from_density(np.diag(diag).astype(complex), (2, 2))
            report = classical_bound_check(state)
            assert report.margin_entropy >= -1e-9
            assert report.margin_dimension >= -1e-9

    def test_rejects_nondiagonal(self):
        with pytest.raises(ValueError):
            classical_bound_check(BipartiteState.from_ket(singlet_ket()))

    def test_entangled_pure_state_violates_the_bound(self):
        # negative control: the singlet has two bits of mutual information
        # but zero total entropy, so no classical state can mimic it
        state = BipartiteState.from_ket(singlet_ket())
        led = ledger(state)
        total_entropy = von_neumann_entropy(state.matrix)
        assert led.mutual - total_entropy > 1.0  # 2 > 0, decisive violation

    def test_random_mixed_states_can_violate_dimension_margin_only_if_entangled(self):
        rng = np.random.default_rng(59)
        for _ in range(100):
            led = ledger(random_mixed_state(rng))
            assert led.mutual <= 2.0 + 1e-9
