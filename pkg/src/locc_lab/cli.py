"""Command-line front end: demos, sweeps, verification suites.

Every command emits one versioned report (JSON by default, CSV for sweeps)
and exits 0 only if all of its checks passed; usage problems exit 2, failed
checks exit 1 with the report still emitted. Reports are byte-identical for
identical argv and seed.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import commutators, protocols, sausage
from . import suite as suite_mod
from .ledger import Interval, classical_bound_check, ledger
from .qmat import (
    BipartiteState,
    NotAStateError,
    PAULI_X,
    PAULI_Y,
    basis_ket,
    bell_ket,
    binary_entropy,
    haar_ket,
    maximally_mixed,
    partial_trace_dims,
    schmidt,
    schmidt_ket,
    singlet_ket,
)
from .report import Check, matrix_json, render_csv, render_json, report_dict

SWEEP_CSV_COLUMNS = [
    "n",
    "a2",
    "kq_mask",
    "e_d",
    "i_c1",
    "i_c2",
    "i_er",
    "i_total",
    "margin_eq12",
    "gap_asymptotic",
]

BIT_LEGEND = "bit label 0 denotes eigenvalue -1, bit label 1 denotes eigenvalue +1"


class UsageError(Exception):
    pass


class StateSpecError(UsageError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


# ---------------------------------------------------------------------------
# state parsing

def _named_states() -> dict:
    return {
        "singlet": lambda: BipartiteState.from_ket(singlet_ket()),
        "psi_plus": lambda: BipartiteState.from_ket(bell_ket("psi_plus")),
        "phi_plus": lambda: BipartiteState.from_ket(bell_ket("phi_plus")),
        "phi_minus": lambda: BipartiteState.from_ket(bell_ket("phi_minus")),
        "product00": lambda: BipartiteState.from_ket(np.kron(basis_ket(2, 0), basis_ket(2, 0))),
        "maxmix": lambda: maximally_mixed((2, 2)),
    }


def _complex_entries(nested) -> np.ndarray:
    def pair(x):
        if not (isinstance(x, list) and len(x) == 2):
            raise ValueError(f"expected [re, im] pair, got {x!r}")
        return complex(float(x[0]), float(x[1]))

    arr = np.asarray(nested, dtype=object)
    if arr.ndim == 2:  # ket: list of pairs
        return np.array([pair(x) for x in nested], dtype=complex)
    return np.array([[pair(x) for x in row] for row in nested], dtype=complex)


def _load_state_file(path: str) -> BipartiteState:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read state file {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"state file {path!r} is not valid JSON: {exc}") from exc
    try:
        dims = tuple(int(d) for d in data["dims"])
        if "ket" in data:
            return BipartiteState.from_ket(_complex_entries(data["ket"]), dims)
        return BipartiteState.from_density(_complex_entries(data["matrix"]), dims)
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"bad state file {path!r}: {exc}") from exc


def state_parser(spec: str) -> BipartiteState:
    """Build a bipartite state from a CLI spec string.

    Accepted forms: a named state (singlet, psi_plus, phi_plus, phi_minus,
    product00, maxmix), the parametric family schmidt(a2=...), or @path to a
    JSON file holding dims plus a matrix or ket of [re, im] pairs.
    """
    text = spec.strip()
    if not text:
        raise StateSpecError("empty state spec", 0)
    if text.startswith("@"):
        return _load_state_file(text[1:].strip())
    i = 0
    while i < len(text) and (text[i].isalnum() or text[i] == "_"):
        i += 1
    name = text[:i]
    if not name:
        raise StateSpecError(f"expected a state name, found {text[0]!r}", 0)
    tail = text[i:]
    named = _named_states()
    if not tail:
        if name in named:
            return named[name]()
        raise StateSpecError(f"unknown state name {name!r}", 0)
    if tail[0] != "(":
        raise StateSpecError(f"expected '(' after {name!r}", i)
    if not tail.endswith(")"):
        raise StateSpecError("expected closing ')'", len(text) - 1)
    args: dict[str, float] = {}
    pos = i + 1
    inner = tail[1:-1]
    if inner.strip():
        for part in inner.split(","):
            if "=" not in part:
                raise StateSpecError("expected key=value", pos)
            key, val = part.split("=", 1)
            try:
                args[key.strip()] = float(val)
            except ValueError:
                raise StateSpecError(f"bad number {val.strip()!r}", pos + len(key) + 1) from None
            pos += len(part) + 1
    if name == "schmidt":
        if set(args) != {"a2"}:
            raise StateSpecError("schmidt takes exactly one argument a2", i + 1)
        a2 = args["a2"]
        if not 0.0 <= a2 <= 1.0:
            raise StateSpecError(f"a2 must lie in [0, 1], got {a2}", i + 1)
        return BipartiteState.from_ket(schmidt_ket(a2))
    raise StateSpecError(f"unknown parametric state {name!r}", 0)


# ---------------------------------------------------------------------------
# shared serialization helpers

def _quantity(value) -> dict:
    if isinstance(value, Interval):
        return {
            "interval": [value.lower, value.upper],
            "upper_bound_conjectural": True,
        }
    return {"exact": float(value)}


def _ledger_json(led) -> dict:
    return {
        "n": led.n,
        "total": led.total,
        "local_a": led.local_a,
        "local_b": led.local_b,
        "mutual": led.mutual,
        "local_only": led.local_only,
        "classical": _quantity(led.classical),
        "classical_deficit": _quantity(led.classical_deficit),
        "quantum_deficit": _quantity(led.quantum_deficit),
        "distillable": None if led.distillable is None else float(led.distillable),
        "formation": None if led.formation is None else float(led.formation),
    }


def _trace_json(trace, include_states: bool = True) -> dict:
    steps = []
    for step in trace.steps:
        entry = {
            "actor": step.actor,
            "kind": step.kind,
            "payload": step.payload,
            "entropy_delta_environment": step.entropy_delta_environment,
        }
        if step.transmitted:
            entry["transmitted"] = [trace.labels[i] for i in step.transmitted]
        if include_states:
            entry["state_after"] = matrix_json(step.state_after.entries)
        steps.append(entry)
    out = {
        "labels": list(trace.labels),
        "dims": list(trace.dims),
        "steps": steps,
        "deltas": {
            "classical_bits_gained": trace.deltas.classical_bits_gained,
            "singlets_spent": trace.deltas.singlets_spent,
            "singlets_gained": trace.deltas.singlets_gained,
            "bits_dephased": trace.deltas.bits_dephased,
        },
        "notes": trace.notes,
    }
    if include_states:
        out["initial"] = matrix_json(trace.initial.entries)
        out["final"] = matrix_json(trace.final.entries)
    return out


def _kq_mask(kq, n: int) -> int:
    mask = 0
    for k in kq:
        if not 0 <= k <= n:
            raise UsageError(f"--kq index {k} outside 0..{n}")
        mask |= 1 << k
    return mask


# ---------------------------------------------------------------------------
# command handlers: each returns (inputs, results, checks, text_override, report_seed)

def _cmd_info(args, seed):
    state = state_parser(args.state)
    led = ledger(state)
    checks = [
        Check.from_margin(
            "decomposition_identity",
            -abs(led.total - (led.local_a + led.local_b + led.mutual)),
            1e-9,
        ),
        Check.from_margin("mutual_nonnegative", led.mutual, 1e-9),
        Check.from_margin(
            "mutual_dimension_bound",
            2.0 * math.log2(min(state.dim_a, state.dim_b)) - led.mutual,
            1e-9,
        ),
    ]
    results = {"ledger": _ledger_json(led)}
    if state.is_pure:
        dev = abs(
            (led.classical_deficit + led.quantum_deficit) - led.mutual
        )
        checks.append(Check.from_margin("deficit_sum_identity", -dev, 1e-9))
    rho = state.matrix.entries
    if float(np.max(np.abs(rho - np.diag(np.diag(rho))))) <= 1e-10:
        bound = classical_bound_check(state)
        results["classical_bounds"] = {
            "mutual": bound.mutual,
            "diagonal_entropy": bound.diagonal_entropy,
            "margin_entropy": bound.margin_entropy,
            "margin_dimension": bound.margin_dimension,
        }
        checks.append(Check.from_margin("classical_entropy_bound", bound.margin_entropy, 1e-9))
        checks.append(Check.from_margin("classical_dimension_bound", bound.margin_dimension, 1e-9))
    return {"state": args.state}, results, checks, None, None


def _cmd_singlet_demo(args, seed):
    trace = protocols.singlet_extraction()
    audit = protocols.validate_trace(trace)
    final = trace.final.entries
    alice = partial_trace_dims(final, trace.dims, [0])
    bob = partial_trace_dims(final, trace.dims, [1])
    env_bits = max(s.entropy_delta_environment for s in trace.steps if s.kind == "dephase")
    checks = [
        Check.from_margin("bits_gained", -abs(trace.deltas.classical_bits_gained - 1.0), 1e-9),
        Check.from_margin("environment_bit", -abs(env_bits - 1.0), 1e-9),
        Check.from_margin("alice_maximally_mixed", -float(np.max(np.abs(alice - np.eye(2) / 2))), 1e-9),
        Check.from_margin("bob_pure", -(1.0 - float(np.real(np.trace(bob @ bob)))), 1e-9),
        Check.from_margin(
            "ancilla_reset", -abs(trace.notes["ancilla_restored_fidelity"] - 1.0), 1e-9
        ),
        Check.from_margin("channel_model", -audit.max_channel_offdiag, 1e-10),
    ]
    results = {
        "trace": _trace_json(trace),
        "alice_final": matrix_json(alice),
        "bob_final": matrix_json(bob),
    }
    return {}, results, checks, None, None


def _cmd_teleport_demo(args, seed):
    if seed is None:
        ket = (basis_ket(2, 0) + 1j * basis_ket(2, 1)) / math.sqrt(2)
        source = "default"
    else:
        ket = haar_ket(2, np.random.default_rng(seed))
        source = "haar"
    trace = protocols.teleport(ket)
    audit = protocols.validate_trace(trace)
    residual = partial_trace_dims(trace.final.entries, trace.dims, [0, 1])
    residual_dev = float(np.max(np.abs(residual - np.eye(4) / 4)))
    residual_info = ledger(BipartiteState.from_density(residual, (2, 2))).total
    fidelity = trace.notes["output_fidelity"]
    checks = [
        Check.from_margin("output_fidelity", fidelity - 1.0, 1e-9),
        Check.from_margin("residual_identity", -residual_dev, 1e-9),
        Check.from_margin("residual_information", -abs(residual_info), 1e-9),
        Check.from_margin("channel_model", -audit.max_channel_offdiag, 1e-10),
    ]
    results = {
        "input_source": source,
        "input_ket": matrix_json(ket),
        "fidelity": fidelity,
        "residual_deviation": residual_dev,
        "residual_information": residual_info,
        "trace": _trace_json(trace),
    }
    return {"source": source}, results, checks, None, seed


def _cmd_concentrate(args, seed):
    if args.n is None or args.a2 is None:
        raise UsageError("concentrate requires --n and --a2")
    if not 0.0 < args.a2 < 1.0:
        raise UsageError(f"--a2 must lie strictly in (0, 1), got {args.a2}")
    outcomes = protocols.concentration_outcomes(args.n, math.sqrt(args.a2))
    total = math.fsum(o.probability for o in outcomes)
    rows = []
    for o in outcomes:
        row = {"k": o.k, "probability": o.probability, "log2_rank": o.log2_rank}
        if args.n <= 64:
            row["schmidt_rank"] = o.schmidt_rank
        rows.append(row)
    checks = [Check.from_margin("probability_normalization", -abs(total - 1.0), 1e-9)]
    text = None
    if args.format == "csv":
        text = render_csv(
            ["k", "probability", "log2_rank"],
            [[o.k, o.probability, o.log2_rank] for o in outcomes],
        )
    return {"n": args.n, "a2": args.a2}, {"outcomes": rows, "probability_sum": total}, checks, text, None


def _parse_kq(raw: str) -> tuple[int, ...]:
    if raw.strip() == "":
        return ()
    try:
        return tuple(int(part) for part in raw.split(","))
    except ValueError as exc:
        raise UsageError(f"--kq must be a comma-separated list of integers: {exc}") from exc


def _cmd_tradeoff(args, seed):
    if args.n is None or args.a2 is None:
        raise UsageError("tradeoff requires --n and --a2")
    if not 0.0 < args.a2 < 1.0:
        raise UsageError(f"--a2 must lie strictly in (0, 1), got {args.a2}")
    a = math.sqrt(args.a2)
    gap = protocols.asymptotic_rate(args.n, a).gap
    margin = protocols.complementarity_margin(args.n, args.a2)

    if args.kq is not None:
        chosen = _parse_kq(args.kq)
        led = protocols.tradeoff_ledger(args.n, a, chosen)
        residual = protocols.balance_identity_residual(led)
        comp = protocols.complementarity_check_ledger(led)
        checks = [
            Check.from_margin("balance_identity", -abs(residual), 1e-9),
            Check.from_margin("complementarity_margin", margin, 1e-9),
        ]
        checks.extend(comp.checks)
        results = {
            "e_d": led.e_d,
            "i_c1": led.i_c1,
            "i_c2": led.i_c2,
            "i_er": led.i_er,
            "i_total": led.i_total,
            "identity_residual": residual,
            "complementarity_margin": margin,
            "gap_asymptotic": gap,
        }
        text = None
        if args.format == "csv":
            row = [
                args.n,
                args.a2,
                _kq_mask(led.k_quantum, args.n),
                led.e_d,
                led.i_c1,
                led.i_c2,
                led.i_er,
                led.i_total,
                margin,
                gap,
            ]
            text = render_csv(SWEEP_CSV_COLUMNS, [row])
        inputs = {"n": args.n, "a2": args.a2, "kq": list(led.k_quantum)}
        return inputs, results, checks, text, None

    rng = np.random.default_rng(0 if seed is None else seed)
    sweep = protocols.partition_sweep(args.n, args.a2, rng=rng, samples=args.samples or 100)
    masks = sweep.masks()
    worst = float(np.max(np.abs(sweep.residuals)))
    checks = [
        Check.from_margin("balance_identity_sweep", -worst, 1e-9),
        Check.from_margin("complementarity_margin", sweep.margin, 1e-9),
    ]
    rows = [
        [
            args.n,
            args.a2,
            masks[i],
            float(sweep.e_d[i]),
            float(sweep.i_c1[i]),
            float(sweep.i_c2[i]),
            sweep.i_er,
            float(sweep.i_total[i]),
            sweep.margin,
            gap,
        ]
        for i in range(len(masks))
    ]
    text = render_csv(SWEEP_CSV_COLUMNS, rows) if args.format == "csv" else None
    results = {
        "partitions": len(masks),
        "max_identity_residual": worst,
        "complementarity_margin": sweep.margin,
        "gap_asymptotic": gap,
        "rows": [
            {
                "kq_mask": masks[i],
                "e_d": float(sweep.e_d[i]),
                "i_c1": float(sweep.i_c1[i]),
                "i_c2": float(sweep.i_c2[i]),
                "i_er": sweep.i_er,
                "i_total": float(sweep.i_total[i]),
            }
            for i in range(len(masks))
        ],
    }
    inputs = {"n": args.n, "a2": args.a2, "kq": None, "samples": args.samples or 100}
    return inputs, results, checks, text, (0 if seed is None else seed)


def _cmd_commutator(args, seed):
    alpha = args.alpha if args.alpha is not None else 1.0
    parity, phase = commutators.parity_phase_pair()
    global_report = commutators.commutator(phase, parity)
    other_report = commutators.commutator(
        np.kron(PAULI_X, PAULI_Y),
        parity,
    )

    bell_residual = 0.0
    for name, parity_eig, phase_eig in (
        ("phi_plus", 1.0, 1.0),
        ("phi_minus", 1.0, -1.0),
        ("psi_plus", -1.0, 1.0),
        ("psi_minus", -1.0, -1.0),
    ):
        ket = bell_ket(name)
        bell_residual = max(
            bell_residual,
            float(np.linalg.norm(parity.entries @ ket - parity_eig * ket)),
            float(np.linalg.norm(phase.entries @ ket - phase_eig * ket)),
        )
    singlet = singlet_ket()
    expect_parity = float(np.real(singlet.conj() @ parity.entries @ singlet))
    expect_phase = float(np.real(singlet.conj() @ phase.entries @ singlet))

    phase_impl = commutators.locc_implementation("phase", alpha)
    parity_impl = commutators.locc_implementation("parity", alpha)
    probe = basis_ket(4, 0)
    locc_report = commutators.commutator(phase_impl, parity_impl, probe=probe)
    expected = -2j * (
        np.kron(PAULI_Y, np.eye(2)) + alpha * alpha * np.kron(np.eye(2), PAULI_Y)
    )
    expansion_dev = float(np.max(np.abs(locc_report.matrix.entries - expected)))
    entropy = locc_report.entangling.entanglement_entropy
    expected_entropy = binary_entropy(alpha * alpha / (1.0 + alpha * alpha))

    family = commutators.alpha_family()
    minimum = commutators.restricted_commutator_min(family)
    trend = []
    for a in (0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 10.0):
        pair = family.build((a, a))
        k = pair[0] @ pair[1] - pair[1] @ pair[0]
        trend.append({"alpha": a, "norm": float(np.linalg.norm(k))})

    checks = [
        Check.from_margin("global_pair_commutes", -global_report.frobenius_norm, 1e-14),
        Check.from_margin("other_global_pair_commutes", -other_report.frobenius_norm, 1e-14),
        Check.from_margin("bell_eigenbasis", -bell_residual, 1e-12),
        Check.from_margin("singlet_parity_expectation", -abs(expect_parity + 1.0), 1e-12),
        Check.from_margin("singlet_phase_expectation", -abs(expect_phase + 1.0), 1e-12),
        Check.from_margin("locc_expansion", -expansion_dev, 1e-12),
        Check.from_margin("anti_hermitian", -locc_report.anti_hermiticity_defect, 1e-10),
        Check.from_margin("entangling_entropy", -abs(entropy - expected_entropy), 1e-9),
        Check.from_margin("restricted_min_threshold", minimum.norm - 4.0, 1e-9),
    ]
    results = {
        "global_commutator_norm": global_report.frobenius_norm,
        "other_global_commutator_norm": other_report.frobenius_norm,
        "singlet_expectations": {"parity": expect_parity, "phase": expect_phase},
        "eigenvalue_legend": BIT_LEGEND,
        "alpha": alpha,
        "locc_spectrum": [float(v) for v in parity_impl.eigenvalues],
        "locc_nondegenerate": parity_impl.nondegenerate,
        "locc_commutator_norm": locc_report.frobenius_norm,
        "locc_commutator": matrix_json(locc_report.matrix.entries),
        "expansion_deviation": expansion_dev,
        "entangling_entropy": entropy,
        "restricted_min": {
            "norm": minimum.norm,
            "params": {"alpha_x": minimum.params[0], "alpha_z": minimum.params[1]},
        },
        "trend": trend,
    }
    return {"alpha": alpha}, results, checks, None, None


def _cmd_prop1(args, seed):
    samples = args.samples if args.samples is not None else 1000
    if samples < 1:
        raise UsageError("--samples must be positive")
    resolved = 0 if seed is None else seed
    dressed = max(1, samples // 10)
    search = commutators.proposition1_search(samples, dressed, resolved)
    checks = [
        Check.from_margin("no_false_commuters", -float(search.false_commuters), 0.0),
        Check.from_margin(
            "dressed_all_certified", float(search.dressed_certified - search.dressed_samples), 0.0
        ),
        Check.from_margin("generic_norm_floor", search.generic_min_norm - 1e-6, 0.0),
    ]
    results = {
        "generic_samples": search.generic_samples,
        "dressed_samples": search.dressed_samples,
        "false_commuters": search.false_commuters,
        "generic_min_norm": search.generic_min_norm,
        "generic_degenerate": search.generic_degenerate,
        "dressed_certified": search.dressed_certified,
    }
    return {"samples": samples, "dressed": dressed}, results, checks, None, resolved


def _cmd_sausage(args, seed):
    resolved = 0 if seed is None else seed
    trials = args.trials if args.trials is not None else 1000
    table = sausage.build_nine_states()
    gram_dev = float(np.max(np.abs(table.gram() - np.eye(9))))
    max_second = max(
        float(schmidt(state.ket, (3, 3)).coefficients[1]) for state in table.states
    )
    ops = sausage.build_operators()
    global_norm = commutators.commutator(ops.o1, ops.o2).frobenius_norm
    locc_report = commutators.commutator(ops.o1_locc, ops.o2_locc)
    expected = 2j * np.kron(sausage.PROJECTOR_2, sausage.BOB_SIGMA_Y)
    form_dev = float(np.max(np.abs(locc_report.matrix.entries - expected)))
    factor = commutators.kron_factorize(locc_report.matrix.entries, (3, 3))

    labels = [args.input] if args.input else list(sausage.modified_basis())
    transcripts = []
    verdict_failures = 0
    for label in labels:
        transcript = sausage.ping_pong(label)
        if transcript.verdict != label:
            verdict_failures += 1
        transcripts.append(
            {
                "input": label,
                "verdict": transcript.verdict,
                "surplus_flag": transcript.surplus_flag,
                "rounds": [
                    {
                        "actor": r.actor,
                        "side": r.side,
                        "projectors": list(r.projectors),
                        "outcome": r.outcome,
                        "message": r.message,
                    }
                    for r in transcript.rounds
                ],
            }
        )
    separability = sausage.product_commutator_separability(trials=trials, seed=resolved)
    equivalence = sausage.o1_measurement_equivalence()
    checks = [
        Check.from_margin("gram_identity", -gram_dev, 1e-12),
        Check.from_margin("states_are_products", -max_second, 1e-12),
        Check.from_margin("global_pair_commutes", -global_norm, 1e-12),
        Check.from_margin("locc_commutator_form", -form_dev, 1e-12),
        Check.from_margin("locc_commutator_factorizes", -factor.residual, 1e-12),
        Check.from_margin("pingpong_verdicts", -float(verdict_failures), 0.0),
        Check.from_margin("separable_images", -separability.max_negativity, 1e-10),
        Check.from_margin(
            "implementation_matches", -(1.0 - min(equivalence.subspace_overlaps)), 1e-10
        ),
    ]
    results = {
        "gram_deviation": gram_dev,
        "max_second_schmidt": max_second,
        "global_commutator_norm": global_norm,
        "locc_commutator_norm": locc_report.frobenius_norm,
        "locc_commutator_deviation": form_dev,
        "locc_commutator_factors": {
            "scale": factor.scale,
            "left": matrix_json(factor.left),
            "right": matrix_json(factor.right),
        },
        "transcripts": transcripts,
        "separability": {
            "trials": separability.trials,
            "zero_outputs": separability.zero_outputs,
            "max_negativity": separability.max_negativity,
            "max_second_schmidt": separability.max_second_schmidt,
        },
        "equivalence": {
            "eigen_residuals": list(equivalence.eigen_residuals),
            "subspace_overlaps": list(equivalence.subspace_overlaps),
            "phase_pair_resolved": equivalence.phase_pair_resolved,
        },
    }
    inputs = {"input": args.input, "trials": trials}
    return inputs, results, checks, None, resolved


def _cmd_suite(args, seed):
    resolved = 0 if seed is None else seed
    results, checks = suite_mod.run_suite(resolved)
    return {}, results, checks, None, resolved


# ---------------------------------------------------------------------------
# argument parsing and dispatch

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="locc-lab",
        description="Information ledgers, LOCC protocol demos, and commutator diagnostics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, *, state=False, n=False, a2=False, kq=False, alpha=False,
            samples=False, trials=False, seedable=False, sweep_format=False, input_label=False):
        p = sub.add_parser(name, help=help_text)
        if state:
            p.add_argument("--state", required=True, help="state spec (see README)")
        if n:
            p.add_argument("--n", type=int, help="number of copies")
        if a2:
            p.add_argument("--a2", type=float, help="larger Schmidt weight squared")
        if kq:
            p.add_argument("--kq", type=str, default=None, help="comma-separated outcome list")
            p.add_argument("--samples", type=int, default=None, help="random partitions to sample")
        if alpha:
            p.add_argument("--alpha", type=float, default=None, help="local-sum weight")
        if samples:
            p.add_argument("--samples", type=int, default=None, help="random samples")
        if trials:
            p.add_argument("--trials", type=int, default=None, help="random trials")
        if input_label:
            p.add_argument("--input", type=str, default=None, help="state label to discriminate")
        if seedable:
            p.add_argument("--seed", type=int, default=None, help="seed (fallback: LOCC_LAB_SEED)")
        if sweep_format:
            p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", type=str, default=None, help="write the report here instead of stdout")
        return p

    add("info", "information ledger of a state", state=True)
    add("singlet-demo", "extract one classical bit from a singlet")
    add("teleport-demo", "teleport a qubit over a singlet", seedable=True)
    add("concentrate", "concentration outcome table", n=True, a2=True, sweep_format=True)
    add("tradeoff", "quantum/classical trade-off ledger", n=True, a2=True, kq=True,
        seedable=True, sweep_format=True)
    add("commutator", "parity/phase commutator diagnostics", alpha=True)
    add("prop1", "commuting-product certification search", samples=True, seedable=True)
    add("sausage", "nine-state lab and ping-pong discrimination", trials=True,
        seedable=True, input_label=True)
    add("suite", "run every verification block", seedable=True)
    return parser


HANDLERS = {
    "info": _cmd_info,
    "singlet-demo": _cmd_singlet_demo,
    "teleport-demo": _cmd_teleport_demo,
    "concentrate": _cmd_concentrate,
    "tradeoff": _cmd_tradeoff,
    "commutator": _cmd_commutator,
    "prop1": _cmd_prop1,
    "sausage": _cmd_sausage,
    "suite": _cmd_suite,
}


def _resolve_seed(args) -> int | None:
    seed = getattr(args, "seed", None)
    if seed is not None:
        return int(seed)
    env = os.environ.get("LOCC_LAB_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise UsageError(f"LOCC_LAB_SEED is not an integer: {env!r}") from exc
    return None


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        seed = _resolve_seed(args)
        outcome = HANDLERS[args.command](args, seed)
    except (UsageError, NotAStateError) as exc:
        print(f"locc-lab: error: {exc}", file=sys.stderr)
        return 2
    inputs, results, checks, text, report_seed = outcome
    if text is None:
        text = render_json(report_dict(args.command, inputs, results, checks, report_seed)) + "\n"
    out_path = getattr(args, "out", None)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if all(c.passed for c in checks) else 1


if __name__ == "__main__":
    sys.exit(main())
