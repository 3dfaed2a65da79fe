"""Parity/phase observables, restricted commutators, and product-observable
structure results.

The global parity (sigma_z x sigma_z) and phase (sigma_x x sigma_x) of two
qubits commute; their local-sum stand-ins, needed when the two qubits sit in
distant labs, do not. This module builds both kinds, computes commutators,
minimizes the commutator norm over declared implementation families, factors
matrices into Kronecker products, and certifies that commuting products of
qubit observables are the canonical z/x pair up to local rotations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.spatial.transform import Rotation

from .qmat import (
    ComplexMatrix,
    IDENTITY_2,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    schmidt,
)

_PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


@dataclass(frozen=True)
class BlochObservable:
    """Qubit observable scalar*I + vec . sigma with real coefficients."""

    scalar: float
    vec: np.ndarray

    def __post_init__(self):
        v = np.array(self.vec, dtype=float).reshape(3)
        v.setflags(write=False)
        object.__setattr__(self, "vec", v)
        object.__setattr__(self, "scalar", float(self.scalar))

    def to_matrix(self) -> np.ndarray:
        out = self.scalar * IDENTITY_2.copy()
        for coef, pauli in zip(self.vec, _PAULIS):
            out = out + coef * pauli
        return out

    @classmethod
    def from_matrix(cls, m) -> "BlochObservable":
        arr = np.asarray(m, dtype=complex)
        scalar = float(np.real(np.trace(arr)) / 2.0)
        vec = [float(np.real(np.trace(arr @ p)) / 2.0) for p in _PAULIS]
        return cls(scalar, np.array(vec))


@dataclass(frozen=True)
class ProductObservable:
    left: BlochObservable
    right: BlochObservable

    def to_matrix(self) -> np.ndarray:
        return np.kron(self.left.to_matrix(), self.right.to_matrix())


def _coerce(m) -> np.ndarray:
    if isinstance(m, LoccImplementation):
        return m.matrix.entries
    if isinstance(m, ComplexMatrix):
        return m.entries
    if isinstance(m, (BlochObservable, ProductObservable)):
        return m.to_matrix()
    return np.asarray(m, dtype=complex)


def parity_phase_pair() -> tuple[ComplexMatrix, ComplexMatrix]:
    """Global parity and phase observables of two qubits.

    Both are diagonal in the Bell basis: parity separates |01>-type from
    |00>-type Bell states, phase separates + from - relative signs.
    """
    parity = ComplexMatrix(np.kron(PAULI_Z, PAULI_Z), (2, 2))
    phase = ComplexMatrix(np.kron(PAULI_X, PAULI_X), (2, 2))
    return parity, phase


@dataclass(frozen=True)
class LoccImplementation:
    """Local-sum stand-in for a global two-qubit observable."""

    which: str
    alpha: float
    matrix: ComplexMatrix
    eigenvalues: np.ndarray
    nondegenerate: bool


def locc_implementation(which: str, alpha: float) -> LoccImplementation:
    """Local-sum implementation sigma (x) I + alpha I (x) sigma.

    The weight alpha breaks the degeneracy of the global observable; the
    spectrum is nondegenerate exactly when |alpha| is neither 0 nor 1, and
    the flag reports which case we are in.
    """
    if which == "parity":
        base = PAULI_Z
    elif which == "phase":
        base = PAULI_X
    else:
        raise ValueError(f"which must be 'parity' or 'phase', got {which!r}")
    mat = np.kron(base, IDENTITY_2) + alpha * np.kron(IDENTITY_2, base)
    eigs = np.sort(np.linalg.eigvalsh(mat))
    gaps = np.diff(eigs)
    nondeg = bool(np.min(gaps) > 1e-9)
    eigs.setflags(write=False)
    return LoccImplementation(which, float(alpha), ComplexMatrix(mat, (2, 2)), eigs, nondeg)


@dataclass(frozen=True)
class EntanglingDiagnostic:
    input_ket: np.ndarray
    output_ket: np.ndarray | None
    entanglement_entropy: float | None
    output_norm: float
    annihilated: bool


@dataclass(frozen=True)
class CommutatorReport:
    matrix: ComplexMatrix
    frobenius_norm: float
    is_zero: bool
    anti_hermiticity_defect: float
    entangling: EntanglingDiagnostic | None = None


def commutator(m, n, probe: np.ndarray | None = None, dims: tuple[int, int] | None = None) -> CommutatorReport:
    """K = MN - NM with norm and optional entangling-action probe.

    For Hermitian inputs K is anti-Hermitian; the defect field records how
    far from that the numerics landed.
    """
    a, b = _coerce(m), _coerce(n)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    k = a @ b - b @ a
    norm = float(np.linalg.norm(k))
    defect = float(np.max(np.abs(k + k.conj().T)))
    if dims is None:
        dims = _square_dims(m, k.shape[0])
    diag = entangling_action(k, probe, dims) if probe is not None else None
    return CommutatorReport(ComplexMatrix(k, dims), norm, norm <= 1e-10, defect, diag)


def _square_dims(source, dim: int) -> tuple[int, int]:
    if isinstance(source, LoccImplementation):
        return source.matrix.dims  # type: ignore[return-value]
    if isinstance(source, ComplexMatrix) and len(source.dims) == 2:
        return source.dims  # type: ignore[return-value]
    root = math.isqrt(dim)
    if root * root == dim:
        return (root, root)
    raise ValueError(f"cannot infer bipartite dims for dimension {dim}")


def entangling_action(k, ket, dims: tuple[int, int] | None = None) -> EntanglingDiagnostic:
    """Apply an anti-Hermitian commutator to a product ket and grade the output.

    The output ket is normalized and its entanglement entropy reported; a
    zero output is flagged, not raised.
    """
    arr = _coerce(k)
    defect = float(np.max(np.abs(arr + arr.conj().T)))
    if defect > 1e-10:
        raise ValueError(f"commutator not anti-Hermitian: defect {defect:.3e}")
    if dims is None:
        dims = _square_dims(k, arr.shape[0])
    vec = np.asarray(ket, dtype=complex).reshape(-1)
    form = schmidt(vec / np.linalg.norm(vec), dims)
    if form.rank != 1:
        raise ValueError("probe ket must be a product state")
    out = arr @ vec
    norm = float(np.linalg.norm(out))
    if norm <= 1e-12:
        return EntanglingDiagnostic(vec, None, None, norm, True)
    out = out / norm
    entropy = schmidt(out, dims).entropy_bits()
    return EntanglingDiagnostic(vec, out, entropy, norm, False)


# ---------------------------------------------------------------------------
# norm minimization over declared implementation families

@dataclass(frozen=True)
class ImplementationFamily:
    """Parametrized pairs of implementations with an admissibility constraint."""

    parameter_names: tuple[str, ...]
    bounds: tuple[tuple[float, float], ...]
    build: Callable[[tuple[float, ...]], tuple[np.ndarray, np.ndarray]]
    admissible: Callable[[tuple[float, ...]], bool]


def alpha_family(lo: float = 0.1, hi: float = 10.0) -> ImplementationFamily:
    """Local-sum parity/phase implementations indexed by their two weights.

    Admissible points are those where both spectra are nondegenerate, since a
    local determination of parity and phase must resolve all four outcomes.
    """

    def build(params):
        ax, az = params
        phase = locc_implementation("phase", ax)
        parity = locc_implementation("parity", az)
        return phase.matrix.entries, parity.matrix.entries

    def admissible(params):
        ax, az = params
        return (
            locc_implementation("phase", ax).nondegenerate
            and locc_implementation("parity", az).nondegenerate
        )

    return ImplementationFamily(("alpha_x", "alpha_z"), ((lo, hi), (lo, hi)), build, admissible)


def singleton_family(m, n) -> ImplementationFamily:
    """A single fixed implementation pair (no parameters)."""
    a, b = _coerce(m), _coerce(n)
    return ImplementationFamily((), (), lambda params: (a, b), lambda params: True)


@dataclass(frozen=True)
class MinimizationResult:
    norm: float
    params: tuple[float, ...]
    evaluated: int


def restricted_commutator_min(
    family: ImplementationFamily,
    grid_points: int = 15,
    refine_iterations: int = 40,
) -> MinimizationResult:
    """Minimize ||[M_impl, N_impl]||_F over a family by grid + local zoom.

    Deterministic: a coarse grid over the parameter box locates the best
    admissible point, then the box shrinks around it until it is tiny.
    """

    def norm_at(params):
        m, n = family.build(params)
        k = m @ n - n @ m
        return float(np.linalg.norm(k))

    if not family.bounds:
        if not family.admissible(()):
            raise ValueError("family has no admissible implementations")
        return MinimizationResult(norm_at(()), (), 1)

    lo = np.array([b[0] for b in family.bounds])
    hi = np.array([b[1] for b in family.bounds])
    center = (lo + hi) / 2.0
    half = (hi - lo) / 2.0
    best: tuple[float, tuple[float, ...]] | None = None
    evaluated = 0
    for _ in range(refine_iterations):
        axes = [
            np.linspace(max(center[i] - half[i], lo[i]), min(center[i] + half[i], hi[i]), grid_points)
            for i in range(len(lo))
        ]
        mesh = np.meshgrid(*axes, indexing="ij")
        points = np.stack([m.reshape(-1) for m in mesh], axis=1)
        for row in points:
            params = tuple(float(v) for v in row)
            if not family.admissible(params):
                continue
            evaluated += 1
            value = norm_at(params)
            if best is None or value < best[0]:
                best = (value, params)
        if best is None:
            raise ValueError("family has no admissible implementations in the search box")
        center = np.array(best[1])
        half = half * 0.35
        if float(np.max(half)) < 1e-12:
            break
    assert best is not None
    return MinimizationResult(best[0], best[1], evaluated)


# ---------------------------------------------------------------------------
# Kronecker factorization

@dataclass(frozen=True)
class KronFactorization:
    """Result of the nearest-Kronecker-product rearrangement.

    When ``is_product``, the input equals scale * left (x) right with both
    factors unit Frobenius norm and the largest entry of ``left`` made real
    positive. Otherwise ``residual`` is the Frobenius distance to the best
    rank-one rearrangement.
    """

    is_product: bool
    left: np.ndarray | None
    right: np.ndarray | None
    scale: float | None
    residual: float

    def reconstruct(self) -> np.ndarray:
        if not self.is_product:
            raise ValueError("not a Kronecker product")
        return self.scale * np.kron(self.left, self.right)


def kron_factorize(m, dims: tuple[int, int]) -> KronFactorization:
    """Factor M into X (x) Y if possible, via the rearrangement SVD."""
    arr = _coerce(m)
    d1, d2 = int(dims[0]), int(dims[1])
    if arr.shape != (d1 * d2, d1 * d2):
        raise ValueError(f"matrix of dimension {arr.shape[0]} does not match dims {dims}")
    rearranged = arr.reshape(d1, d2, d1, d2).transpose(0, 2, 1, 3).reshape(d1 * d1, d2 * d2)
    u, s, vh = np.linalg.svd(rearranged)
    sigma1 = float(s[0])
    residual = float(np.sqrt(np.sum(s[1:] ** 2)))
    if residual > 1e-10 * max(1.0, sigma1):
        return KronFactorization(False, None, None, None, residual)
    left = u[:, 0].reshape(d1, d1)
    right = vh[0].reshape(d2, d2)
    anchor = np.unravel_index(int(np.argmax(np.abs(left))), left.shape)
    phase = left[anchor] / abs(left[anchor])
    left = left / phase
    right = right * phase
    return KronFactorization(True, left, right, sigma1, residual)


# ---------------------------------------------------------------------------
# commuting products of qubit observables: certification and search

def _rotation_to_su2(rot: np.ndarray) -> np.ndarray:
    # quaternion (x, y, z, w) maps to U = w I - i (x, y, z) . sigma, which
    # conjugates v . sigma to (R v) . sigma
    x, y, z, w = Rotation.from_matrix(rot).as_quat()
    return w * IDENTITY_2 - 1j * (x * PAULI_X + y * PAULI_Y + z * PAULI_Z)


def _frame_unitary(z_axis: np.ndarray, x_axis: np.ndarray) -> np.ndarray:
    """SU(2) element conjugating z_axis.sigma to sigma_z and x_axis.sigma to sigma_x."""
    y_axis = np.cross(z_axis, x_axis)
    rot = np.vstack([x_axis, y_axis, z_axis])
    return _rotation_to_su2(rot)


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


@dataclass(frozen=True)
class PropositionCertificate:
    status: str  # certified | degenerate | failed
    certified: bool
    commutator_norm: float
    scalar_residuals: tuple[float, float, float, float]
    axis_dots: tuple[float, float]
    transform_errors: tuple[float, float, float, float]
    u_left: np.ndarray | None
    u_right: np.ndarray | None


def proposition1_certify(
    p: ProductObservable,
    q: ProductObservable,
    commute_tol: float = 1e-10,
    cert_tol: float = 1e-8,
) -> PropositionCertificate:
    """Certify that a commuting pair of product observables is the canonical one.

    For commuting A (x) B and C (x) D in the generic branch (both cross
    products of Bloch axes nonzero), all four scalar parts must vanish and
    the axis pairs must be orthogonal; explicit single-qubit rotations are
    built that carry the four observables onto sigma_z, sigma_z, sigma_x,
    sigma_x up to scalar factors. Noncommuting input raises; the degenerate
    branch returns an uncertified result instead of raising.
    """
    pm, qm = p.to_matrix(), q.to_matrix()
    comm_norm = float(np.linalg.norm(pm @ qm - qm @ pm))
    if comm_norm > commute_tol:
        raise ValueError(f"inputs do not commute: ||[P,Q]||_F = {comm_norm:.3e} > {commute_tol:.0e}")

    obs = (p.left, q.left, p.right, q.right)  # A, C, B, D
    norms = [float(np.linalg.norm(o.vec)) for o in obs]
    if min(norms) < 1e-12:
        return PropositionCertificate(
            "degenerate", False, comm_norm, (np.inf,) * 4, (np.inf, np.inf), (np.inf,) * 4, None, None
        )
    a_hat, c_hat, b_hat, d_hat = (_unit(o.vec) for o in obs)
    if np.linalg.norm(np.cross(a_hat, c_hat)) <= 1e-8 or np.linalg.norm(np.cross(b_hat, d_hat)) <= 1e-8:
        scalars = tuple(abs(o.scalar) / n for o, n in zip(obs, norms))
        return PropositionCertificate(
            "degenerate", False, comm_norm, scalars, (np.inf, np.inf), (np.inf,) * 4, None, None
        )

    scalars = tuple(abs(o.scalar) / n for o, n in zip(obs, norms))
    dots = (abs(float(a_hat @ c_hat)), abs(float(b_hat @ d_hat)))

    c_perp = _unit(c_hat - (a_hat @ c_hat) * a_hat)
    d_perp = _unit(d_hat - (b_hat @ d_hat) * b_hat)
    u_left = _frame_unitary(a_hat, c_perp)
    u_right = _frame_unitary(b_hat, d_perp)

    def conjugation_error(u, axis, target):
        m = sum(c * pauli for c, pauli in zip(axis, _PAULIS))
        return float(np.max(np.abs(u @ m @ u.conj().T - target)))

    errors = (
        conjugation_error(u_left, a_hat, PAULI_Z),
        conjugation_error(u_left, c_hat, PAULI_X),
        conjugation_error(u_right, b_hat, PAULI_Z),
        conjugation_error(u_right, d_hat, PAULI_X),
    )
    certified = (
        max(scalars) <= cert_tol and max(dots) <= cert_tol and max(errors) <= cert_tol
    )
    return PropositionCertificate(
        "certified" if certified else "failed",
        certified,
        comm_norm,
        scalars,
        dots,
        errors,
        u_left,
        u_right,
    )


def haar_su2(rng: np.random.Generator) -> np.ndarray:
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    return q[3] * IDENTITY_2 - 1j * (q[0] * PAULI_X + q[1] * PAULI_Y + q[2] * PAULI_Z)


def dressed_canonical_quadruple(
    rng: np.random.Generator,
) -> tuple[ProductObservable, ProductObservable]:
    """Random local rotations and nonzero scales applied to the canonical pair."""
    u1, u2 = haar_su2(rng), haar_su2(rng)

    def scale():
        return float(rng.uniform(0.2, 2.0) * rng.choice([-1.0, 1.0]))

    def dress(u, base, s):
        return BlochObservable.from_matrix(s * (u @ base @ u.conj().T))

    first = ProductObservable(dress(u1, PAULI_Z, scale()), dress(u2, PAULI_Z, scale()))
    second = ProductObservable(dress(u1, PAULI_X, scale()), dress(u2, PAULI_X, scale()))
    return first, second


@dataclass(frozen=True)
class PropositionSearchReport:
    generic_samples: int
    dressed_samples: int
    seed: int
    false_commuters: int
    generic_min_norm: float
    generic_degenerate: int
    dressed_certified: int

    @property
    def all_dressed_certified(self) -> bool:
        return self.dressed_certified == self.dressed_samples


def proposition1_search(
    generic_samples: int, dressed_samples: int, seed: int
) -> PropositionSearchReport:
    """Statistical corroboration of the commuting-product structure result.

    Generic random Bloch quadruples must never commute (norm threshold 1e-8);
    quadruples dressed from the canonical pair must all certify. Reproducible
    from the seed alone.
    """
    if generic_samples < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(seed)
    false_commuters = 0
    degenerate = 0
    min_norm = math.inf
    for _ in range(generic_samples):
        quad = [BlochObservable(rng.normal(), rng.normal(size=3)) for _ in range(4)]
        pm = np.kron(quad[0].to_matrix(), quad[1].to_matrix())
        qm = np.kron(quad[2].to_matrix(), quad[3].to_matrix())
        norm = float(np.linalg.norm(pm @ qm - qm @ pm))
        min_norm = min(min_norm, norm)
        if norm <= 1e-8:
            false_commuters += 1
        if (
            np.linalg.norm(np.cross(quad[0].vec, quad[2].vec)) <= 1e-8
            or np.linalg.norm(np.cross(quad[1].vec, quad[3].vec)) <= 1e-8
        ):
            degenerate += 1
    certified = 0
    for _ in range(dressed_samples):
        first, second = dressed_canonical_quadruple(rng)
        if proposition1_certify(first, second).certified:
            certified += 1
    return PropositionSearchReport(
        generic_samples,
        dressed_samples,
        seed,
        false_commuters,
        min_norm,
        degenerate,
        certified,
    )
