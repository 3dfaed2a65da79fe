"""Dense complex linear algebra for small multipartite systems.

Carriers and primitive operations: tensor products, partial trace and
transpose, spectral and Schmidt decompositions, entropies, dephasing,
negativity. All logarithms are base 2, so entropies and information are in
bits. Every function is pure and all stored arrays are read-only, so values
can be shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


class NotAStateError(ValueError):
    """The matrix fails a density-matrix check (trace, positivity, hermiticity)."""


def _frozen(a) -> np.ndarray:
    out = np.array(a, dtype=complex)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class ComplexMatrix:
    """Square complex matrix with an attached list of subsystem dimensions.

    ``dims`` may be empty for dimensionless use; when nonempty its product
    must equal the matrix dimension.
    """

    entries: np.ndarray
    dims: tuple[int, ...] = ()

    def __post_init__(self):
        arr = _frozen(self.entries)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"square matrix required, got shape {arr.shape}")
        dims = tuple(int(d) for d in self.dims)
        if dims and math.prod(dims) != arr.shape[0]:
            raise ValueError(f"product of dims {dims} != matrix dimension {arr.shape[0]}")
        object.__setattr__(self, "entries", arr)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def block_dims(self) -> tuple[int, ...]:
        return self.dims if self.dims else (self.dim,)

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return self.hermiticity_defect() <= tol

    def require_hermitian(self, tol: float = HERMITIAN_TOL) -> None:
        defect = self.hermiticity_defect()
        if defect > tol:
            raise ValueError(f"matrix not Hermitian: max |M - M^dag| = {defect:.3e} > {tol:.0e}")


def as_array(m) -> np.ndarray:
    """Unwrap ComplexMatrix / BipartiteState / array-like into a complex ndarray."""
    if isinstance(m, BipartiteState):
        return m.matrix.entries
    if isinstance(m, ComplexMatrix):
        return m.entries
    return np.asarray(m, dtype=complex)


def dims_of(m, fallback: tuple[int, ...] | None = None) -> tuple[int, ...]:
    if isinstance(m, BipartiteState):
        return m.matrix.dims
    if isinstance(m, ComplexMatrix):
        return m.block_dims()
    if fallback is not None:
        return tuple(fallback)
    return (np.asarray(m).shape[0],)


@dataclass(frozen=True)
class BipartiteState:
    """Density matrix on d_A (x) d_B, optionally with the pure ket it came from.

    Subsystem 0 is Alice (the leftmost tensor factor).
    """

    matrix: ComplexMatrix
    ket: np.ndarray | None = None

    def __post_init__(self):
        if len(self.matrix.dims) != 2:
            raise NotAStateError(f"bipartite dims required, got {self.matrix.dims}")
        if self.ket is not None:
            object.__setattr__(self, "ket", _frozen(self.ket).reshape(-1))

    @classmethod
    def from_ket(cls, ket, dims: tuple[int, int] = (2, 2)) -> "BipartiteState":
        vec = np.asarray(ket, dtype=complex).reshape(-1)
        norm = float(np.linalg.norm(vec))
        if norm < 1e-12:
            raise NotAStateError("zero ket")
        vec = vec / norm
        if vec.size != dims[0] * dims[1]:
            raise NotAStateError(f"ket of length {vec.size} does not match dims {dims}")
        rho = np.outer(vec, vec.conj())
        return cls(ComplexMatrix(rho, tuple(dims)), ket=vec)

    @classmethod
    def from_density(cls, rho, dims: tuple[int, int] = (2, 2)) -> "BipartiteState":
        mat = ComplexMatrix(rho, tuple(dims))
        mat.require_hermitian(HERMITIAN_TOL)
        tr = complex(np.trace(mat.entries))
        if abs(tr - 1.0) > 1e-12:
            raise NotAStateError(f"trace {tr} != 1")
        lo = float(np.min(np.linalg.eigvalsh(mat.entries)))
        if lo < -PSD_TOL:
            raise NotAStateError(f"negative eigenvalue {lo:.3e}")
        return cls(mat)

    @property
    def is_pure(self) -> bool:
        return self.ket is not None

    @property
    def dim_a(self) -> int:
        return self.matrix.dims[0]

    @property
    def dim_b(self) -> int:
        return self.matrix.dims[1]

    @property
    def n_qubits(self) -> float:
        """log2 of the total dimension (integral for qubit registers)."""
        return math.log2(self.dim_a * self.dim_b)

    def purity(self) -> float:
        rho = self.matrix.entries
        return float(np.real(np.trace(rho @ rho)))


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray  # real, descending
    eigenvectors: np.ndarray  # orthonormal columns, matching order

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def spectral(m) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending."""
    arr = as_array(m)
    vals, vecs = np.linalg.eigh(arr)
    order = np.argsort(vals)[::-1]
    return SpectralDecomposition(_frozen(vals[order]).real, _frozen(vecs[:, order]))


@dataclass(frozen=True)
class SchmidtForm:
    """Canonical bipartite pure-state form: nonincreasing coefficients and bases."""

    coefficients: np.ndarray  # nonnegative, squares sum to 1
    left: np.ndarray  # d_A x k, orthonormal columns
    right: np.ndarray  # d_B x k, orthonormal columns
    rank: int

    def reconstruct(self) -> np.ndarray:
        terms = [
            c * np.kron(self.left[:, i], self.right[:, i])
            for i, c in enumerate(self.coefficients)
        ]
        return np.sum(terms, axis=0)

    def entropy_bits(self) -> float:
        probs = np.clip(self.coefficients**2, 0.0, 1.0)
        return -math.fsum(p * math.log2(p) for p in probs if p > 0)


def schmidt(ket, dims: tuple[int, int], cutoff: float = 1e-12) -> SchmidtForm:
    """Schmidt decomposition of a normalized ket on d_A (x) d_B."""
    vec = np.asarray(ket, dtype=complex).reshape(-1)
    if abs(np.linalg.norm(vec) - 1.0) > 1e-9:
        raise ValueError("ket must be normalized")
    d_a, d_b = dims
    coeff = vec.reshape(d_a, d_b)
    u, s, vh = np.linalg.svd(coeff)
    k = min(d_a, d_b)
    rank = int(np.sum(s > cutoff))
    return SchmidtForm(_frozen(s[:k]).real, _frozen(u[:, :k]), _frozen(vh[:k].T), rank)


def tensor(a, b) -> ComplexMatrix:
    """Kronecker product; subsystem dimensions concatenate."""
    arr = np.kron(as_array(a), as_array(b))
    return ComplexMatrix(arr, dims_of(a) + dims_of(b))


def partial_trace_dims(rho, dims, keep) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep`` (indices into dims)."""
    dims = tuple(int(d) for d in dims)
    keep = set(keep)
    out = np.asarray(rho, dtype=complex).reshape(dims + dims)
    cur = list(dims)
    for idx in sorted((i for i in range(len(dims)) if i not in keep), reverse=True):
        out = np.trace(out, axis1=idx, axis2=idx + len(cur))
        cur.pop(idx)
    d = math.prod(cur) if cur else 1
    return out.reshape(d, d)


def partial_trace(state, keep: str = "A") -> ComplexMatrix:
    """Reduced density matrix of one party of a bipartite state."""
    dims = dims_of(state)
    if len(dims) != 2:
        raise ValueError(f"bipartite dims required, got {dims}")
    if keep not in ("A", "B"):
        raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")
    idx = 0 if keep == "A" else 1
    red = partial_trace_dims(as_array(state), dims, [idx])
    return ComplexMatrix(red, (dims[idx],))


def partial_transpose(state, side: str = "A") -> ComplexMatrix:
    """Transpose one subsystem of a bipartite matrix; an involution per side."""
    dims = dims_of(state)
    if len(dims) != 2:
        raise ValueError(f"bipartite dims required, got {dims}")
    d_a, d_b = dims
    four = as_array(state).reshape(d_a, d_b, d_a, d_b)
    if side == "A":
        out = four.transpose(2, 1, 0, 3)
    elif side == "B":
        out = four.transpose(0, 3, 2, 1)
    else:
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    return ComplexMatrix(out.reshape(d_a * d_b, d_a * d_b), dims)


def von_neumann_entropy(m) -> float:
    """Entropy -sum(lambda log2 lambda) in bits of a unit-trace PSD matrix."""
    arr = as_array(m)
    defect = float(np.max(np.abs(arr - arr.conj().T)))
    if defect > 1e-10:
        raise NotAStateError(f"not Hermitian: defect {defect:.3e}")
    if abs(complex(np.trace(arr)) - 1.0) > 1e-9:
        raise NotAStateError(f"trace {np.trace(arr)} != 1")
    vals = np.linalg.eigvalsh(arr)
    if float(vals.min()) < -PSD_TOL:
        raise NotAStateError(f"negative eigenvalue {vals.min():.3e}")
    vals = np.clip(vals, 0.0, 1.0)
    return -math.fsum(v * math.log2(v) for v in vals if v > 0.0)


def shannon_entropy(p) -> float:
    """Entropy of a probability vector in bits, with 0 log 0 = 0."""
    probs = np.asarray(p, dtype=float).reshape(-1)
    if float(probs.min(initial=0.0)) < -1e-12:
        raise ValueError(f"negative probability {probs.min():.3e}")
    total = math.fsum(probs)
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {total}, not 1")
    return -math.fsum(q * math.log2(q) for q in probs if q > 0.0)


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def negativity(state) -> float:
    """Sum of |negative eigenvalues| of the partial transpose; 0 for PPT states."""
    vals = np.linalg.eigvalsh(partial_transpose(state, "A").entries)
    return float(-np.sum(vals[vals < 0.0]))


def _dephase_array(rho: np.ndarray, dims, subsystem: int, basis: np.ndarray | None) -> np.ndarray:
    dims = tuple(int(d) for d in dims)
    d = dims[subsystem]
    if basis is None:
        basis = np.eye(d, dtype=complex)
    else:
        basis = np.asarray(basis, dtype=complex)
        gram = basis.conj().T @ basis
        if np.max(np.abs(gram - np.eye(d))) > 1e-10:
            raise ValueError("dephasing basis is not orthonormal")
    pre = math.prod(dims[:subsystem]) if subsystem else 1
    post = math.prod(dims[subsystem + 1 :]) if subsystem + 1 < len(dims) else 1
    out = np.zeros_like(rho)
    for j in range(d):
        proj = np.outer(basis[:, j], basis[:, j].conj())
        full = np.kron(np.kron(np.eye(pre, dtype=complex), proj), np.eye(post, dtype=complex))
        out += full @ rho @ full
    return out


def dephase(x, subsystem: int = 0, basis: np.ndarray | None = None):
    """Zero all coherences of one subsystem in the given orthonormal basis.

    Trace preserving, idempotent, entropy non-decreasing. Returns the same
    carrier type as the input (BipartiteState results lose purity tracking).
    """
    if isinstance(x, BipartiteState):
        out = _dephase_array(x.matrix.entries, x.matrix.dims, subsystem, basis)
        return BipartiteState.from_density(out, x.matrix.dims)
    if isinstance(x, ComplexMatrix):
        return ComplexMatrix(_dephase_array(x.entries, x.block_dims(), subsystem, basis), x.dims)
    arr = np.asarray(x, dtype=complex)
    return _dephase_array(arr, (arr.shape[0],), subsystem, basis)


def fidelity_pure(ket, m) -> float:
    """<psi| m |psi>, clipped to [0, 1]."""
    vec = np.asarray(ket, dtype=complex).reshape(-1)
    val = float(np.real(vec.conj() @ as_array(m) @ vec))
    return min(max(val, 0.0), 1.0)


# ---------------------------------------------------------------------------
# named kets and convenience constructors

def basis_ket(dim: int, index: int) -> np.ndarray:
    vec = np.zeros(dim, dtype=complex)
    vec[index] = 1.0
    return vec


def bell_ket(which: str) -> np.ndarray:
    """Bell states on two qubits: psi_minus is the singlet (|01> - |10>)/sqrt2."""
    table = {
        "psi_minus": ((0, 1, 1), (1, 0, -1)),
        "psi_plus": ((0, 1, 1), (1, 0, 1)),
        "phi_plus": ((0, 0, 1), (1, 1, 1)),
        "phi_minus": ((0, 0, 1), (1, 1, -1)),
    }
    if which not in table:
        raise ValueError(f"unknown Bell state {which!r}")
    vec = np.zeros(4, dtype=complex)
    for a, b, sign in table[which]:
        vec[2 * a + b] = sign / math.sqrt(2)
    return vec


def singlet_ket() -> np.ndarray:
    return bell_ket("psi_minus")


def schmidt_ket(a2: float) -> np.ndarray:
    """sqrt(a2)|00> + sqrt(1-a2)|11>."""
    if not 0.0 <= a2 <= 1.0:
        raise ValueError(f"a2 must lie in [0, 1], got {a2}")
    vec = np.zeros(4, dtype=complex)
    vec[0] = math.sqrt(a2)
    vec[3] = math.sqrt(1.0 - a2)
    return vec


def maximally_mixed(dims: tuple[int, int]) -> BipartiteState:
    d = dims[0] * dims[1]
    return BipartiteState(ComplexMatrix(np.eye(d, dtype=complex) / d, tuple(dims)))


def haar_ket(dim: int, rng: np.random.Generator) -> np.ndarray:
    vec = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return vec / np.linalg.norm(vec)
