"""Dense complex linear algebra on tensor-product spaces.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Tensor products
follow ``np.kron``: the left factor carries the slow index, so a bipartite
index ``(a, b)`` maps to ``a * d_b + b``.

States are sampled from explicit :class:`numpy.random.Generator` objects.  Any
function taking ``rng`` also accepts an integer seed, which is passed to
:func:`numpy.random.default_rng` (PCG64), so identical seeds give identical
draws.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
NORM_TOL = 1e-10

__all__ = [
    "InvalidStateError",
    "DensityReport",
    "BipartiteState",
    "as_rng",
    "ket",
    "dm",
    "hermitize",
    "tensor_product",
    "partial_trace",
    "ptrace",
    "purify",
    "validate_density",
    "as_density",
    "random_pure",
    "random_unitary",
    "random_mixed",
    "random_separable",
    "bell_state",
    "max_entangled",
]


class InvalidStateError(ValueError):
    """Raised when a matrix fails one of the density-matrix invariants."""


def as_rng(rng) -> np.random.Generator:
    """Return a Generator for ``rng`` (an int seed, a SeedSequence or a Generator)."""
    return np.random.default_rng(rng)


def ket(vec) -> np.ndarray:
    """Return ``vec`` as a 1-d complex array after checking that its norm is 1."""
    v = np.asarray(vec, dtype=complex).ravel()
    if v.size == 0 or abs(np.linalg.norm(v) - 1.0) > NORM_TOL:
        raise InvalidStateError(f"state vector not normalized (norm={np.linalg.norm(v)!r})")
    return v


def dm(vec) -> np.ndarray:
    """Projector |v><v| for a state vector."""
    v = np.asarray(vec, dtype=complex).ravel()
    return np.outer(v, v.conj())


def hermitize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def tensor_product(*ops) -> np.ndarray:
    """Kronecker product of any number of matrices or vectors, left factor slowest."""
    if not ops:
        raise ValueError("tensor_product needs at least one factor")
    return reduce(np.kron, (np.asarray(op, dtype=complex) for op in ops))


@dataclass(frozen=True)
class DensityReport:
    """Residuals of a density-matrix candidate against each invariant."""

    hermiticity: float
    trace: float
    min_eigenvalue: float

    @property
    def hermitian_ok(self) -> bool:
        return self.hermiticity <= HERMITIAN_TOL

    @property
    def trace_ok(self) -> bool:
        return self.trace <= TRACE_TOL

    @property
    def psd_ok(self) -> bool:
        return self.min_eigenvalue >= -PSD_TOL

    @property
    def passed(self) -> bool:
        return self.hermitian_ok and self.trace_ok and self.psd_ok

    def failures(self) -> list[str]:
        out = []
        if not self.hermitian_ok:
            out.append(f"hermiticity residual {self.hermiticity:.3e} > {HERMITIAN_TOL:g}")
        if not self.trace_ok:
            out.append(f"trace residual {self.trace:.3e} > {TRACE_TOL:g}")
        if not self.psd_ok:
            out.append(f"min eigenvalue {self.min_eigenvalue:.3e} < -{PSD_TOL:g}")
        return out


def validate_density(m) -> DensityReport:
    """Measure how far a square matrix is from being a density matrix.

    Raises
    ------
    ValueError
        If ``m`` is not a square 2-d array.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ValueError(f"expected a non-empty square matrix, got shape {m.shape}")
    herm = float(np.max(np.abs(m - m.conj().T)))
    tr = float(abs(np.trace(m) - 1.0))
    min_eig = float(np.linalg.eigvalsh(hermitize(m))[0])
    return DensityReport(herm, tr, min_eig)


def as_density(m) -> np.ndarray:
    """Validate ``m`` and return it as a Hermitized complex array.

    Raises :class:`InvalidStateError` naming every violated invariant.
    """
    m = np.asarray(m, dtype=complex)
    report = validate_density(m)
    if not report.passed:
        raise InvalidStateError("invalid density matrix: " + "; ".join(report.failures()))
    return hermitize(m)


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """A density matrix on A (x) B with its declared dimension split.

    ``separable`` records that the state was *constructed* as a mixture of
    product states; it is never inferred.
    """

    rho: np.ndarray
    dim_a: int
    dim_b: int
    separable: bool = False

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        if self.dim_a < 1 or self.dim_b < 1:
            raise ValueError("subsystem dimensions must be positive")
        n = self.dim_a * self.dim_b
        if rho.shape != (n, n):
            raise ValueError(
                f"matrix shape {rho.shape} does not match split {self.dim_a}x{self.dim_b}"
            )
        object.__setattr__(self, "rho", as_density(rho))

    @property
    def dims(self) -> tuple[int, int]:
        return (self.dim_a, self.dim_b)

    @property
    def rho_a(self) -> np.ndarray:
        return partial_trace(self, "A")

    @property
    def rho_b(self) -> np.ndarray:
        return partial_trace(self, "B")

    @classmethod
    def from_pure(cls, vec, dim_a: int, dim_b: int) -> "BipartiteState":
        return cls(dm(ket(vec)), dim_a, dim_b)

    @classmethod
    def product(cls, rho_a, rho_b) -> "BipartiteState":
        rho_a = np.asarray(rho_a, dtype=complex)
        rho_b = np.asarray(rho_b, dtype=complex)
        return cls(np.kron(rho_a, rho_b), rho_a.shape[0], rho_b.shape[0], separable=True)


def ptrace(rho: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Partial trace of ``rho`` on a multipartite space, keeping subsystems ``keep``.

    ``dims`` lists the subsystem dimensions in tensor order; ``keep`` is a
    sequence of subsystem indices (returned in ascending order).
    """
    dims = [int(d) for d in dims]
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    total = int(np.prod(dims))
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (total, total):
        raise ValueError(f"matrix shape {rho.shape} does not match dims {dims}")
    t = rho.reshape(dims + dims)
    drop = [i for i in range(n) if i not in keep]
    # einsum indices: row labels 0..n-1, column labels n..2n-1; traced pairs share a label
    row = list(range(n))
    col = [i if i in drop else n + i for i in range(n)]
    out = [i for i in keep] + [n + i for i in keep]
    red = np.einsum(t, row + col, out)
    dk = int(np.prod([dims[i] for i in keep])) if keep else 1
    return red.reshape(dk, dk)


def partial_trace(s: BipartiteState, keep: str = "A") -> np.ndarray:
    """Reduced state of a bipartite state; ``keep`` is ``"A"`` or ``"B"``."""
    keep = keep.upper()
    if keep not in ("A", "B"):
        raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")
    t = s.rho.reshape(s.dim_a, s.dim_b, s.dim_a, s.dim_b)
    if keep == "A":
        return np.einsum("ijkj->ik", t)
    return np.einsum("ijil->jl", t)


def purify(rho, tol: float = 0.0) -> np.ndarray:
    """Purification ``sum_i sqrt(l_i) |i>_ref (x) |v_i>`` of a density matrix.

    The reference factor comes first.  With ``tol == 0`` the reference has the
    same dimension as the system; a positive ``tol`` keeps only eigenvalues
    above it and shrinks the reference to the retained rank.
    """
    rho = hermitize(np.asarray(rho, dtype=complex))
    evals, evecs = np.linalg.eigh(rho)
    evals = np.clip(evals, 0.0, None)
    if tol > 0:
        idx = np.nonzero(evals > tol)[0]
        evals, evecs = evals[idx], evecs[:, idx]
    r = evals.size
    # amplitude matrix psi[i, s] = sqrt(l_i) * v_i[s]
    psi = np.sqrt(evals)[:, None] * evecs.T
    vec = psi.reshape(r * rho.shape[0])
    return vec / np.linalg.norm(vec)


def random_pure(d: int, rng=None) -> np.ndarray:
    """Haar-random state vector in dimension ``d``."""
    if d < 1:
        raise ValueError("dimension must be at least 1")
    rng = as_rng(rng)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_unitary(d: int, rng=None) -> np.ndarray:
    """Haar-random ``d x d`` unitary (QR of a Ginibre matrix with phase fix)."""
    if d < 1:
        raise ValueError("dimension must be at least 1")
    rng = as_rng(rng)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def random_mixed(d: int, rank: int | None = None, rng=None) -> np.ndarray:
    """Random density matrix from the induced measure.

    Obtained by tracing a ``rank``-dimensional ancilla out of a Haar-random pure
    state on ``d x rank``; ``rank=None`` uses ``rank = d`` (Hilbert-Schmidt).
    """
    if d < 1:
        raise ValueError("dimension must be at least 1")
    rank = d if rank is None else int(rank)
    if rank < 1:
        raise ValueError("rank must be at least 1")
    rng = as_rng(rng)
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    return hermitize(rho / np.trace(rho).real)


def random_separable(d_a: int, d_b: int, terms: int, rng=None) -> BipartiteState:
    """Flat-Dirichlet mixture of ``terms`` Haar-random pure product states."""
    if terms < 1:
        raise ValueError("terms must be at least 1")
    rng = as_rng(rng)
    w = rng.standard_exponential(terms)
    w /= w.sum()
    rho = np.zeros((d_a * d_b, d_a * d_b), dtype=complex)
    for wk in w:
        a = random_pure(d_a, rng)
        b = random_pure(d_b, rng)
        rho += wk * dm(np.kron(a, b))
    return BipartiteState(rho, d_a, d_b, separable=True)


def max_entangled(d: int) -> np.ndarray:
    """The vector ``sum_i |ii> / sqrt(d)``."""
    return np.eye(d, dtype=complex).ravel() / np.sqrt(d)


def bell_state() -> BipartiteState:
    """|Phi+><Phi+| on two qubits."""
    return BipartiteState.from_pure(max_entangled(2), 2, 2)
