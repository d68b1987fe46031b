"""Rank-one von Neumann measurements on the B side of a bipartite state."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .entropy import EIG_CLAMP, holevo_quantity, probability_vector
from .qmat import BipartiteState, hermitize

ORTHO_TOL = 1e-9
DROP_TOL = 1e-12

__all__ = [
    "VonNeumannMeasurement",
    "ConditionalEnsemble",
    "measurement_from_unitary",
    "computational_basis",
    "apply_nonselective",
    "dephase",
    "conditional_ensemble",
    "measured_mutual_information",
]


@dataclass(frozen=True, eq=False)
class VonNeumannMeasurement:
    """Projective measurement onto the columns of a unitary."""

    unitary: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.unitary, dtype=complex)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise ValueError(f"basis matrix must be square, got shape {u.shape}")
        resid = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
        if resid > ORTHO_TOL:
            raise ValueError(f"basis is not orthonormal (residual {resid:.3e})")
        object.__setattr__(self, "unitary", u)

    @property
    def dim(self) -> int:
        return self.unitary.shape[0]

    @property
    def basis(self) -> list[np.ndarray]:
        return [self.unitary[:, j] for j in range(self.dim)]

    def projectors(self) -> np.ndarray:
        """Stack of rank-one projectors, shape ``(dim, dim, dim)``."""
        u = self.unitary
        return np.einsum("aj,bj->jab", u, u.conj())


@dataclass(frozen=True, eq=False)
class ConditionalEnsemble:
    """Outcome statistics ``{p_j}`` and post-measurement states of A."""

    probs: np.ndarray
    states: list[np.ndarray]
    kept: list[int]

    def average(self) -> np.ndarray:
        return sum(p * st for p, st in zip(self.probs, self.states))


def measurement_from_unitary(u, dim: int | None = None) -> VonNeumannMeasurement:
    u = np.asarray(u, dtype=complex)
    if dim is not None and u.shape != (dim, dim):
        raise ValueError(f"expected a {dim}x{dim} unitary, got shape {u.shape}")
    return VonNeumannMeasurement(u)


def computational_basis(dim: int) -> VonNeumannMeasurement:
    return VonNeumannMeasurement(np.eye(dim, dtype=complex))


def _check(s: BipartiteState, m: VonNeumannMeasurement):
    if m.dim != s.dim_b:
        raise ValueError(f"measurement on dimension {m.dim} but subsystem B has {s.dim_b}")


def dephase(rho: np.ndarray, m: VonNeumannMeasurement) -> np.ndarray:
    """``sum_j P_j rho P_j`` for a single system."""
    projs = m.projectors()
    return np.einsum("jab,bc,jcd->ad", projs, rho, projs)


def apply_nonselective(s: BipartiteState, m: VonNeumannMeasurement) -> BipartiteState:
    """Nonselective measurement of B: ``sum_j (1 (x) P_j) rho (1 (x) P_j)``."""
    _check(s, m)
    projs = m.projectors()
    t = s.rho.reshape(s.dim_a, s.dim_b, s.dim_a, s.dim_b)
    out = np.einsum("jbc,acde,jef->abdf", projs, t, projs)
    n = s.dim_a * s.dim_b
    return BipartiteState(out.reshape(n, n), s.dim_a, s.dim_b, separable=s.separable)


def _unnormalized_branches(s: BipartiteState, u: np.ndarray) -> np.ndarray:
    """``<psi_j|rho_AB|psi_j>`` for each column ``psi_j`` of ``u``; shape ``(d_b, d_a, d_a)``."""
    t = s.rho.reshape(s.dim_a, s.dim_b, s.dim_a, s.dim_b)
    return np.einsum("bj,abce,ej->jac", u.conj(), t, u)


def conditional_ensemble(s: BipartiteState, m: VonNeumannMeasurement) -> ConditionalEnsemble:
    """Outcome probabilities and conditional states of A.

    Outcomes with probability below ``1e-12`` are dropped and the survivors
    renormalized; ``kept`` lists the surviving outcome labels.
    """
    _check(s, m)
    branches = _unnormalized_branches(s, m.unitary)
    p = np.real(np.einsum("jaa->j", branches))
    kept = [j for j in range(m.dim) if p[j] >= DROP_TOL]
    pk = p[kept]
    states = [hermitize(branches[j] / p[j]) for j in kept]
    return ConditionalEnsemble(probability_vector(pk / pk.sum()), states, kept)


def measured_mutual_information(s: BipartiteState, m: VonNeumannMeasurement) -> float:
    """Mutual information after measuring B, evaluated as the Holevo quantity
    of the conditional ensemble of A."""
    ens = conditional_ensemble(s, m)
    return holevo_quantity(ens.probs, ens.states)


def _eigvalsh_small(m: np.ndarray) -> np.ndarray:
    """Eigenvalues of stacked Hermitian matrices, closed form for 1x1 and 2x2."""
    d = m.shape[-1]
    if d == 1:
        return np.real(m[..., 0])
    if d == 2:
        a, c = np.real(m[..., 0, 0]), np.real(m[..., 1, 1])
        b = m[..., 0, 1]
        mid = 0.5 * (a + c)
        rad = np.sqrt((0.5 * (a - c)) ** 2 + np.real(b * np.conj(b)))
        return np.stack([mid - rad, mid + rad], axis=-1)
    return np.linalg.eigvalsh(m)


def branch_entropy_sum(branches: np.ndarray) -> np.ndarray:
    """``sum_j p_j S(sigma_j / p_j)`` for stacks of unnormalized branches.

    ``branches`` has shape ``(..., k, d, d)``; the reduction runs over ``k``.
    Uses ``p S(sigma/p) = -sum mu log mu + p log p`` with ``mu`` the
    eigenvalues of ``sigma``.
    """
    mu = _eigvalsh_small(branches)
    mu = np.where(mu > EIG_CLAMP, mu, 0.0)
    p = mu.sum(axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        h_mu = np.where(mu > 0, mu * np.log2(np.where(mu > 0, mu, 1.0)), 0.0).sum(axis=-1)
        h_p = np.where(p > 0, p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return (h_p - h_mu).sum(axis=-1)
