"""Entropic functionals.  All logarithms are base 2, so values are in bits."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .qmat import BipartiteState, as_density, hermitize

EIG_CLAMP = 1e-12
PROB_TOL = 1e-9

__all__ = [
    "entropy_from_eigenvalues",
    "von_neumann_entropy",
    "shannon_entropy",
    "probability_vector",
    "mutual_information",
    "holevo_quantity",
    "subsystem_entropies",
]


def entropy_from_eigenvalues(evals) -> float:
    """``-sum l log2 l`` with values below the clamp threshold treated as zero."""
    lam = np.asarray(evals, dtype=float)
    lam = lam[lam > EIG_CLAMP]
    return float(max(0.0, -np.sum(lam * np.log2(lam))))


def von_neumann_entropy(rho, validate: bool = True) -> float:
    """Von Neumann entropy ``-Tr[rho log2 rho]``.

    Parameters
    ----------
    rho : array_like
        Density matrix.
    validate : bool
        Check the density-matrix invariants first (raises
        :class:`~qcorr.qmat.InvalidStateError` on failure).
    """
    rho = as_density(rho) if validate else hermitize(np.asarray(rho, dtype=complex))
    return entropy_from_eigenvalues(np.linalg.eigvalsh(rho))


def probability_vector(p) -> np.ndarray:
    """Check that ``p`` is a probability vector and clamp tiny negatives to zero."""
    p = np.asarray(p, dtype=float).ravel()
    if p.size == 0:
        raise ValueError("empty probability vector")
    if np.any(p < -1e-12):
        raise ValueError(f"negative probability {p.min():.3e}")
    if abs(p.sum() - 1.0) > PROB_TOL:
        raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")
    return np.clip(p, 0.0, None)


def shannon_entropy(p) -> float:
    """Shannon entropy of a probability vector, in bits (``0 log 0 = 0``)."""
    p = probability_vector(p)
    nz = p[p > 0]
    return float(max(0.0, -np.sum(nz * np.log2(nz))))


def subsystem_entropies(s: BipartiteState) -> tuple[float, float, float]:
    """Return ``(S(rho_A), S(rho_B), S(rho_AB))``."""
    return (
        von_neumann_entropy(s.rho_a, validate=False),
        von_neumann_entropy(s.rho_b, validate=False),
        von_neumann_entropy(s.rho, validate=False),
    )


def mutual_information(s: BipartiteState) -> float:
    """Quantum mutual information ``S(A) + S(B) - S(AB)``."""
    s_a, s_b, s_ab = subsystem_entropies(s)
    return s_a + s_b - s_ab


def holevo_quantity(weights, states: Sequence[np.ndarray]) -> float:
    """Holevo quantity of the ensemble ``{weights[i], states[i]}``.

    Evaluated from the definition: entropy of the average state minus the
    average entropy of the members.
    """
    w = probability_vector(weights)
    if len(states) != w.size:
        raise ValueError(f"{w.size} weights for {len(states)} states")
    mats = [np.asarray(st, dtype=complex) for st in states]
    d = mats[0].shape
    if any(m.shape != d for m in mats):
        raise ValueError("ensemble states must share one dimension")
    avg = sum(wi * m for wi, m in zip(w, mats))
    s_avg = von_neumann_entropy(avg, validate=False)
    return s_avg - float(sum(wi * von_neumann_entropy(m) for wi, m in zip(w, mats)))
