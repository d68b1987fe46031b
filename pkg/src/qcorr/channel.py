"""Quantum channels in Kraus form, their Stinespring dilations and complements."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .entropy import von_neumann_entropy
from .measurement import DROP_TOL, VonNeumannMeasurement
from .qmat import BipartiteState, as_rng, hermitize, ket, max_entangled

COMPLETENESS_TOL = 1e-9

__all__ = [
    "KrausChannel",
    "StinespringIsometry",
    "kraus_apply",
    "stinespring_isometry",
    "dilate",
    "complementary_apply",
    "exchange_entropy",
    "extend_identity",
    "choi_matrix",
    "erase_channel",
    "random_channel",
    "unitary_channel",
    "dephasing_channel",
    "branch_ensemble",
]


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Trace-preserving map ``rho -> sum_mu M_mu rho M_mu^dagger``.

    ``kraus`` is stored as an array of shape ``(K, dim_out, dim_in)``.
    """

    kraus: np.ndarray

    def __post_init__(self):
        ops = np.asarray(self.kraus, dtype=complex)
        if ops.ndim == 2:
            ops = ops[None]
        if ops.ndim != 3 or ops.shape[0] < 1:
            raise ValueError("expected a non-empty list of Kraus matrices")
        resid = completeness_residual(ops)
        if resid > COMPLETENESS_TOL:
            raise ValueError(f"Kraus operators are not complete (residual {resid:.3e})")
        object.__setattr__(self, "kraus", ops)

    @property
    def num_kraus(self) -> int:
        return self.kraus.shape[0]

    @property
    def dim_in(self) -> int:
        return self.kraus.shape[2]

    @property
    def dim_out(self) -> int:
        return self.kraus.shape[1]

    def __call__(self, rho):
        return kraus_apply(self, rho)


def completeness_residual(ops) -> float:
    ops = np.asarray(ops, dtype=complex)
    gram = np.einsum("kji,kjl->il", ops.conj(), ops)
    return float(np.max(np.abs(gram - np.eye(ops.shape[2]))))


@dataclass(frozen=True, eq=False)
class StinespringIsometry:
    """``V : H_in -> H_out (x) C^K`` with the environment as the right factor."""

    matrix: np.ndarray
    dim_in: int
    dim_out: int
    dim_env: int

    def isometry_residual(self) -> float:
        v = self.matrix
        return float(np.max(np.abs(v.conj().T @ v - np.eye(self.dim_in))))


def _check_input(ch: KrausChannel, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (ch.dim_in, ch.dim_in):
        raise ValueError(f"channel acts on dimension {ch.dim_in}, got state of shape {rho.shape}")
    return rho


def kraus_apply(ch: KrausChannel, rho) -> np.ndarray:
    rho = _check_input(ch, rho)
    m = ch.kraus
    return hermitize(np.einsum("kij,jl,kml->im", m, rho, m.conj()))


def stinespring_isometry(ch: KrausChannel) -> StinespringIsometry:
    """``V|psi> = sum_mu M_mu|psi> (x) |mu>``."""
    k, d_out, d_in = ch.kraus.shape
    # row index (i, mu) -> i * K + mu
    v = np.transpose(ch.kraus, (1, 0, 2)).reshape(d_out * k, d_in)
    return StinespringIsometry(v, d_in, d_out, k)


def dilate(ch: KrausChannel, rho) -> np.ndarray:
    """The joint output-environment state ``V rho V^dagger``."""
    rho = _check_input(ch, rho)
    v = stinespring_isometry(ch).matrix
    return v @ rho @ v.conj().T


def complementary_apply(ch: KrausChannel, rho) -> np.ndarray:
    """Environment output: the ``K x K`` matrix of entries ``Tr[M_mu rho M_nu^dagger]``."""
    rho = _check_input(ch, rho)
    m = ch.kraus
    return hermitize(np.einsum("uij,jl,vil->uv", m, rho, m.conj()))


def exchange_entropy(ch: KrausChannel, rho) -> float:
    return von_neumann_entropy(complementary_apply(ch, rho), validate=False)


def extend_identity(ch: KrausChannel, d_r: int) -> KrausChannel:
    """``1_R (x) Phi`` on ``R (x) Q`` with Kraus operators ``I (x) M_mu``."""
    if d_r < 1:
        raise ValueError("reference dimension must be at least 1")
    eye = np.eye(d_r, dtype=complex)
    return KrausChannel(np.stack([np.kron(eye, m) for m in ch.kraus]))


def choi_matrix(ch: KrausChannel) -> BipartiteState:
    """Unit-trace Choi state ``(1 (x) Phi)(|Omega><Omega|)``, reference factor first."""
    d = ch.dim_in
    omega = max_entangled(d)
    ext = extend_identity(ch, d)
    rho = kraus_apply(ext, np.outer(omega, omega.conj()))
    return BipartiteState(rho, d, ch.dim_out)


def erase_channel(basis: VonNeumannMeasurement, omega, d_a: int) -> KrausChannel:
    """Channel on ``A (x) B`` with Kraus operators ``1_A (x) |omega><psi_j|``.

    Its action is ``sigma -> Tr_B[sigma] (x) |omega><omega|`` for every basis.
    """
    w = ket(omega)
    if w.size != basis.dim:
        raise ValueError(f"omega has dimension {w.size}, basis has {basis.dim}")
    eye = np.eye(d_a, dtype=complex)
    return KrausChannel(np.stack([np.kron(eye, np.outer(w, psi.conj())) for psi in basis.basis]))


def unitary_channel(u) -> KrausChannel:
    return KrausChannel(np.asarray(u, dtype=complex)[None])


def dephasing_channel(d: int) -> KrausChannel:
    """Complete dephasing in the computational basis."""
    return KrausChannel(np.stack([np.diag(np.eye(d)[j]).astype(complex) for j in range(d)]))


def random_channel(d: int, k: int, rng=None) -> KrausChannel:
    """Random channel from a Haar-random isometry ``C^d -> C^d (x) C^k``.

    The ``(d k) x d`` isometry is the phase-fixed QR factor of a Gaussian
    matrix; its rows are sliced into ``k`` Kraus operators.
    """
    if k < 1 or d < 1:
        raise ValueError("dimension and Kraus rank must be at least 1")
    rng = as_rng(rng)
    z = rng.standard_normal((d * k, d)) + 1j * rng.standard_normal((d * k, d))
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    v = q * (diag / np.abs(diag))
    return KrausChannel(v.reshape(k, d, d))


def branch_ensemble(ch: KrausChannel, rho):
    """Measurement reading of the Kraus operators.

    Returns ``(q, states)`` with ``q_mu = Tr[M_mu rho M_mu^dagger]`` and
    ``states[mu] = M_mu rho M_mu^dagger / q_mu``; branches with ``q_mu`` below
    ``1e-12`` are dropped and the rest renormalized.
    """
    rho = _check_input(ch, rho)
    branches = np.einsum("kij,jl,kml->kim", ch.kraus, rho, ch.kraus.conj())
    q = np.real(np.einsum("kii->k", branches))
    kept = np.nonzero(q >= DROP_TOL)[0]
    states = [hermitize(branches[i] / q[i]) for i in kept]
    qk = q[kept]
    return qk / qk.sum(), states
