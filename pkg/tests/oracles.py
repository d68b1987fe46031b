"""Independent reference computations used by the tests.

Nothing here calls into qcorr: partial traces are explicit index loops,
entropies go through scipy's matrix logarithm, and the qubit classical
correlation is an exhaustive Bloch-sphere grid.
"""

import numpy as np
import scipy.linalg as sl


def ptrace_loops(rho, d_a, d_b, keep):
    out = np.zeros((d_a, d_a) if keep == "A" else (d_b, d_b), dtype=complex)
    for i in range(d_a):
        for j in range(d_b):
            for k in range(d_a):
                for m in range(d_b):
                    v = rho[i * d_b + j, k * d_b + m]
                    if keep == "A" and j == m:
                        out[i, k] += v
                    elif keep == "B" and i == k:
                        out[j, m] += v
    return out


def entropy_logm(rho, eps=1e-14):
    """-Tr[rho log2 rho] via the matrix logarithm (regularized for rank deficiency)."""
    d = rho.shape[0]
    reg = (rho + eps * np.eye(d)) / (1 + d * eps)
    return float(-np.real(np.trace(reg @ sl.logm(reg))) / np.log(2))


def _h2(lam):
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(lam > 1e-15, -lam * np.log2(np.where(lam > 1e-15, lam, 1.0)), 0.0)
    return t


PAULI = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=complex)


def _bloch(m):
    """Coefficients (a0, a) of m = a0 I + a . sigma for a stack of 2x2 matrices."""
    a0 = np.real(np.trace(m, axis1=-2, axis2=-1)) / 2
    a = np.real(np.einsum("...ij,kji->...k", m, PAULI)) / 2
    return a0, a


def grid_classical_correlation(rho, d_a=2, step=1e-3, chunk=64):
    """Max over a (theta, phi) grid of the post-measurement mutual information.

    The measured qubit B is projected on the Bloch direction n and its
    opposite; the two unnormalized branches of A are (rho_A +/- n.T)/2 with
    T_k = Tr_B[rho (1 (x) sigma_k)].  Only d_a == 2 is supported (closed-form
    eigenvalues).  theta runs over the upper hemisphere, which already
    contains every measurement.
    """
    assert d_a == 2
    t = rho.reshape(2, 2, 2, 2)
    rho_a = np.einsum("ajcj->ac", t)
    tk = np.einsum("abce,keb->kac", t, PAULI)
    r0, r = _bloch(rho_a)
    t0, tv = _bloch(tk)  # t0: (3,), tv: (3, 3) rows = k
    lam_a = np.array([r0 - np.linalg.norm(r), r0 + np.linalg.norm(r)])
    s_a = _h2(lam_a).sum()
    thetas = np.arange(0.0, np.pi / 2 + step, step)
    phis = np.arange(0.0, 2 * np.pi, step)
    cp, sp = np.cos(phis), np.sin(phis)
    best = -np.inf
    for lo in range(0, thetas.size, chunk):
        th = thetas[lo : lo + chunk][:, None]
        n = np.stack([np.sin(th) * cp, np.sin(th) * sp, np.cos(th) * np.ones_like(cp)], axis=-1)
        total = 0.0
        for sign in (1.0, -1.0):
            c0 = (r0 + sign * n @ t0) / 2
            cv = (r + sign * n @ tv) / 2
            rad = np.linalg.norm(cv, axis=-1)
            p = 2 * c0
            lo_ev, hi_ev = c0 - rad, c0 + rad
            # p S(sigma/p) = -sum mu log mu + p log p
            total = total + _h2(lo_ev) + _h2(hi_ev) - _h2(p)
        best = max(best, float(np.max(s_a - total)))
    return best


def dilation_marginals(kraus, rho):
    """Build V explicitly column by column and return (Tr_env, Tr_out) of V rho V^dagger."""
    k, d_out, d_in = kraus.shape
    v = np.zeros((d_out * k, d_in), dtype=complex)
    for col in range(d_in):
        e = np.zeros(d_in)
        e[col] = 1
        vec = sum(np.kron(kraus[mu] @ e, np.eye(k)[mu]) for mu in range(k))
        v[:, col] = vec
    big = v @ rho @ v.conj().T
    return ptrace_loops(big, d_out, k, "A"), ptrace_loops(big, d_out, k, "B"), v
