"""Checkers for the entropy inequalities and correlation bounds.

Every check returns :class:`ResidualRecord` objects oriented so that a
residual ``>= -tol`` means the statement holds.  Equalities are recorded as
``-|lhs - rhs|``.  Sampling is seeded per trial from ``(seed, trial)`` so any
record can be regenerated from its digest.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import (
    KrausChannel,
    branch_ensemble,
    complementary_apply,
    erase_channel,
    exchange_entropy,
    extend_identity,
    kraus_apply,
    random_channel,
)
from .correlations import OptimizerConfig, correlation_report, quantum_discord
from .entropy import (
    entropy_from_eigenvalues,
    holevo_quantity,
    mutual_information,
    shannon_entropy,
    subsystem_entropies,
    von_neumann_entropy,
)
from .measurement import (
    VonNeumannMeasurement,
    apply_nonselective,
    conditional_ensemble,
    dephase,
    measured_mutual_information,
)
from .qmat import (
    BipartiteState,
    as_rng,
    dm,
    ptrace,
    purify,
    random_mixed,
    random_pure,
    random_separable,
    random_unitary,
)

ENTROPY_TOL = 1e-9
IDENTITY_TOL = 1e-8
PRODUCT_TOL = 1e-7
C_BOUND_TOL = 1e-6
Q_BOUND_TOL = 1e-3
FUZZ_MARGIN = 1e-3
FUZZ_RESTARTS = 100
PURITY_GATE = 1 - 1e-6

SUITES = ("lindblad", "holevo", "eq3", "ineq4", "thm1", "thm2", "example", "two-qubit")


@dataclass(frozen=True)
class ResidualRecord:
    name: str
    residual: float
    tol: float = ENTROPY_TOL
    digest: dict = field(default_factory=dict, compare=False)
    strict: bool = False

    @property
    def passed(self) -> bool:
        if self.strict:
            return self.residual > 0
        return self.residual >= -self.tol


@dataclass(frozen=True, eq=False)
class FuzzFinding:
    state: BipartiteState
    q_hat: float
    s_a: float
    margin: float
    escalation_level: int
    digest: dict = field(default_factory=dict)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent generator for one trial of a seeded campaign."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(trial)]))


def _eq(name, lhs, rhs, tol=ENTROPY_TOL, digest=None):
    return ResidualRecord(name, -abs(lhs - rhs), tol, digest or {})


# -- channel inequalities ---------------------------------------------------


def check_lindblad(ch: KrausChannel, rho, digest=None) -> list[ResidualRecord]:
    """Both halves of ``|S(env) - S(in)| <= S(out) <= S(env) + S(in)``."""
    s_in = von_neumann_entropy(rho)
    s_out = von_neumann_entropy(kraus_apply(ch, rho), validate=False)
    s_env = exchange_entropy(ch, rho)
    d = digest or {}
    return [
        ResidualRecord("lindblad:lower", s_out - abs(s_env - s_in), ENTROPY_TOL, d),
        ResidualRecord("lindblad:upper", s_env + s_in - s_out, ENTROPY_TOL, d),
    ]


def check_holevo_chain(ch: KrausChannel, rho, digest=None) -> list[ResidualRecord]:
    """``chi({q, rho'}) <= S(env) <= H(q)`` for the Kraus-branch ensemble."""
    q, states = branch_ensemble(ch, rho)
    chi = holevo_quantity(q, states)
    s_env = exchange_entropy(ch, rho)
    h = shannon_entropy(q)
    d = digest or {}
    return [
        ResidualRecord("holevo:chi<=S_env", s_env - chi, ENTROPY_TOL, d),
        ResidualRecord("holevo:S_env<=H", h - s_env, ENTROPY_TOL, d),
    ]


def check_env_entropy_locality(s_rq: BipartiteState, ch: KrausChannel, digest=None) -> ResidualRecord:
    """Exchange entropy of ``1_R (x) Phi`` on ``rho_RQ`` equals that of ``Phi`` on ``rho_Q``."""
    if ch.dim_in != s_rq.dim_b:
        raise ValueError(f"channel acts on {ch.dim_in}, subsystem Q has {s_rq.dim_b}")
    ext = extend_identity(ch, s_rq.dim_a)
    lhs = exchange_entropy(ext, s_rq.rho)
    rhs = exchange_entropy(ch, s_rq.rho_b)
    return _eq("eq3:S_env_local", lhs, rhs, ENTROPY_TOL, digest)


# -- measurement on B -------------------------------------------------------


def check_entropy_gain_bound(s: BipartiteState, m: VonNeumannMeasurement, digest=None) -> list[ResidualRecord]:
    """Entropy gain of measuring B is at most the outcome entropy.

    Also records ``S(Pi(rho_B)) = H(p)``.
    """
    p = np.real(np.diag(m.unitary.conj().T @ s.rho_b @ m.unitary))
    p = np.clip(p, 0.0, None)
    h = shannon_entropy(p / p.sum())
    gain = von_neumann_entropy(apply_nonselective(s, m).rho, validate=False) - von_neumann_entropy(
        s.rho, validate=False
    )
    s_dephased_b = von_neumann_entropy(dephase(s.rho_b, m), validate=False)
    d = digest or {}
    return [
        ResidualRecord("ineq4:gain<=H(p)", h - gain, ENTROPY_TOL, d),
        _eq("ineq4:S(Pi(rho_B))=H(p)", s_dephased_b, h, ENTROPY_TOL, d),
    ]


def check_measurement_identities(s: BipartiteState, m: VonNeumannMeasurement, digest=None) -> list[ResidualRecord]:
    """The two decompositions of the post-measurement state used for the bound on C.

    ``S(Pi(rho_AB)) = H(p) + sum_j p_j S(rho_A_j)`` and
    ``I(Pi(rho_AB)) = chi({p_j, rho_A_j})``.
    """
    ens = conditional_ensemble(s, m)
    post = apply_nonselective(s, m)
    lhs = von_neumann_entropy(post.rho, validate=False)
    rhs = shannon_entropy(ens.probs) + sum(p * von_neumann_entropy(st) for p, st in zip(ens.probs, ens.states))
    d = digest or {}
    return [
        _eq("ineq4:S(Pi(rho_AB))=H+avgS", lhs, rhs, IDENTITY_TOL, d),
        _eq("ineq4:I(Pi(rho_AB))=chi", mutual_information(post), measured_mutual_information(s, m), IDENTITY_TOL, d),
    ]


def check_erase_channel(s: BipartiteState, basis: VonNeumannMeasurement, omega, digest=None) -> list[ResidualRecord]:
    """The erase channel's environment output is unitarily equivalent to ``rho_B``.

    Records the largest gap between sorted spectra, the entropy equality and
    the action ``Tr_B[rho] (x) |omega><omega|``.
    """
    ch = erase_channel(basis, omega, s.dim_a)
    env = complementary_apply(ch, s.rho)
    ev_env = np.linalg.eigvalsh(env)
    ev_b = np.linalg.eigvalsh(s.rho_b)
    d = digest or {}
    out = kraus_apply(ch, s.rho)
    target = np.kron(s.rho_a, dm(omega))
    return [
        ResidualRecord("erase:spectrum", -float(np.max(np.abs(ev_env - ev_b))), ENTROPY_TOL, d),
        _eq("erase:S_env=S_B", entropy_from_eigenvalues(ev_env), entropy_from_eigenvalues(ev_b), ENTROPY_TOL, d),
        ResidualRecord("erase:action", -float(np.max(np.abs(out - target))), ENTROPY_TOL, d),
    ]


# -- correlation bounds -----------------------------------------------------


def check_theorem1(s: BipartiteState, cfg: OptimizerConfig | None = None, digest=None) -> list[ResidualRecord]:
    """Bounds on the classical correlation and discord of ``s``.

    ``Q <= min(S_A, S_B)`` is only asserted where it is proven: when
    ``S_B <= S_A`` or the state is separable by construction.
    """
    rep = correlation_report(s, cfg)
    d = dict(digest or {})
    if rep.anomaly:
        d["anomaly"] = True
    recs = [
        ResidualRecord("thm1:C<=S_A", rep.bound_checks["C<=S_A"], C_BOUND_TOL, d),
        ResidualRecord("thm1:C<=S_B", rep.bound_checks["C<=S_B"], C_BOUND_TOL, d),
        ResidualRecord("thm1:Q<=S_B", rep.bound_checks["Q<=S_B"], Q_BOUND_TOL, d),
    ]
    if s.separable or rep.s_b <= rep.s_a:
        recs.append(ResidualRecord("thm1:Q<=min(S_A,S_B)", min(rep.s_a, rep.s_b) - rep.discord, Q_BOUND_TOL, d))
    if s.separable:
        recs.append(
            ResidualRecord("thm1:S_AB>=max(S_A,S_B)", rep.bound_checks["SEPARABLE:S_AB>=max(S_A,S_B)"], ENTROPY_TOL, d)
        )
    return recs


# -- saturating states ------------------------------------------------------


def gen_saturating_state(d_l: int, d_r: int, d_c: int, rng=None) -> BipartiteState:
    """``rho_L (x) |Psi_RC><Psi_RC|`` on ``B (x) C`` with ``B = L (x) R``.

    The returned state has ``dim_a = d_l * d_r`` (system B) and
    ``dim_b = d_c`` (system C).
    """
    if min(d_l, d_r, d_c) < 1:
        raise ValueError("dimensions must be at least 1")
    rng = as_rng(rng)
    rho_l = random_mixed(d_l, d_l, rng)
    psi = random_pure(d_r * d_c, rng)
    return BipartiteState(np.kron(rho_l, dm(psi)), d_l * d_r, d_c)


def check_saturation(s: BipartiteState, digest=None) -> list[ResidualRecord]:
    """Test ``S(BC) = S(B) - S(C)`` and its consequence that A and C decouple.

    ``s`` is read as a state on ``B (x) C``.  It is purified with a reference
    A of minimal rank, then ``rho_AC`` is compared with ``rho_A (x) rho_C``.
    """
    s_b, s_c, s_bc = subsystem_entropies(s)
    d = digest or {}
    sat = _eq("thm2:S_BC=S_B-S_C", s_bc, s_b - s_c, ENTROPY_TOL, d)
    vec = purify(s.rho, tol=1e-12)
    d_ref = vec.size // (s.dim_a * s.dim_b)
    dims = [d_ref, s.dim_a, s.dim_b]
    omega = np.outer(vec, vec.conj())
    rho_ac = ptrace(omega, dims, [0, 2])
    rho_a = ptrace(omega, dims, [0])
    rho_c = ptrace(omega, dims, [2])
    prod = ResidualRecord(
        "thm2:rho_AC=rho_A(x)rho_C", -float(np.max(np.abs(rho_ac - np.kron(rho_a, rho_c)))), PRODUCT_TOL, d
    )
    return [sat, prod]


def gen_example_family(d_a: int, d_r: int, rng=None) -> BipartiteState:
    """``|Phi_AL><Phi_AL| (x) rho_R`` with ``dim L = d_a`` and B = L (x) R."""
    if d_a < 1 or d_r < 1:
        raise ValueError("dimensions must be at least 1")
    rng = as_rng(rng)
    phi = random_pure(d_a * d_a, rng)
    rho_r = random_mixed(d_r, d_r, rng)
    # order A, L, R: the pure factor already sits on the leading A (x) L indices
    return BipartiteState(np.kron(dm(phi), rho_r), d_a, d_a * d_r)


def check_example_family(s: BipartiteState, cfg: OptimizerConfig | None = None, digest=None) -> list[ResidualRecord]:
    """``S_AB = S_B - S_A`` and ``Q = S_A`` for an example-family state."""
    s_a, s_b, s_ab = subsystem_entropies(s)
    q = quantum_discord(s, cfg)
    d = digest or {}
    return [
        _eq("example:S_AB=S_B-S_A", s_ab, s_b - s_a, ENTROPY_TOL, d),
        _eq("example:Q=S_A", q, s_a, Q_BOUND_TOL, d),
    ]


# -- two-qubit strictness ---------------------------------------------------


def check_two_qubit_remark(s: BipartiteState, digest=None) -> ResidualRecord:
    """Strict ``S_AB > |S_B - S_A|`` for a non-pure two-qubit state."""
    if s.dims != (2, 2):
        raise ValueError("two-qubit check needs a 2x2 state")
    s_a, s_b, s_ab = subsystem_entropies(s)
    return ResidualRecord("two-qubit:S_AB>|S_B-S_A|", s_ab - abs(s_b - s_a), 0.0, digest or {}, strict=True)


def sample_non_pure_two_qubit(rng) -> BipartiteState:
    rng = as_rng(rng)
    while True:
        rho = random_mixed(4, int(rng.integers(2, 5)), rng)
        if np.real(np.trace(rho @ rho)) <= PURITY_GATE:
            return BipartiteState(rho, 2, 2)


def check_two_qubit_purity_remark(trials: int, rng=None) -> list[ResidualRecord]:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = as_rng(rng)
    return [check_two_qubit_remark(sample_non_pure_two_qubit(rng), {"trial": k}) for k in range(trials)]


# -- conjecture (II) search -------------------------------------------------


def random_state(d_a: int, d_b: int, rng) -> BipartiteState:
    """Random mixed state with a uniformly drawn rank."""
    rng = as_rng(rng)
    n = d_a * d_b
    return BipartiteState(random_mixed(n, int(rng.integers(1, n + 1)), rng), d_a, d_b)


def fuzz_conjecture_ii(
    d_a: int,
    d_b: int,
    trials: int,
    cfg: OptimizerConfig | None = None,
    seed: int = 0,
    family: str = "random",
    margin: float = FUZZ_MARGIN,
) -> list[FuzzFinding]:
    """Search for states whose computed discord exceeds ``S(rho_A)``.

    ``family`` selects the sampler: ``"random"`` (random mixed states) or
    ``"near-pure"`` (a pure state with a small admixture of noise), both kept
    only when ``S_A < S_B``; ``"separable"`` and ``"example"`` are control
    families where no candidate can exist.  A candidate
    is recorded only if its margin survives a rerun with at least 100
    restarts.  The computed discord overestimates the true one, so findings
    are candidates, not proofs.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    cfg = cfg or OptimizerConfig()
    findings = []
    for k in range(trials):
        rng = trial_rng(seed, k)
        if family == "random":
            s = random_state(d_a, d_b, rng)
        elif family == "separable":
            s = random_separable(d_a, d_b, int(rng.integers(1, 2 * d_a * d_b + 1)), rng)
        elif family == "near-pure":
            eps = 10 ** rng.uniform(-3, -0.5)
            n = d_a * d_b
            rho = (1 - eps) * dm(random_pure(n, rng)) + eps * random_mixed(n, int(rng.integers(1, 3)), rng)
            s = BipartiteState(rho, d_a, d_b)
        elif family == "example":
            if d_b % d_a:
                raise ValueError("example family needs d_b to be a multiple of d_a")
            s = gen_example_family(d_a, d_b // d_a, rng)
        else:
            raise ValueError(f"unknown family {family!r}")
        s_a, s_b, _ = subsystem_entropies(s)
        if family in ("random", "near-pure") and not s_a < s_b:
            continue
        trial_cfg = OptimizerConfig(cfg.restarts, cfg.max_iters, cfg.objective_tol, cfg.angle_step_init, cfg.seed + k)
        q = quantum_discord(s, trial_cfg)
        if q - s_a <= margin:
            continue
        heavy = OptimizerConfig(
            max(FUZZ_RESTARTS, 5 * cfg.restarts), 4 * cfg.max_iters, cfg.objective_tol, cfg.angle_step_init, cfg.seed + k
        )
        q = min(q, quantum_discord(s, heavy))
        if q - s_a > margin:
            findings.append(FuzzFinding(s, q, s_a, q - s_a, 1, {"seed": seed, "trial": k, "family": family}))
    return findings


# -- suite runners (one row per residual) -----------------------------------


def _pick(rng, options):
    return int(options[int(rng.integers(len(options)))])


def _digest(seed, trial, d_a, d_b):
    return {"seed": int(seed), "trial": int(trial), "d_a": int(d_a), "d_b": int(d_b)}


def run_trial(suite: str, seed: int, trial: int, dims=None, cfg: OptimizerConfig | None = None):
    """Regenerate and check one trial of ``suite``.

    Returns ``(d_a, d_b, records)``; ``dims`` pins the two dimensions the
    suite draws (their meaning depends on the suite).
    """
    rng = trial_rng(seed, trial)
    opt = cfg or OptimizerConfig(seed=int(np.random.SeedSequence([seed, trial, 1]).generate_state(1)[0]))

    def dim(i, options):
        return int(dims[i]) if dims else _pick(rng, options)

    if suite in ("lindblad", "holevo"):
        d, k = dim(0, range(1, 5)), dim(1, range(1, 5))
        ch = random_channel(d, k, rng)
        rho = random_mixed(d, _pick(rng, range(1, d + 1)), rng)
        check = check_lindblad if suite == "lindblad" else check_holevo_chain
        return d, k, check(ch, rho, _digest(seed, trial, d, k))
    if suite == "eq3":
        d_r, d_q = dim(0, range(1, 4)), dim(1, range(1, 4))
        ch = random_channel(d_q, _pick(rng, range(1, 4)), rng)
        s = random_state(d_r, d_q, rng)
        return d_r, d_q, [check_env_entropy_locality(s, ch, _digest(seed, trial, d_r, d_q))]
    if suite == "ineq4":
        d_a, d_b = dim(0, range(2, 5)), dim(1, range(2, 5))
        s = random_state(d_a, d_b, rng)
        m = VonNeumannMeasurement(random_unitary(d_b, rng))
        dg = _digest(seed, trial, d_a, d_b)
        return d_a, d_b, check_entropy_gain_bound(s, m, dg) + check_measurement_identities(s, m, dg)
    if suite == "thm1":
        d_a, d_b = dim(0, (2, 3)), dim(1, (2, 3))
        separable = bool(rng.integers(2))
        if separable:
            s = random_separable(d_a, d_b, _pick(rng, range(1, 2 * d_a * d_b + 1)), rng)
        else:
            s = random_state(d_a, d_b, rng)
        basis = VonNeumannMeasurement(random_unitary(d_b, rng))
        omega = random_pure(d_b, rng)
        dg = _digest(seed, trial, d_a, d_b)
        return d_a, d_b, check_theorem1(s, opt, dg) + check_erase_channel(s, basis, omega, dg)
    if suite == "thm2":
        d_l, d_r = dim(0, (1, 2)), dim(1, (1, 2, 3))
        s = gen_saturating_state(d_l, d_r, d_r, rng)
        return s.dim_a, s.dim_b, check_saturation(s, _digest(seed, trial, s.dim_a, s.dim_b))
    if suite == "example":
        d_a, d_r = dim(0, (2,)), dim(1, (2, 3))
        s = gen_example_family(d_a, d_r, rng)
        return s.dim_a, s.dim_b, check_example_family(s, opt, _digest(seed, trial, s.dim_a, s.dim_b))
    if suite == "two-qubit":
        s = sample_non_pure_two_qubit(rng)
        return 2, 2, [check_two_qubit_remark(s, _digest(seed, trial, 2, 2))]
    raise ValueError(f"unknown suite {suite!r}")
