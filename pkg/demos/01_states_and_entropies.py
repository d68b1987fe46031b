"""States, marginals and entropies.

Builds a few bipartite states, looks at their marginals and prints the
entropies that everything else is built from.
"""

import numpy as np

from qcorr import BipartiteState, bell_state, mutual_information, purify, random_mixed, von_neumann_entropy
from qcorr.entropy import subsystem_entropies

rng = np.random.default_rng(0)

# A Bell pair: globally pure, locally maximally mixed.
bell = bell_state()
print("Bell rho_A =\n", np.round(bell.rho_a.real, 3))
print("S_A, S_B, S_AB =", np.round(subsystem_entropies(bell), 6))
print("I(A:B) =", round(mutual_information(bell), 6))

# A product state carries no correlations at all.
prod = BipartiteState.product(random_mixed(2, rng=rng), random_mixed(3, rng=rng))
print("\nproduct state I(A:B) =", f"{mutual_information(prod):.2e}")

# Any mixed state is the marginal of a pure state on a larger space.
rho = random_mixed(3, rank=2, rng=rng)
vec = purify(rho, tol=1e-12)
print("\npurification length:", vec.size, "(reference rank 2 times system dimension 3)")
m = vec.reshape(-1, 3)
print("marginal error:", f"{np.max(np.abs(m.T @ m.conj() - rho)):.1e}")
print("S(rho) =", round(von_neumann_entropy(rho), 6))
