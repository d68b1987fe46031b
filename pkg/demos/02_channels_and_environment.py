"""Channels, their environments and the entropy bookkeeping between them."""

import numpy as np

from qcorr import exchange_entropy, kraus_apply, random_channel, random_mixed, von_neumann_entropy
from qcorr.channel import branch_ensemble, dephasing_channel
from qcorr.entropy import holevo_quantity, shannon_entropy
from qcorr.qmat import dm

rng = np.random.default_rng(1)
ch = random_channel(3, 2, rng)
rho = random_mixed(3, rng=rng)

s_in = von_neumann_entropy(rho)
s_out = von_neumann_entropy(kraus_apply(ch, rho))
s_env = exchange_entropy(ch, rho)
print(f"S(in) = {s_in:.4f}  S(out) = {s_out:.4f}  S(env) = {s_env:.4f}")
print("output entropy lies in the triangle:", abs(s_env - s_in) <= s_out + 1e-12 <= s_env + s_in + 2e-12)

# Reading the Kraus operators as measurement branches.
q, states = branch_ensemble(ch, rho)
print(f"chi = {holevo_quantity(q, states):.4f} <= S(env) = {s_env:.4f} <= H(q) = {shannon_entropy(q):.4f}")

# Complete dephasing of |+>: every inequality above is tight.
plus = dm(np.array([1, 1]) / np.sqrt(2))
deph = dephasing_channel(2)
print("\ndephased |+>:", np.round(kraus_apply(deph, plus).real, 3).tolist())
print("exchange entropy:", round(exchange_entropy(deph, plus), 6))
