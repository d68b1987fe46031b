"""Classical correlation and discord on a handful of familiar states.

The Werner family has a closed form for the classical part, which makes a
good sanity check of the optimizer.
"""

import numpy as np

from qcorr import BipartiteState, OptimizerConfig, bell_state, correlation_report
from qcorr.verify import gen_example_family

cfg = OptimizerConfig(restarts=10, seed=3)


def show(name, s):
    r = correlation_report(s, cfg)
    print(f"{name:18s} S_A={r.s_a:.4f} S_B={r.s_b:.4f} I={r.mutual_info:.4f} C={r.classical_corr:.4f} Q={r.discord:.4f}")
    return r


show("Bell", bell_state())
show("classical mixture", BipartiteState(np.diag([0.5, 0, 0, 0.5]).astype(complex), 2, 2))

print("\nWerner states p|Phi+><Phi+| + (1-p) I/4")
v = np.array([1, 0, 0, 1]) / np.sqrt(2)
for p in (0.2, 0.5, 0.8):
    r = show(f"  p = {p}", BipartiteState(p * np.outer(v, v) + (1 - p) * np.eye(4) / 4, 2, 2))
    exact = 0.5 * ((1 - p) * np.log2(1 - p) + (1 + p) * np.log2(1 + p))
    print(f"  {'':16s} closed-form C = {exact:.4f}, error {abs(exact - r.classical_corr):.1e}")

# A pure pair on A(x)L next to a mixed R, measured on B = L(x)R: the discord
# equals S_A even though S_B is larger.
print()
r = show("pure pair + noise", gen_example_family(2, 2, np.random.default_rng(4)))
print("Q - S_A =", f"{r.discord - r.s_a:.1e}")
print("bound residuals:", {k: round(x, 6) for k, x in r.bound_checks.items()})
