"""Searching for states whose discord exceeds the entropy of the unmeasured side.

The bound Q <= S_B always holds; Q <= S_A does not in general.  The fuzzer
samples states with S_A < S_B and reports any whose computed discord stays
above S_A after a heavier rerun.  Empty output is the usual outcome.
"""

from qcorr import OptimizerConfig
from qcorr.verify import fuzz_conjecture_ii

cfg = OptimizerConfig(restarts=8)
for family in ("random", "near-pure", "separable"):
    found = fuzz_conjecture_ii(2, 3, 40, cfg, seed=5, family=family)
    print(f"{family:10s} 40 trials -> {len(found)} candidate(s)")
    for f in found:
        print(f"   trial {f.digest['trial']}: Q = {f.q_hat:.4f}, S_A = {f.s_a:.4f}, margin {f.margin:.2e}")
