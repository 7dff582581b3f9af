"""Compare the two simplex solvers on the same clustering problem.

The replicator update multiplies each coordinate by its relative payoff;
the pairwise dynamics jumps along the segment toward the most over- or
under-performing strategy with an exact line search. Both maximize the
same quadratic form and land on the same supports here; the pairwise
solver needs far fewer (and cheaper) steps.
"""

import numpy as np

from cdseg import SolverSettings, demo_graph, kkt_residual, run_pairwise_dynamics, run_replicator
from cdseg.constrained import build_regularized_matrix, choose_alpha

a = demo_graph()
seeds = [4]
alpha = choose_alpha(a, seeds)
m = build_regularized_matrix(a, seeds, alpha)
print(f"penalty alpha = {alpha:.3f}")

for name, solver in (("replicator", run_replicator), ("pairwise", run_pairwise_dynamics)):
    out = solver(m, settings=SolverSettings())
    residual = kkt_residual(a, out.solution, seeds, alpha)
    print(
        f"{name:10s}: support {out.support} objective {out.objective:.6f} "
        f"iterations {out.iterations_used} kkt {residual:.2e} "
        f"min step gain {out.min_step_gain:.1e}"
    )

# objective ascent is monotone for both; show the replicator trace briefly
from cdseg.dynamics import barycenter, replicator_step

shift = max(0.0, -m.min())
ms = m + shift
x = barycenter(m.shape[0])
trace = [float(x @ (ms @ x)) - shift]
for _ in range(40):
    x = replicator_step(ms, x)
    trace.append(float(x @ (ms @ x)) - shift)
print("replicator objective trace (first 8):", np.round(trace[:8], 5))
assert all(b >= a - 1e-12 for a, b in zip(trace, trace[1:]))
