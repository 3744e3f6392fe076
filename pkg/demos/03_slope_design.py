"""Robust slope design: the LP as printed, and the slope-floor variant.

The design LP always admits the trivial zero slope (zero worst-case
discrepancy), which the solver reports; the floor variant excludes it
and returns the cheapest slope of at least the requested magnitude.
"""

import numpy as np

import privperturb as pp

fix = pp.nonconvex_trio()
problem = fix.problem

print("plain LP (trivial optimum expected):")
for i, res in enumerate(pp.design_slopes(problem)):
    print(
        f"  agent {i + 1}: status={res.solver_status} "
        f"value={res.objective_value:g} m_tilde={res.m_tilde_star}"
    )

print("\nslope-floor variant (|m_tilde| >= 0.5):")
for i, res in enumerate(pp.design_slopes(problem, slope_floor=0.5)):
    print(
        f"  agent {i + 1}: value={res.objective_value:g} m_tilde={res.m_tilde_star}"
    )

print("\nLP block structure for agent 1 at its design vertex:")
vertex = pp.minimizing_decomposition(problem.objectives[0], np.zeros(1)).vertex
print(pp.build_lp(vertex, problem.domain).dump_text())
