"""
Choosing the mixer and separator angles
=======================================

With a single round the angle landscape is cheap to scan exactly: the
expectation of the reduced Hamiltonian is evaluated on a pi/60 grid over
beta in [-pi, 0) and gamma in [-pi, pi).  (The beta half-range uses the
sign symmetry of the expectation value.)  Optima are degenerate; ties are
broken toward higher ground-state probability and then lexicographically,
so the search is deterministic.
"""

import math

from fairsampler.gmqaoa import grid_search_angles, reference_angles

for problem in "abcde":
    angles, expectation = grid_search_angles(problem)
    ref = reference_angles(problem)
    print(
        f"problem {problem}: optimum ({angles.betas[0] / math.pi:+.4f}, {angles.gammas[0] / math.pi:+.4f})*pi"
        f"  expectation {expectation:+.4f}"
        f"  [circuits ship with ({ref.betas[0] / math.pi:+.4f}, {ref.gammas[0] / math.pi:+.4f})*pi]"
    )

# Coarser grids trade a little expectation for a lot of evaluations.
for divisor in (6, 12, 30, 60):
    _, expectation = grid_search_angles("d", resolution=math.pi / divisor)
    print(f"problem d at pi/{divisor:2d}: expectation {expectation:+.5f}")
