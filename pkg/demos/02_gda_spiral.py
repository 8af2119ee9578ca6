"""
Gradient descent-ascent spirals out on xy
=========================================

Player 1 maximizes xy, player 2 minimizes it. Simultaneous gradient steps
multiply the distance to the equilibrium (0, 0) by sqrt(1 + step^2) every
iteration, so the iterates circle and drift outward for any fixed step.
"""

import math

from minimax_lab.gda import closed_form_trajectory, divergence_threshold_step, run_gda

step = 0.01
trace = run_gda(0.1, 0.1, step, 50_000)

for n in (0, 1_000, 10_000, 30_000, 50_000):
    cx, cy = closed_form_trajectory(0.1, 0.1, step, n)
    print(f"n={n:>6}: (x, y) = ({trace.x[n]:+.5f}, {trace.y[n]:+.5f})   closed form ({cx:+.5f}, {cy:+.5f})")

# Growth is slow at this step size: a factor 10 needs tens of thousands of steps.
print("norm grows 10x at n =", divergence_threshold_step(step), "; flag tripped at", trace.divergence_step)
print("one revolution takes about", round(2 * math.pi / math.atan(step)), "steps")
