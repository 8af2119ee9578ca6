"""
Fictitious GAN with exact best responses
========================================

On a finite support the discriminator best response to the averaged
generator is D = p_d / (p_d + pbar_g), and the generator best response to
the averaged discriminator is a point mass. Averaging the generators drives
pbar_g to p_d, and the objective tracks 2 JSD - log 4 exactly.
"""

import numpy as np

from minimax_lab.discrete_gan import CategoricalDist, DiscriminatorTable, random_pmf, run_fictitious_gan_discrete

rng = np.random.default_rng(0)
p_d = random_pmf(rng, 16)
trace = run_fictitious_gan_discrete(p_d, CategoricalDist.delta(0, 16), DiscriminatorTable.constant(0.5, 16), 10_000)

for n in (10, 100, 1_000, 10_000):
    print(f"n={n:>6}: JSD(pbar_g || p_d) = {trace.jsd[n - 1]:.2e}   V = {trace.value[n - 1]:+.6f}")

print("largest |V - (2 JSD - log 4)|:", np.max(np.abs(trace.identity_residual)))
print("final D ranges over", trace.D[-1].min().round(4), "to", trace.D[-1].max().round(4))
