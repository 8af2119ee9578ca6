"""
Best responses oscillate on Bernoulli data
==========================================

Data is Bernoulli(0.25). The generator starts at Bernoulli(0.1). Each round
the discriminator is fit exactly, then the generator jumps to its best
response. The generator never settles: it flips between the two point masses.
"""

from minimax_lab.discrete_gan import CategoricalDist, optimal_discriminator, run_best_response_gan

p_d = CategoricalDist.bernoulli(0.25)
gens = run_best_response_gan(p_d, CategoricalDist.bernoulli(0.1), 10)

for t, g in enumerate(gens):
    D = optimal_discriminator(p_d, g)
    print(f"round {t}: p_g(1) = {g.pmf[1]:.2f}   D = ({D.values[0]:.3f}, {D.values[1]:.3f})")

# The discriminator always rewards the label the generator just abandoned,
# so the generator keeps chasing it.
