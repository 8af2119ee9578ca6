"""
Fixed points of six GAN objectives
==================================

Each objective has the form E_pd f0(D) + E_pg f1(D). At p_g = p_d the
pointwise maximizer and the game value are known in closed form; here they
are recovered by golden-section search.
"""

import numpy as np

from minimax_lab.fgan import check_fixed_point, format_table, get_spec, pointwise_optimal_d, registry

print(format_table([check_fixed_point(s, np.random.default_rng(1)) for s in registry()]))

# Away from p_g = p_d, the Jensen-Shannon maximizer is the density ratio.
print("JS optimum at (0.75, 0.25):", round(pointwise_optimal_d(get_spec("js"), 0.75, 0.25), 8))
