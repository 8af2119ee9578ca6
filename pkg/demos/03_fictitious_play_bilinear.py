"""
Fictitious play on xy over [-10, 10]^2
======================================

Each player best-responds to the average of the opponent's past actions.
Actions are always endpoints, yet the empirical mixtures approach the
equilibrium that plays +10 and -10 equally often.
"""

from minimax_lab.fictitious_play import endpoint_mixture, run_fp
from minimax_lab.games import BilinearIntervalGame, epsilon_nash_check

game = BilinearIntervalGame()
trace = run_fp(game, 10_000)

for n in (10, 100, 1_000, 10_000):
    k = n - 1
    print(
        f"n={n:>6}: freq(x=+10)={trace.emp1[k, 1]:.4f}  freq(y=+10)={trace.emp2[k, 1]:.4f}  "
        f"u(empirical profile)={trace.exp_utility[k]:+.4f}  realized avg={trace.avg_utility[k]:+.4f}"
    )

# The realized average of x*y lags far behind the value of the empirical
# profile: the simultaneous updates keep the two players out of phase.
mu1, mu2 = endpoint_mixture(trace, 1), endpoint_mixture(trace, 2)
ok, gain = epsilon_nash_check(game.restricted(), mu1, mu2, 0.3)
print("best pure deviation gain on the corner game:", round(gain, 4))
