import sys
from msc_coin_tools.calc import bias_lower_bound, optimal_l
from msc_coin_tools.protocol import ProtocolParams, simulate

##########################################################################
# Script to compare the attack's success rate with its closed form bound
#  for every attack round of one protocol instance.
#
# Usage
# -----
#  python coin_toss_driver.py c2 n m runs [seed]
#
# For each l = 1..m prints the exact bound and the Monte Carlo
#  estimate of P(X = 0) with its standard error.
##########################################################################

c2 = float(sys.argv[1])
n = int(sys.argv[2])
m = int(sys.argv[3])
runs = int(sys.argv[4])
seed = int(sys.argv[5]) if len(sys.argv) > 5 else 0

for l in range(1, m + 1):
    p = ProtocolParams(c2, n, m, l)
    report, _ = simulate(p, runs=runs, seed=seed)
    print('l = {:3d}  bound {:.5f}  p_hat {:.5f} +- {:.5f}  aborts {}'.format(
        l, bias_lower_bound(p), report.pHat(), report.stdErr(),
        report.getCounts()['abort']))

if m >= 2:
    timing = optimal_l(m, msc_defaults=True)
    print('Default instance with m = {}: attack with {:.3f} rounds unrevealed, '
          'l = {}, exact bias {:.5f}'.format(m, timing.q_real, timing.l, timing.bias))
