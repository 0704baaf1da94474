"""Configurations of six subspaces with scalar cross-ratios.

Enumerates the normalized 6-tuples in R^4 whose three cross-ratios are
lambda_i times the identity, then re-reads the invariants.
"""
from reflrigid import config_cross_ratios, solve_scalar_config

lambdas = (0.5, 0.25, 0.04)
configs = solve_scalar_config(*lambdas, n=2)
print(f"{len(configs)} configuration classes for lambda = {lambdas}")
for i, c in enumerate(configs):
    got = [cr.scalar_value() for cr in config_cross_ratios(c)]
    print(f"  class {i}: M1 diagonal {c.M1.diagonal().round(6)}, "
          f"recovered lambda {[round(v, 12) for v in got]}")
