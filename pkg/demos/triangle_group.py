"""The geometric representation of a hyperbolic triangle group.

For the (2, 3, 7) group the three generator cross-ratios are the scalars
sin^2(pi / (2 k_i)); the products of generator pairs have the prescribed
projective orders.
"""
import numpy as np

from reflrigid import geometric_representation, phi

k = (2, 3, 7)
rep = geometric_representation(k)
values = [c.scalar_value() for c in rep.cross_ratios()]
for ki, v in zip(k, values):
    print(f"k={ki}: cross-ratio {v:.15f}, sin^2(pi/2k) "
          f"{np.sin(np.pi / (2 * ki)) ** 2:.15f}")
print("phi(lambda) =", phi(*values), "(positive for hyperbolic triples)")
rep.check()
print("relations and orders verified")
