"""Reflection representations of hyperbolic triangle groups.

Generalized cross-ratios of half-dimensional subspaces, the geometric
representation and its diagonal, symplectic and symmetric-power
embeddings, finite configuration spaces of 6-tuples, and numerical
local-rigidity probes.
"""
from .errors import *  # noqa: F401,F403
from .linalg import (DEFAULT_TOLERANCES, CrossRatioClass, Subspace,
                     Tolerances, as_graph, charpoly, cross_ratio,
                     finite_order_grid, graph_subspace, projection,
                     projective_order, reflection, scalar_deviation)
from .triangle import (Rep, TriangleParams, geometric_representation,
                       gram_matrix, phi, q_form, quadratic_roots)
from .embed import (build_rep, diagonal_embed, expected_dimension_diagonal,
                    symmetric_power_embed, xi)
from .symplectic import (MaslovData, PQCircle, SymplecticSpace,
                         circle_contains, is_lagrangian, maslov, pq_circle,
                         simultaneously_diagonalizable, tensor_embed)
from .configurations import (Config6Normal, config_cross_ratios,
                             config_equivalent, extract_and_normalize,
                             solve_scalar_config)
from .probe import (ProbeParams, ProbeReport, conjugacy_witness, perturb,
                    project_to_relation_variety, relation_residual,
                    rigidity_probe)

__version__ = "0.1.0"
