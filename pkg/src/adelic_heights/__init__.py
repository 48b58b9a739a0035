"""Adelic height machinery on the projective line over the rationals.

Exact local energy pairings at finite places, numerical archimedean
pairings, potential theory on trees of p-adic balls, canonical heights of
rational maps, and batch equidistribution experiments.
"""

__version__ = "0.1.0"

from .exact import (ComplexApprox, IntPoly, RootFindingError, complex_roots,
                    discriminant, log_abs_fraction, log_abs_int,
                    mahler_measure, newton_polygon_root_valuations,
                    padic_valuation, poly_gcd, resultant, squarefree_part,
                    sylvester_resultant)
from .places import (AdelicMeasure, AlgebraicSet, LocalPairing, Place,
                     adelic_height, adelic_measure_from_json,
                     delta_valuation, finite_potential_sum,
                     log_norm_at_place, log_plus_valuation_sum,
                     mahler_formula_general, naive_height,
                     naive_height_mahler, norm_at_place,
                     pairing_finite_sets, pairing_set_vs_measure,
                     product_formula_residual, signed_energy_vs_lambda,
                     weil_bound_estimate, weil_comparison_bound)
from .berkovich import (AtomicMeasureB, BerkPoint, FiniteTree, TreeFunction,
                        base_change_identity_check, cauchy_schwarz_slack,
                        chordal_metric, contains, energy_atomic,
                        energy_atomic_report, energy_flux, gromov_product,
                        hyperbolic_distance, l320_check, lambda_measure,
                        laplacian_tree, log_sup, potential_of, project_eps,
                        tree_dirichlet, tree_pairing, tree_span, wedge)
from .complex_potential import (INFINITY, AtomicMeasureC, DiscrepancyRow,
                                GapReport, PotentialMeasureC, SmoothingKernel,
                                TestFunctionC, discrepancy_report,
                                energy_atomic as energy_atomic_c,
                                energy_cloud, energy_regularized_set,
                                p130_gap, pairing_regularized_vs_measure,
                                pairing_set_vs_potential, positivity_check,
                                regularized_pair, spherical_distance)
from .dynamics import (GreenValue, QuadraticEnergyReport, RationalMapQ,
                       basilica_local_energy, bifurcation_green,
                       canonical_height_point, canonical_height_set,
                       critical_orbit_poly, critical_orbit_roots,
                       critically_finite_params, cross_ratio,
                       equilibrium_potential, equilibrium_sample,
                       good_reduction, green_local, holder_exponent,
                       mandel_height, periodic_point_roots, periodic_points,
                       pushforward_min_poly,
                       transformation_check)
from ._kernels import USING_NUMBA
