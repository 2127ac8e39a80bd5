"""Spectral geometry of rooms-and-passages domains.

Subpackages by capability:

  domain              piece geometry, areas, truncations and tails
  rectangles          closed-form rectangle spectra and exact counting
  bracketing          Dirichlet-Neumann bracketing of counting functions
  tail                Poincare tail control and truncation depth
  singular            singular sequences for the non-compact regime
  skeleton            medial-axis edges, fiber charts, coarea weights
  skeleton_operator   weighted spaces and the edgewise operator
  fd_oracle           finite-difference verification on exact rasters
  cli                 experiment runner
"""

from .domain import (GeometricParams, Piece, RpDomain, area_upto,
                     build_general, build_geometric, contains, tail_area,
                     total_area)
from .rectangles import (Bc1d, RectangleSpec, count_exact,
                         count_leading_estimate, count_second_order_coeff,
                         eigen_1d, spectrum_below)
from .bracketing import (BracketReport, assemble_bounds,
                         dirichlet_piece_counts, enumerated_second_term_limits,
                         first_room_lower_count, passage_counts,
                         room_lower_count, room_upper_count,
                         second_term_constants)
from .tail import TailPolicy, min_M_for_lambda, poincare_bound, tail_report
from .singular import RampProfile, build_profile, decay_table, rayleigh_report
from .skeleton import (CornerGeometry, EdgeGroup, SkeletonEdge, arclength,
                       build_room_skeleton, domain_skeleton, edge_length,
                       jacobian_inv, jacobian_inv_polar, locate,
                       parabola_point, skeleton_polylines, skeleton_to_json,
                       tau_parabolic, weights, x_intercept)
from .skeleton_operator import (SkeletonFunction, WeightedSlSystem,
                                assemble_sl, fiber_average,
                                fiber_average_singular, h1_inner,
                                isometry_defects, l2_inner, lift,
                                resolvent_on_singular_edge, sl_eigenvalues,
                                zero_modes)
from .fd_oracle import (FdSpectrum, GridDomain, fd_eigenvalues, rasterize,
                        richardson_eigenvalues, sandwich_check)

__version__ = "0.1.0"
