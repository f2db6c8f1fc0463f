"""Whitney-type extension of Sobolev functions from finite subsets of the line."""

from .errors import *  # noqa: F401,F403
from .extend_lmp import (PiecewiseExtension, assemble_extension, extension_eval,
                         lmp_seminorm, smoothness_report)
from .extend_wmp import (AugmentedSet, augment_small_set, build_grid, support_radius,
                         wmp_extend, wmp_norm)
from .finiteness import (EulerSpline, deboor_Cm, euler_spline, favard_cm,
                         km_lower_experiment, trace_norm_simplex)
from .functionals import (TraceReport, n_infty, n_sequence, n_variational_exact,
                          nw_sequence, nw_variational_exact, sharp_k_eval,
                          sharp_k_lp_norm, sharp_m_global_eval, sharp_m_global_lp_norm,
                          subsequence_inequality_check, weighted_sharp_eval)
from .knotsel import KnotEntry, KnotSelection, knot_set, knot_table, nearest_outside
from .polycore import (Poly, SampleSet, bspline_eval, bspline_integral,
                       divided_difference, hermite_gap, hermite_gap_linear,
                       lagrange_poly, poly_eval, poly_p_integral)
from .whitfield import (WhitneyField, build_field, jet_sequence_functional,
                        jet_variational_exact)

__version__ = "0.1.0"
