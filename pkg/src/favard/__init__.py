"""Projection geometry and Favard length of the four-corner Cantor iterates."""
from ._accel import USE_NUMBA, backend_name
from .cantor import (DEFAULT_CONFIG, AngleParams, CantorConfig, Square, build_squares,
                     count_at_point, normalized_centers, project_square,
                     projection_intervals)
from .errors import CapacityError, ToleranceNotReached
from .estimator import (FavardCurve, QuadratureSpec, bounds_report, favard, favard_curve,
                        fit_power_law, needle_mc, projection_length)
from .intervals import (DisjointIntervalSet, StepProfile, hl_maximal_at, multiplicity_profile,
                        pointwise_max, profile_moment, superlevel_measure, union_length)
from .marking import (MarkedFamily, MultiplicityStack, maximal_marked_squares,
                      submultiplicativity_report)

__version__ = "0.1.0"
