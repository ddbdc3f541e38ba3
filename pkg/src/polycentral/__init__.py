"""Truncated filtered algebras for polycyclic groups over F_p.

A polycyclic group is embedded, one cyclic extension at a time, into the
units of a filtered algebra with standard-monomial basis.  The induced
weights define a p-series whose restricted Lie algebra is computed up to a
cutoff degree.
"""

from ._backend import BACKEND, available_backends
from .algebra import (INF, FilteredAlgebra, FilteredElement, WeightedVariable,
                      check_graded_polynomial)
from .builder import (GroupAlgebra, WeightSchedule, build_group_algebra, default_schedule,
                      direct_product, extend_cyclic_p_power, extend_infinite_cyclic,
                      finite_pgroup_schedule, line_embedding, recursive_p_schedule, step_for,
                      trivial_group_algebra, unit_schedule)
from .errors import *  # noqa: F401,F403
from .graded_lie import (Classification, GradedBasis, HomogeneousElement, bracket, classify,
                         generate_subalgebra, hom_component, p_power)
from .pcgroup import PcPresentation, check_consistency, collect, multiply
from .pseries import PSeriesSpec, check_axioms, equivalent_up_to, weight_of, weight_table
from .report import Report, run
from .scenario import Scenario, load_builtin, parse_scenario

__version__ = "0.1.0"
