"""polystrat: asymptotics of polynomial mappings and intersection homology.

Two halves share one exact arithmetic core:

* map analysis — singular loci, critical values, non-properness (Jelonek)
  sets, fiber counts, escaping witness arcs, leading forms at infinity;
* topology — filtered complexes, perversities, intersection homology with
  duality/invariance checkers, and combinatorial sheet models whose homology
  reflects non-properness.
"""

from .gaussian import GaussianRational, gr
from .polynomials import (MultiPoly, PolyMap, PolyError, PolyParseError,
                          UnknownVariableError, parse_poly, format_poly,
                          jacobian_det, resultant, squarefree_part)
from .varieties import AlgebraicSet, SignCondition
from .asymptotics import (AnalysisError, FiberCountError, analyze_map,
                          critical_values, fiber_count, jelonek_set,
                          load_map_file, load_map_text, properness_test,
                          singular_locus, witness_arc_search)
from .infinity import (DirectionSet, WitnessArc, dim_bound_check,
                       leading_map, leading_rank, leading_zero_locus,
                       tangent_cone_at_infinity)

__version__ = "0.1.0"
