"""Separating curves on the closed genus-2 surface: Farey charts, markings,
the marking-to-separating-curve map and truncated separating-curve graphs."""

from .farey import Slope, farey_adjacent, farey_distance, farey_geodesic, mediant, parity_class, triangle_completions
from .markings import Marking, PhiSession, flip_move, phi, phi_stability_check, twist_move, validate_marking
from .sepgraph import SepVertex, build_ball, estimate_delta, is_adjacent, projection_lower_bound
from .subsurfaces import classify_subsurface, complement_chart
from .surfgroup import Curve, apply_twist, intersection_number, is_conjugate, reduce, self_intersection

__version__ = "0.1.0"
