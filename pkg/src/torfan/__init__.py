"""Exact fiber fans, GIT chamber complexes and toric Chow quotient fans."""

from .errors import (DimensionError, EmptyPolyhedron, FiberEmpty, NotACone, ParseError, PointOutside,
                     RankDeficient, RankError, RouteMismatch, SchemaError, SupportMismatch, TorfanError,
                     UnboundedDirection)
from .fans import (Fan, PolyhedralComplex, common_refinement, cone_over_complex, fan_equal, induced_fan,
                   normal_cone, normal_fan)
from .polyhedra import (Face, Polyhedron, affine_slice, cone, dual_cone, face_min, fiber_slice, homogenize,
                        image, minimal_face_containing, minkowski_sum, recession_cone, relint_point,
                        slice_at_height, tilde_face, whole_space)
from .quotients import (ProjectionContext, VerificationReport, chow_fan, coherent_subdivision, dual_data,
                        fiber_fan, git_chamber_complex, git_quotient_fan, make_context, verify_affine_duality,
                        verify_fiber_duality, verify_main_theorem)

__version__ = "0.1.0"
