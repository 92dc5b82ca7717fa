"""Curvature contraction flows for convex surfaces of revolution.

Numerical machinery for flows of strictly convex axisymmetric surfaces by
symmetric homogeneous functions of the principal curvatures: pointwise
pinching quantities and their gradient quadratic forms, a speed catalog
with analytic derivatives, support-function geometry, an explicit flow
engine with maximum-principle monitors, and the prescribed-curvature-ratio
construction that witnesses pinching violations for degrees above one.
"""

from .curvature import (PrincipalCurvatures, QFormGradients, critical_ratio,
                        g_gradient, g_quantity, gradient_conditions,
                        pinch_ratio, q_form_degree_alpha, q_form_degree_one,
                        q_form_raw, ratio_from_g)
from .counterexample import (PinchProfileSpec, PinchViolationWitness,
                             build_constant_ratio_profile, build_profile,
                             dgdt_annulus, find_pinch_violation,
                             transition_function)
from .flow import (FlowConfig, FlowResult, FlowState, MonitorRecord, cfl_dt,
                   estimate_extinction, monitors, rescale, rhs, run, step)
from .geometry import (BodyDiagnostics, ConvexityError, RevolutionProfile,
                       SupportProfile, curvatures_from_profile,
                       grad2_h11_formula, inradius_circumradius, make_ball,
                       make_spheroid, profile_to_support, radii_from_support,
                       sphere_deviation)
from .speeds import (SpeedFunction, check_homogeneity, parse_speed,
                     second_derivative_components)

__version__ = "0.1.0"
