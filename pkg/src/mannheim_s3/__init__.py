"""Curves in the 3-sphere: Frenet apparatus, Mannheim pairs, and a binormal
construction of curves in Euclidean 4-space."""

from .errors import (DegenerateAngle, DomainError, EmptyInput, FrameDegenerate,
                     GeometryError, IntegrationFailure, NotAdmissible, NotImmersed,
                     PlaneCurveNotAllowed, PoleOnCurve, RadiusMismatch, SignMismatch,
                     TangentPole)
from .frenet import (ArcLengthTable, CurvatureProfile, FrameField, FrenetFrameS3,
                     ParamCurveS3, SynthesizedCurve, arclength_reparametrize,
                     check_immersed, frames_from_samples, frenet_apparatus,
                     plane_curve_test, sample_frames, synthesize_from_curvatures)
from .frenet_e4 import (FrenetFrameE4, ParamCurveE4, frenet_apparatus_e4,
                        generalized_mannheim_condition)
from .gm4 import GM4Result, gm4_construct, gm4_verify
from .mannheim import (MannheimPairReport, admissible_base_curvature, base_to_mannheim,
                       build_correspondence, extract_lambda_mu, generate_pair,
                       mannheim_candidacy, mate_from_mannheim, verify_pair)
from .sphere import (GeodesicS3, SpherePoint, TangentVector, geodesic_distance,
                     geodesic_eval, great_circle, oriented_complement, stereographic)
from .zoo import (ZooSpec, ccr_profile, conical_helix_profile, general_helix_profile,
                  torus_knot_curve)

__version__ = "0.1.0"

__all__ = ["DegenerateAngle", "DomainError", "EmptyInput", "FrameDegenerate",
    "GeometryError", "IntegrationFailure", "NotAdmissible", "NotImmersed",
    "PlaneCurveNotAllowed", "PoleOnCurve", "RadiusMismatch", "SignMismatch", "TangentPole",
    "ArcLengthTable", "CurvatureProfile", "FrameField", "FrenetFrameS3", "ParamCurveS3",
    "SynthesizedCurve", "arclength_reparametrize", "check_immersed", "frames_from_samples",
    "frenet_apparatus", "plane_curve_test", "sample_frames", "synthesize_from_curvatures",
    "FrenetFrameE4", "ParamCurveE4", "frenet_apparatus_e4",
    "generalized_mannheim_condition", "GM4Result", "gm4_construct", "gm4_verify",
    "MannheimPairReport", "admissible_base_curvature",
    "base_to_mannheim", "build_correspondence", "extract_lambda_mu", "generate_pair",
    "mannheim_candidacy", "mate_from_mannheim", "verify_pair", "GeodesicS3", "SpherePoint",
    "TangentVector", "geodesic_distance", "geodesic_eval", "great_circle",
    "oriented_complement", "stereographic", "ZooSpec", "ccr_profile",
    "conical_helix_profile", "general_helix_profile", "torus_knot_curve"]
