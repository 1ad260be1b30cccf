"""Inscribed rhombi of prescribed diagonal angle in polygonal Jordan curves."""

__version__ = "0.1.0"

from .corners import CornerRecord, SweepPlan, find_special_corners, plan_sweep, special_corner_angles
from .curve import CurveSpec, JordanCurve, generate, load_curve, save_curve, validate_simple
from .errors import CurveParseError, CurveValidationError, InvariantViolation, RhombiError, TwoCornerError
from .frame import ArcSplit, SupportFrame, rec_region, split_arcs, support_frame
from .median import MedianSet, ZeroMask, median_mask, median_set
from .oracle import OracleConfig, brute_force_rhombi, compare_with_oracle
from .search import RhombusCandidate, find_rhombi, validate_rhombus
from .separation import CornerPair, masks_intersect, separates
from .two_corner import TwoCornerFrame, clip_curve, compute_frame, two_corner_search

__all__ = [
    "ArcSplit",
    "CornerPair",
    "CornerRecord",
    "CurveParseError",
    "CurveSpec",
    "CurveValidationError",
    "InvariantViolation",
    "JordanCurve",
    "MedianSet",
    "OracleConfig",
    "RhombiError",
    "RhombusCandidate",
    "SupportFrame",
    "SweepPlan",
    "TwoCornerError",
    "TwoCornerFrame",
    "ZeroMask",
    "brute_force_rhombi",
    "clip_curve",
    "compare_with_oracle",
    "compute_frame",
    "find_rhombi",
    "find_special_corners",
    "generate",
    "load_curve",
    "masks_intersect",
    "median_mask",
    "median_set",
    "plan_sweep",
    "rec_region",
    "save_curve",
    "separates",
    "special_corner_angles",
    "split_arcs",
    "support_frame",
    "two_corner_search",
    "validate_rhombus",
    "validate_simple",
]
