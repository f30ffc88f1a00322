from .descriptors import (Circle, EuclideanProduct, Interval, Line, Scaled, Warped, descriptor_from_json,
                          is_primitive, normalize_point, scaled)
from .fiber import WarpVector, fiber_coord, warp_factor
from .metric_core import PolyPath, base_distance, induced_length_metric, partition_sum, path_length
from .warp import make_warped, polyline_length, scale_inner, segment_lengths, shift_map, warped_path_length

__all__ = [
    "Circle", "EuclideanProduct", "Interval", "Line", "Scaled", "Warped", "descriptor_from_json",
    "is_primitive", "normalize_point", "scaled",
    "WarpVector", "fiber_coord", "warp_factor",
    "PolyPath", "base_distance", "induced_length_metric", "partition_sum", "path_length",
    "make_warped", "polyline_length", "scale_inner", "segment_lengths", "shift_map", "warped_path_length",
]
