from .oracle import closed_form_distance, has_closed_form, hyperbolic_oracle
from .solver import GeodesicResult, distance, project_to_base

__all__ = ["closed_form_distance", "has_closed_form", "hyperbolic_oracle",
           "GeodesicResult", "distance", "project_to_base"]
