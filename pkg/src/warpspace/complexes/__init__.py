from .gluing import GluingCertificate, certify_gluing
from .cylinders import CollarReport, CylinderSpace, build_extended_cylinder, build_spiral, check_straight_collars
from .graph_of_spaces import (EdgeSpec, GraphOfSpacesSpec, build_multiwarp_space, build_total_space_combinatorial,
                              build_two_sided_cylinder)

__all__ = [
    "GluingCertificate", "certify_gluing",
    "CollarReport", "CylinderSpace", "build_extended_cylinder", "build_spiral", "check_straight_collars",
    "EdgeSpec", "GraphOfSpacesSpec", "build_multiwarp_space", "build_total_space_combinatorial",
    "build_two_sided_cylinder",
]
