from .checks import (ConvexityReport, PseudometricReport, convexity_check, local_isometry_check,
                     net_pseudometric_check)
