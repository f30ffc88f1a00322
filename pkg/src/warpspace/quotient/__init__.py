from .identification import Chart, Identification
from .space import Piece, QuotientSpace, as_quotient, check_identification, warp_quotient
from .net import NetGraph, build_net, lonely_nodes, net_geodesic, parse_piece_point, quotient_distance
from .chains import chain_infimum_bruteforce

__all__ = [
    "Chart", "Identification", "Piece", "QuotientSpace", "as_quotient", "check_identification", "warp_quotient",
    "NetGraph", "build_net", "lonely_nodes", "net_geodesic", "parse_piece_point", "quotient_distance",
    "chain_infimum_bruteforce",
]
