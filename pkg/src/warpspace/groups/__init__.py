from .graph_of_groups import GraphOfGroupsSpec, GroupEdge, is_graph_of_groups
from .presentation import Presentation, Word, serre_presentation
from .realize import Realization, certify_cover, circle_cover, realize_graph_of_groups, to_spaces_spec

__all__ = [
    "GraphOfGroupsSpec", "GroupEdge", "is_graph_of_groups",
    "Presentation", "Word", "serre_presentation",
    "Realization", "certify_cover", "circle_cover", "realize_graph_of_groups", "to_spaces_spec",
]
