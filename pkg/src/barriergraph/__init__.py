"""Barrier graphs: 2-degenerate Hamiltonian graphs whose induced paths stay short."""
from .analysis import (
    InducedPathResult,
    analyze_path,
    bound_report,
    check_structure_lemmas,
    lip_bruteforce,
    lip_exact,
    lip_heuristic,
    nodm_lower_bound,
    random_induced_path,
)
from .barrier_words import (
    check_word_properties,
    collapse,
    factor_barrier,
    full_barrier,
    max_nested_chain,
    reach_classes,
)
from .blowup import (
    BlowupGraph,
    PathCertificate,
    build_blowup,
    check_path,
    degeneracy,
    hamiltonian_path,
)
from .index_tree import (
    IndexTree,
    IndexTreeError,
    build_complete,
    build_near_complete,
    build_unbalanced,
)
from .ribbed import RibbedTree, build_ribbed, verify_ribbed
from .skeleton import SkeletonGuardError, SkeletonTree, build_skeleton, verify_skeleton, zone_ancestor


def build_graph(t: IndexTree, allow_large: bool = False) -> BlowupGraph:
    """Skeleton, ribbed-tree and blow-up for index-tree t in one call."""
    st = build_skeleton(t.ell, allow_large=allow_large)
    return build_blowup(build_ribbed(st, t))


__version__ = "0.1.0"
