"""
Embedded golden values with provenance tags.

PUBLISHED marks a value stated in the published worked example or table. DERIVED marks one computed by hand
from the worked example's reconstruction or by exhaustive enumeration.
"""

from typing import Dict, Optional, Tuple

PUBLISHED = "PUBLISHED"
DERIVED = "DERIVED"

# Worked example, keyed by check name: (expected, provenance).
FIGURE1: Dict[str, Tuple[object, str]] = {
    "cut_sigma": (8, PUBLISHED),
    "social_welfare": (16, PUBLISHED),
    "payoffs": ([2, 2, 3, 4, 3, 2], PUBLISHED),
    "degree_v4": (4, PUBLISHED),
    "color_degree_v1_blue": (2, DERIVED),
    "coalition_colors": ([1, 3], PUBLISHED),
    "red_class": ([0, 2], PUBLISHED),
    "deviating_set": ([0, 2, 4], PUBLISHED),
    "cut_gamma": (7, DERIVED),
    "p_c": (0, DERIVED),
    "deviation_strong": (False, PUBLISHED),
    "best_response_v1": ([3, 1], DERIVED),
    "nash_witness": ([0, 3], DERIVED),
    "max_cut_k3": (9, DERIVED),
}

# S(gamma) differs between the two edge-set reconstructions.
FIGURE1_CUT_GAMMA = {"v1-v3": 7, "v1-v6": 8}

# Coalition pair-count table: row -> minimum coalition size and the class sizes
# other than the trailing singletons.
TABLE1_ROWS: Dict[str, Tuple[int, Tuple[int, ...]]] = {
    "a.1": (4, (3,)),
    "a.2": (4, (2, 2)),
    "b.1": (5, (4,)),
    "b.2": (5, (3, 2)),
    "b.3": (6, (2, 2, 2)),
}
TABLE1_SIZES = (4, 5, 6, 7, 8)
TABLE1_OPEN_ENDED = 8

# (row, |C|) -> maxP_C, None where the row is not feasible.
TABLE1_MAX_PC: Dict[Tuple[str, int], Optional[int]] = {
    ("a.1", 4): 0,
    ("a.1", 5): 2,
    ("a.1", 6): 3,
    ("a.1", 7): 3,
    ("a.1", 8): 3,
    ("a.2", 4): 0,
    ("a.2", 5): 2,
    ("a.2", 6): 2,
    ("a.2", 7): 2,
    ("a.2", 8): 2,
    ("b.1", 4): None,
    ("b.1", 5): 0,
    ("b.1", 6): 4,
    ("b.1", 7): 5,
    ("b.1", 8): 6,
    ("b.2", 4): None,
    ("b.2", 5): 0,
    ("b.2", 6): 3,
    ("b.2", 7): 4,
    ("b.2", 8): 4,
    ("b.3", 4): None,
    ("b.3", 5): None,
    ("b.3", 6): 3,
    ("b.3", 7): 3,
    ("b.3", 8): 3,
}

# Three-colour configurations of a seven-member coalition: class sizes -> (maxP_C, 7 - maxP_C).
SEVEN_MEMBER_CONFIGS: Dict[Tuple[int, ...], Tuple[int, int]] = {
    (3, 2, 2): (4, 3),
    (3, 3, 1): (4, 3),
    (4, 2, 1): (5, 2),
    (5, 1, 1): (6, 1),
}

# Five-vertex graph counts.
TRIANGLE_CLAIM = {
    "graphs_n5_m7": 120,
    "with_triangle_n5_m7": 120,
    "triangle_free_n5_m6": 10,
    "max_triangle_free_edges_n5": 6,
    "graphs_n5_m10": 1,
}
