"""
Immutable domain entities: ground sets and masks, monotone families,
graphs and digraphs, certificates and cover families.
"""

from .ground_set import EXACT_LIMIT, GroundSet, SubsetMask, iter_bits
from .family import Direction, MonotoneFamily, down_closure, minimal_elements, up_closure
from .graph import EdgeSet, Graph, edge_index, edge_pairs, pair_count
from .digraph import CoupledSample, Digraph
from .certificate import Certificate, FractionalCertificate
from .cover import CoverFamily, max_common_nonedges
from .weighted_family import FamilyClass, WeightedFamily
