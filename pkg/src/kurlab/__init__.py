"""Kuratowski monoids of polytopological spaces: words, normal forms, counts, witnesses."""

from .alphabet import ONE, ChainMorphism, Letter, Neg, PointedChain, Pos, StarChain, make_chain, validate_morphism
from .counting import K, binomial, family_counts, k_ratio, stirling_ratio, verify_sup_bound
from .errors import ConsistencyError, InputError, KurlabError, PreconditionError, ResourceError
from .rewrite import build_free_monoid, hasse_edges, multiply, normalize, words_equal
from .words import Family, FullWord, Word, classify, enumerate_full, enumerate_kuratowski, is_kuratowski

__version__ = "0.1.0"
