"""Query-by-example learning of path and twig queries over XML trees."""

from .charsample import FreshLabeler, char_sample, p2_contains
from .consistency import (
    CnfFormula,
    brute_force_sat,
    check_consistency,
    parse_dimacs,
    reduction_spec,
    sat_crosscheck,
    sat_to_sample,
)
from .errors import (
    ArityMismatchError,
    CapExceededError,
    ClassViolationError,
    EmptySampleError,
    QuerySyntaxError,
    TermSyntaxError,
    TwiglearnError,
    XmlFormatError,
)
from .estimators import BooleanQueryLearner, NodeSelectorLearner
from .matching import (
    EmbeddingMap,
    answers,
    count_embeddings,
    embed_witness,
    embeds,
    equiv_by_subsumption,
    subsumes,
)
from .oracle import (
    EnumSpec,
    enumerate_queries,
    enumerate_trees,
    minimal_consistent,
    most_specific_twig,
    refute_contains,
)
from .path_learners import (
    LearnerConfig,
    learn_anch_path0,
    learn_anch_path0_star,
    learn_anch_path1,
    learn_conj_path0,
)
from .queries import (
    CHILD,
    DESC,
    STAR,
    ConjQuery,
    TwigQuery,
    canonical_form,
    is_anchored,
    is_psf,
    parse_query,
    paths_of_query,
    path_query,
    query_iso,
    serialize,
    universal_query,
)
from .trees import (
    DecoratedTree,
    SignedSample,
    Tree,
    Word,
    add_virtual_root,
    canonical_min,
    parse_example,
    parse_term,
    parse_xml,
    parse_xml_tree,
    paths,
    sel_path,
    serialize_xml,
)
from .twig_learners import (
    fusions,
    learn_psf_twig0,
    learn_psf_twig1,
    learn_psf_twig1_star,
)

__version__ = "0.1.0"

__all__ = [
    "ArityMismatchError",
    "BooleanQueryLearner",
    "CapExceededError",
    "CHILD",
    "ClassViolationError",
    "CnfFormula",
    "ConjQuery",
    "DESC",
    "DecoratedTree",
    "EmbeddingMap",
    "EmptySampleError",
    "EnumSpec",
    "FreshLabeler",
    "LearnerConfig",
    "NodeSelectorLearner",
    "QuerySyntaxError",
    "STAR",
    "SignedSample",
    "TermSyntaxError",
    "Tree",
    "TwigQuery",
    "TwiglearnError",
    "Word",
    "XmlFormatError",
    "add_virtual_root",
    "answers",
    "brute_force_sat",
    "canonical_form",
    "canonical_min",
    "char_sample",
    "check_consistency",
    "count_embeddings",
    "embed_witness",
    "embeds",
    "enumerate_queries",
    "enumerate_trees",
    "equiv_by_subsumption",
    "fusions",
    "is_anchored",
    "is_psf",
    "learn_anch_path0",
    "learn_anch_path0_star",
    "learn_anch_path1",
    "learn_conj_path0",
    "learn_psf_twig0",
    "learn_psf_twig1",
    "learn_psf_twig1_star",
    "minimal_consistent",
    "most_specific_twig",
    "p2_contains",
    "parse_dimacs",
    "parse_example",
    "parse_query",
    "parse_term",
    "parse_xml",
    "parse_xml_tree",
    "path_query",
    "paths",
    "paths_of_query",
    "query_iso",
    "reduction_spec",
    "refute_contains",
    "sat_crosscheck",
    "sat_to_sample",
    "sel_path",
    "serialize",
    "serialize_xml",
    "subsumes",
    "universal_query",
]
