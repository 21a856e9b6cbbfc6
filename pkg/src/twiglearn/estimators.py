"""Scikit-learn style wrappers around the learners.

``fit`` consumes example trees and stores the learned query; ``predict``
evaluates it on new documents.  Parameters follow the usual get_params/
set_params protocol so the estimators compose with pipelines and
cross-validation tooling.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .matching import answers, embeds
from .path_learners import learn_anch_path0, learn_conj_path0
from .trees import DecoratedTree, Tree
from .twig_learners import learn_psf_twig0, learn_psf_twig1
from .path_learners import learn_anch_path1

BOOLEAN_CLASSES = ("path0", "conj0", "twig0")
UNARY_CLASSES = ("path1", "twig1")


def _check_trees(X, kind) -> list:
    out = list(X)
    if not out:
        raise ValueError("the sample is empty")
    for x in out:
        if not isinstance(x, kind):
            raise TypeError(f"expected {kind.__name__} examples, got {type(x).__name__}")
    return out


class BooleanQueryLearner(BaseEstimator):
    """Learns a Boolean query from positively marked trees.

    ``query_class`` picks the target class: a single anchored path
    ("path0"), a root-glued conjunction of them ("conj0"), or a
    path-subsumption-free twig ("twig0").  ``y`` may mark examples as
    positive/negative; negatives steer the "path0" choice and are
    reported through ``consistent_``, the learners themselves train on
    positives only.
    """

    def __init__(self, query_class: str = "twig0"):
        self.query_class = query_class

    def fit(self, X: Iterable[Tree], y: Optional[Sequence[bool]] = None):
        if self.query_class not in BOOLEAN_CLASSES:
            raise ValueError(f"query_class must be one of {BOOLEAN_CLASSES}")
        trees = _check_trees(X, Tree)
        if y is None:
            positives, negatives = trees, []
        else:
            flags = [bool(v) for v in y]
            if len(flags) != len(trees):
                raise ValueError("X and y length mismatch")
            positives = [t for t, f in zip(trees, flags) if f]
            negatives = [t for t, f in zip(trees, flags) if not f]
        if not positives:
            raise ValueError("need at least one positive example")
        if self.query_class == "path0":
            self.query_ = learn_anch_path0(positives, negatives=negatives)
        elif self.query_class == "conj0":
            self.query_ = learn_conj_path0(positives)
        else:
            self.query_ = learn_psf_twig0(positives)
        self.query_text_ = self.query_.canonical
        self.consistent_ = all(not embeds(self.query_, t) for t in negatives)
        return self

    def predict(self, X: Iterable[Tree]) -> np.ndarray:
        if not hasattr(self, "query_"):
            raise NotFittedError("call fit before predict")
        return np.array([embeds(self.query_, t) for t in _check_trees(X, Tree)])


class NodeSelectorLearner(BaseEstimator):
    """Learns a unary query from decorated trees and selects nodes.

    ``query_class`` is "path1" for anchored path queries or "twig1" for
    path-subsumption-free twigs.  ``predict`` (alias ``transform``)
    returns, per document, the sorted tuple of selected node ids.
    """

    def __init__(self, query_class: str = "twig1"):
        self.query_class = query_class

    def fit(self, X: Iterable[DecoratedTree], y=None):
        if self.query_class not in UNARY_CLASSES:
            raise ValueError(f"query_class must be one of {UNARY_CLASSES}")
        examples = _check_trees(X, DecoratedTree)
        if self.query_class == "path1":
            self.query_ = learn_anch_path1(examples)
        else:
            self.query_ = learn_psf_twig1(examples)
        self.query_text_ = self.query_.canonical
        return self

    def predict(self, X: Iterable[Tree]) -> list[tuple[int, ...]]:
        if not hasattr(self, "query_"):
            raise NotFittedError("call fit before predict")
        return [tuple(sorted(answers(self.query_, t))) for t in _check_trees(X, Tree)]

    def transform(self, X: Iterable[Tree]) -> list[tuple[int, ...]]:
        return self.predict(X)
