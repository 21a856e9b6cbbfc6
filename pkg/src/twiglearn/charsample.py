"""Match sets: two-tree characteristic samples and the containment test.

For a query q of size N the match set holds exactly two trees: t0 is q
with every wildcard replaced by the minimal alphabet element a0 and
every descendant edge collapsed to a child edge; t1 is q with every
wildcard replaced by a fresh label a1 and every descendant edge blown
up into a chain of exactly N nodes labeled by a second fresh label a2.
On the supported classes, q is contained in q' exactly when both trees
satisfy q'.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import ClassViolationError
from .matching import embeds
from .queries import DESC, STAR, ConjQuery, TwigQuery
from .trees import DEFAULT_MIN_LABEL, DecoratedTree, Example, Tree

QueryLike = Union[TwigQuery, ConjQuery]


@dataclass
class FreshLabeler:
    """Emits labels avoiding a forbidden set: base, then base_1, base_2, ..."""

    forbidden: set[str]
    counter: int = 0

    def fresh(self, base: str) -> str:
        k = 0
        candidate = base
        while candidate in self.forbidden:
            k += 1
            candidate = f"{base}_{k}"
        self.counter = max(self.counter, k)
        self.forbidden.add(candidate)
        return candidate


def _instantiate(q: TwigQuery, star: str, chain: int, chain_label: str) -> Example:
    """Read q as a tree: wildcards become ``star``; descendant edges
    become chains of ``chain`` nodes labeled ``chain_label``."""
    labels: list[str] = []
    parents: list[int] = []
    image: dict[int, int] = {}
    for v in range(q.size):
        parent = image[q.parents[v]] if v else -1
        if v and q.edges[v] == DESC:
            for _ in range(chain):
                labels.append(chain_label)
                parents.append(parent)
                parent = len(labels) - 1
        labels.append(q.labels[v] if q.labels[v] != STAR else star)
        parents.append(parent)
        image[v] = len(labels) - 1
    tree = Tree(tuple(labels), tuple(parents))
    if q.selecting is not None:
        return DecoratedTree(tree, image[q.selecting])
    return tree


def char_sample(q: QueryLike, a0: str = DEFAULT_MIN_LABEL) -> tuple[Example, Example]:
    """The two-tree match set of q; decorated when q is unary."""
    qq = q.as_twig() if isinstance(q, ConjQuery) else q
    n = qq.size
    labeler = FreshLabeler(set(qq.labels) | {a0, STAR})
    a1 = labeler.fresh("a1")
    a2 = labeler.fresh("a2")
    t0 = _instantiate(qq, a0, 0, a2)
    t1 = _instantiate(qq, a1, n, a2)
    return (t0, t1)


def p2_contains(q: QueryLike, q2: QueryLike, a0: str = DEFAULT_MIN_LABEL) -> bool:
    """Containment of q in q2, decided through q's match set.

    Valid when both queries belong to one supported class (anchored
    paths, conjunctions of them, or path-subsumption-free twigs).
    """
    qt = q.as_twig() if isinstance(q, ConjQuery) else q
    q2t = q2.as_twig() if isinstance(q2, ConjQuery) else q2
    if qt.is_unary != q2t.is_unary:
        raise ClassViolationError("containment needs same-arity queries")
    return all(embeds(q2t, t) for t in char_sample(qt, a0))
