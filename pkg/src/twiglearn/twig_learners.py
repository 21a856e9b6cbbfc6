"""Learning path-subsumption-free twig queries.

The Boolean learner aggregates the paths inferred by the conjunction
learner into one twig by fusing them in: a fusion splits a path at a
node, embeds the prefix into the twig, and grafts the suffix at the
image of the split node.  Among the consistent fusions the subsumption-
minimal one is kept (ties go to fewer nodes, then canonical text).

The unary learner first infers the selecting path, then decorates each
spine step with filters learned from the subtrees rooted at the deepest
node that the spine prefix reaches while the already-built suffix still
selects the example's node.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

from .errors import EmptySampleError
from .matching import _label_matches, embeds, subsumes
from .path_learners import DEFAULT_CONFIG, LearnerConfig, learn_conj_path0, learn_anch_path1
from .queries import CHILD, TwigQuery, path_labels_edges
from .trees import DecoratedTree, Tree

#: Sentinel for the empty twig; fusing a path into it yields the path.
PHANTOM = None


def _prefix_images(prefix_labels, prefix_edges, q: TwigQuery) -> list[int]:
    """Feasible images in q of the last node of a chain embedded from
    q's root (child edges to child edges, descendant edges to non-empty
    chains of any edges)."""
    if not _label_matches(q.labels[0], prefix_labels[0]):
        return []
    current = {0}
    for lab, edge in zip(prefix_labels[1:], prefix_edges):
        nxt: set[int] = set()
        if edge == CHILD:
            for u in current:
                for c in q.children[u]:
                    if q.edges[c] == CHILD and _label_matches(q.labels[c], lab):
                        nxt.add(c)
        else:
            below: set[int] = set()
            stack = [c for u in current for c in q.children[u]]
            while stack:
                v = stack.pop()
                if v in below:
                    continue
                below.add(v)
                stack.extend(q.children[v])
            nxt = {v for v in below if _label_matches(q.labels[v], lab)}
        current = nxt
        if not current:
            break
    return sorted(current)


def _graft(q: TwigQuery, at: int, labels, edges) -> TwigQuery:
    """Attach the chain ``labels[1:]`` below node ``at`` of q; the chain
    root merges with ``at`` and its label is dropped."""
    new_labels = list(q.labels)
    new_parents = list(q.parents)
    new_edges = list(q.edges)
    parent = at
    for lab, edge in zip(labels[1:], edges):
        new_labels.append(lab)
        new_parents.append(parent)
        new_edges.append(edge)
        parent = len(new_labels) - 1
    return TwigQuery(
        tuple(new_labels), tuple(new_parents), tuple(new_edges), q.selecting
    )


def fusions(p: TwigQuery, q: Optional[TwigQuery]) -> tuple[TwigQuery, ...]:
    """All fusions of the Boolean path p into the twig q.

    For every split of p and every embedding of the split's prefix into
    q, the suffix is grafted at the image of the split node, which keeps
    q's label there.  Results are deduplicated canonically; fusing into
    the phantom empty twig yields p itself.
    """
    if q is PHANTOM:
        return (p.as_boolean() if p.is_unary else p,)
    labels, edges = path_labels_edges(p)
    out: dict[str, TwigQuery] = {}
    for split in range(len(labels)):
        prefix_labels = labels[: split + 1]
        prefix_edges = edges[:split]
        suffix_labels = labels[split:]
        suffix_edges = edges[split:]
        for image in _prefix_images(prefix_labels, prefix_edges, q):
            fused = _graft(q, image, suffix_labels, suffix_edges)
            out[fused.canonical] = fused
    return tuple(out[k] for k in sorted(out))


def _minimal_candidate(cands: Sequence[TwigQuery]) -> TwigQuery:
    """The subsumption-minimal candidate; among mutually subsuming
    minima the smallest, canonically least one."""
    minimal = [
        c
        for c in cands
        if not any(
            subsumes(c, other) and not subsumes(other, c) for other in cands
        )
    ]
    return min(minimal, key=lambda c: (c.size, c.canonical))


def learn_psf_twig0(
    sample: Iterable[Tree], config: LearnerConfig = DEFAULT_CONFIG
) -> TwigQuery:
    """Boolean path-subsumption-free twig consistent with the sample."""
    trees = list(sample)
    if not trees:
        raise EmptySampleError("cannot learn from an empty sample")
    conj = learn_conj_path0(trees, config)
    q: Optional[TwigQuery] = PHANTOM
    for p in conj.members:  # ConjQuery keeps members canonically sorted
        cands = [
            f for f in fusions(p, q) if all(embeds(f, t) for t in trees)
        ]
        assert cands, "a sample-satisfied path always fuses consistently"
        q = _minimal_candidate(cands)
    return q


# -- unary twigs ---------------------------------------------------------------
#
# Intermediate states carry an anchor: the deepest spine node built so
# far.  The anchor must land on the example's selected node, which can
# be the subtree root at the deepest step, so consistency is checked
# through anchored embeddings rather than decorated trees.


def _embeds_anchored(q: TwigQuery, anchor_q: int, t: Tree, anchor_t: int) -> bool:
    """Embedding of q into t with the anchor pinned, roots to roots."""
    pinned = TwigQuery(q.labels, q.parents, q.edges, anchor_q if anchor_q else None)
    if anchor_q == 0:
        return anchor_t == 0 and embeds(pinned, t)
    if anchor_t == 0:
        return False
    return embeds(pinned, DecoratedTree(t, anchor_t))


def _twig1_star_core(
    examples: Sequence[tuple[Tree, int]],
    q0: TwigQuery,
    anchor: int,
    config: LearnerConfig,
) -> TwigQuery:
    """Fusion loop over the paths of the underlying trees, with
    consistency judged by anchored embeddings into the examples."""
    conj = learn_conj_path0([t for t, _ in examples], config)

    def consistent(cand: TwigQuery) -> bool:
        return all(
            _embeds_anchored(cand, anchor, t, sel) for t, sel in examples
        )

    q = q0
    for p in conj.members:
        cands = [f for f in fusions(p, q) if consistent(f)]
        if not cands:
            # labels inferred under a wildcard spine step may disagree
            # with the step's label at the root split; such a path
            # cannot attach anywhere, so it is dropped
            continue
        q = _minimal_candidate(cands)
    return q


def learn_psf_twig1_star(
    sample: Iterable[DecoratedTree],
    q0: TwigQuery,
    config: LearnerConfig = DEFAULT_CONFIG,
) -> TwigQuery:
    """Specialize the unary twig q0 with filters inferred from the
    sample; every example must already satisfy q0."""
    examples = list(sample)
    if not examples:
        raise EmptySampleError("cannot learn from an empty sample")
    if not q0.is_unary:
        raise ValueError("q0 must be a unary query")
    for t in examples:
        if not embeds(q0, t):
            raise ValueError("sample must satisfy the starting query")
    pairs = [(t.tree, t.selected) for t in examples]
    return _twig1_star_core(pairs, q0, q0.selecting, config)


def learn_psf_twig1(
    sample: Iterable[DecoratedTree], config: LearnerConfig = DEFAULT_CONFIG
) -> TwigQuery:
    """Unary path-subsumption-free twig consistent with the sample."""
    examples = list(sample)
    if not examples:
        raise EmptySampleError("cannot learn from an empty sample")
    spine = learn_anch_path1(examples, config)
    labels, edges = path_labels_edges(spine)
    k = len(labels) - 1

    # current suffix query plus its anchor (the deepest spine node)
    current = TwigQuery((labels[k],), (-1,), (CHILD,))
    anchor = 0
    for i in range(k, -1, -1):
        prefix_labels = labels[: i + 1]
        prefix_edges = edges[:i]
        step_examples: list[tuple[Tree, int]] = []
        for ex in examples:
            chain = ex.tree.root_path_nodes(ex.selected)
            chosen = None
            for n in reversed(chain):  # deepest such node wins
                if not _spine_reaches(prefix_labels, prefix_edges, ex.tree, n):
                    continue
                sub, remap = ex.tree.subtree(n)
                if _embeds_anchored(current, anchor, sub, remap[ex.selected]):
                    chosen = (sub, remap[ex.selected])
                    break
            assert chosen is not None, "the spine reaches every example"
            step_examples.append(chosen)
        q_i = _twig1_star_core(step_examples, current, anchor, config)
        if i > 0:
            current = _prepend_step(q_i, labels[i - 1], edges[i - 1])
            anchor = _anchor_after_prepend(q_i, anchor)
    result = TwigQuery(q_i.labels, q_i.parents, q_i.edges, anchor)
    return result


def _spine_reaches(prefix_labels, prefix_edges, t: Tree, n: int) -> bool:
    """Is node n reachable from the root along the spine prefix?"""
    chain = t.root_path_nodes(n)
    word = tuple(t.labels[v] for v in chain)
    from .path_learners import match_word

    return match_word(tuple(prefix_labels), tuple(prefix_edges), word, True)


def _prepend_step(q: TwigQuery, label: str, edge: int) -> TwigQuery:
    """New root labeled ``label`` with q hanging off it by ``edge``."""
    labels = (label, *q.labels)
    parents = (-1, 0, *(p + 1 for p in q.parents[1:]))
    edges = (CHILD, edge, *q.edges[1:])
    return TwigQuery(labels, parents, edges)


def _anchor_after_prepend(q: TwigQuery, anchor: int) -> int:
    return anchor + 1
