"""Embedding existence, enumeration, answer sets, and subsumption.

An embedding maps query nodes to target nodes: the root to the root,
child edges to child edges, descendant edges to proper-descendant
chains (in trees) or to non-empty child/descendant chains (in queries),
labels of images must match the query labels (a concrete label matches
``*``; ``*`` matches nothing but itself), and the selecting node maps
to the selected node when both sides are unary.  Embeddings need not be
injective.
"""

from __future__ import annotations

from typing import Optional, Union

from .errors import ArityMismatchError, CapExceededError
from .queries import CHILD, STAR, ConjQuery, TwigQuery
from .trees import DecoratedTree, Tree

Target = Union[Tree, DecoratedTree]

#: Witness mapping query node ids to target node ids.
EmbeddingMap = dict[int, int]

DEFAULT_ENUM_CAP = 10**6


def _label_matches(target_label: str, query_label: str) -> bool:
    return query_label == STAR or target_label == query_label


def _as_twig(q: Union[TwigQuery, ConjQuery]) -> TwigQuery:
    return q.as_twig() if isinstance(q, ConjQuery) else q


def _split_target(t: Target) -> tuple[Tree, Optional[int]]:
    if isinstance(t, DecoratedTree):
        return t.tree, t.selected
    return t, None


def _check_arity(q: TwigQuery, selected: Optional[int]):
    if q.is_unary != (selected is not None):
        raise ArityMismatchError(
            "boolean queries pair with trees, unary queries with decorated trees"
        )


def _match_table(q: TwigQuery, tree: Tree, selected: Optional[int]) -> list[list[bool]]:
    """match[qn][tn]: the subtree of q rooted at qn embeds at tn.

    Bottom-up over query nodes (reverse preorder).  ``below[qc][tn]``
    caches "some strict-or-equal descendant of tn hosts qc", so each
    (query node, tree node) pair costs O(children).
    """
    nq, nt = q.size, tree.size
    match = [[False] * nt for _ in range(nq)]
    below = [[False] * nt for _ in range(nq)]
    kids_q = q.children
    kids_t = tree.children
    for qn in range(nq - 1, -1, -1):
        qlab = q.labels[qn]
        row = match[qn]
        for tn in range(nt - 1, -1, -1):
            ok = _label_matches(tree.labels[tn], qlab)
            if ok and selected is not None and qn == q.selecting:
                ok = tn == selected
            if ok:
                for qc in kids_q[qn]:
                    if q.edges[qc] == CHILD:
                        if not any(match[qc][tc] for tc in kids_t[tn]):
                            ok = False
                            break
                    else:
                        if not any(below[qc][tc] for tc in kids_t[tn]):
                            ok = False
                            break
            row[tn] = ok
        b = below[qn]
        for tn in range(nt - 1, -1, -1):
            b[tn] = row[tn] or any(b[tc] for tc in kids_t[tn])
    return match


def embeds(q: Union[TwigQuery, ConjQuery], t: Target) -> bool:
    """Membership: does the query hold in the (possibly decorated) tree?"""
    qq = _as_twig(q)
    tree, selected = _split_target(t)
    _check_arity(qq, selected)
    return _match_table(qq, tree, selected)[0][0]


def embed_witness(q: Union[TwigQuery, ConjQuery], t: Target) -> Optional[EmbeddingMap]:
    """One embedding as a node map, or None."""
    qq = _as_twig(q)
    tree, selected = _split_target(t)
    _check_arity(qq, selected)
    match = _match_table(qq, tree, selected)
    if not match[0][0]:
        return None
    assignment: EmbeddingMap = {0: 0}

    def descendants(tn: int):
        stack = list(tree.children[tn])
        while stack:
            v = stack.pop()
            yield v
            stack.extend(tree.children[v])

    def place(qn: int):
        tn = assignment[qn]
        for qc in qq.children[qn]:
            pool = tree.children[tn] if qq.edges[qc] == CHILD else descendants(tn)
            for tc in pool:
                if match[qc][tc]:
                    assignment[qc] = tc
                    break
            place(qc)

    place(0)
    return assignment


def count_embeddings(
    q: Union[TwigQuery, ConjQuery], t: Target, cap: int = DEFAULT_ENUM_CAP
) -> int:
    """Number of distinct total assignments; brute force, desk scale only.

    Refuses when the product of per-node candidate pools exceeds ``cap``.
    """
    qq = _as_twig(q)
    tree, selected = _split_target(t)
    _check_arity(qq, selected)

    candidates: list[list[int]] = []
    total = 1
    for qn in range(qq.size):
        pool = [
            tn
            for tn in range(tree.size)
            if _label_matches(tree.labels[tn], qq.labels[qn])
        ]
        candidates.append(pool)
        total *= max(len(pool), 1)
        if total > cap:
            raise CapExceededError(
                f"assignment space exceeds cap of {cap} candidates"
            )

    ancestors = [frozenset(tree.ancestors(n)) for n in range(tree.size)]

    def ok_edge(qc: int, tp: int, tc: int) -> bool:
        if qq.edges[qc] == CHILD:
            return tree.parents[tc] == tp
        return tp in ancestors[tc]

    count = 0

    def rec(qn: int, assignment: list[int]) -> None:
        nonlocal count
        if qn == qq.size:
            count += 1
            return
        parent = qq.parents[qn]
        for tn in candidates[qn]:
            if qn == 0:
                if tn != 0:
                    continue
            elif not ok_edge(qn, assignment[parent], tn):
                continue
            if selected is not None and qn == qq.selecting and tn != selected:
                continue
            assignment.append(tn)
            rec(qn + 1, assignment)
            assignment.pop()

    rec(0, [])
    return count


def answers(q: TwigQuery, t: Tree) -> frozenset[int]:
    """Nodes selected by a unary query in a tree (the root never is).

    One bottom-up pass plus one top-down pass: ``match`` ignores the
    selection, ``feas[qn][tn]`` then marks images reachable by some full
    embedding, and the answers are the feasible images of the selecting
    node.
    """
    if not q.is_unary:
        raise ArityMismatchError("answers needs a unary query")
    match = _match_table(q, t, None)
    nq, nt = q.size, t.size
    feas = [[False] * nt for _ in range(nq)]
    feas[0][0] = match[0][0]

    order = sorted(range(nq), key=lambda v: len(q.root_path_nodes(v)))
    for qc in order:
        if qc == 0:
            continue
        qp = q.parents[qc]
        # a parent image works for qc's siblings independently, so tn is
        # feasible for qc iff some edge-compatible tp is feasible for qp
        if q.edges[qc] == CHILD:
            for tn in range(1, nt):
                feas[qc][tn] = (
                    match[qc][tn] and feas[qp][t.parents[tn]]
                )
        else:
            for tn in range(1, nt):
                if match[qc][tn]:
                    feas[qc][tn] = any(feas[qp][a] for a in t.ancestors(tn))
    sel = q.selecting
    return frozenset(tn for tn in range(nt) if feas[sel][tn])


def _reach_any(q: TwigQuery) -> list[frozenset[int]]:
    """reach[v]: nodes strictly below v along any edges."""
    reach: list[set[int]] = [set() for _ in range(q.size)]
    for v in range(q.size - 1, 0, -1):
        p = q.parents[v]
        reach[p].add(v)
        reach[p] |= reach[v]
    return [frozenset(s) for s in reach]


def subsumes(p: Union[TwigQuery, ConjQuery], q: Union[TwigQuery, ConjQuery]) -> bool:
    """True iff p subsumes q: an embedding of p into q exists.

    Child edges of p map to child edges of q; descendant edges map to
    non-empty chains over q's child or descendant edges.  Subsumption
    implies containment of q's language in p's.
    """
    pp, qq = _as_twig(p), _as_twig(q)
    if pp.is_unary != qq.is_unary:
        raise ArityMismatchError("subsumption needs same-arity queries")

    np_, nq = pp.size, qq.size
    match = [[False] * nq for _ in range(np_)]
    below = [[False] * nq for _ in range(np_)]
    for pn in range(np_ - 1, -1, -1):
        plab = pp.labels[pn]
        row = match[pn]
        for qn in range(nq - 1, -1, -1):
            ok = _label_matches(qq.labels[qn], plab)
            if ok and pp.is_unary and pn == pp.selecting:
                ok = qn == qq.selecting
            if ok:
                for pc in pp.children[pn]:
                    if pp.edges[pc] == CHILD:
                        if not any(
                            match[pc][qc]
                            for qc in qq.children[qn]
                            if qq.edges[qc] == CHILD
                        ):
                            ok = False
                            break
                    else:
                        if not any(below[pc][qc] for qc in qq.children[qn]):
                            ok = False
                            break
            row[qn] = ok
        b = below[pn]
        for qn in range(nq - 1, -1, -1):
            b[qn] = row[qn] or any(b[qc] for qc in qq.children[qn])
    return match[0][0]


def equiv_by_subsumption(
    p: Union[TwigQuery, ConjQuery], q: Union[TwigQuery, ConjQuery]
) -> bool:
    """Mutual subsumption; decides equivalence on the supported classes
    (anchored paths, conjunctions, path-subsumption-free twigs), which
    the caller asserts.
    """
    return subsumes(p, q) and subsumes(q, p)
