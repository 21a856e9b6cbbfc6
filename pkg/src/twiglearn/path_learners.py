"""Learning anchored path queries from positive examples.

All three learners share one engine that generalizes word-pattern
inference to label paths.  Starting from the universal pattern ``*//*``
over the canonically minimal witness word w, the engine

  1. inserts factors of w's inner part into descendant edges, longest
     factors first, as long as the sample stays satisfied;
  2. specializes the endpoint wildcards to w's first and last labels;
  3. for each descendant edge, measures the longest consistent wildcard
     chain below it and commits the exact-depth child-chain variant when
     that is still consistent (otherwise the edge stays a descendant
     edge).

The unary learner checks patterns against root-to-selected paths; the
Boolean variant checks them against any root-down chain of each tree
plus the seed word, and skips stage 3 for the edge into a wildcard
leaf, which keeps the output anchored.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import EmptySampleError
from .queries import CHILD, DESC, STAR, ConjQuery, TwigQuery, path_query
from .matching import embeds, subsumes
from .trees import DecoratedTree, Tree, Word, canonical_min, paths, word_key

Labels = tuple[str, ...]
Edges = tuple[int, ...]

FACTOR_TIE_BREAKS = ("leftmost-first",)
EDGE_SCAN_ORDERS = ("topmost-first",)
LEX_CHOICES = ("canonical-min",)


@dataclass(frozen=True)
class LearnerConfig:
    """Pins the choices the algorithms leave open, for determinism."""

    factor_tie_break: str = "leftmost-first"
    edge_scan_order: str = "topmost-first"
    lex_choice: str = "canonical-min"

    def __post_init__(self):
        if self.factor_tie_break not in FACTOR_TIE_BREAKS:
            raise ValueError(f"unknown factor tie-break {self.factor_tie_break!r}")
        if self.edge_scan_order not in EDGE_SCAN_ORDERS:
            raise ValueError(f"unknown edge scan order {self.edge_scan_order!r}")
        if self.lex_choice not in LEX_CHOICES:
            raise ValueError(f"unknown choice policy {self.lex_choice!r}")


DEFAULT_CONFIG = LearnerConfig()


# -- word-pattern matching ---------------------------------------------------


def match_word(labels: Labels, edges: Edges, w: Word, end_anchored: bool) -> bool:
    """Does the chain pattern match the word, anchored at the start?

    Child edges advance exactly one position, descendant edges at least
    one.  ``end_anchored`` additionally pins the last pattern node to
    the last word position.
    """
    blocks: list[tuple[int, int]] = []  # (pattern offset, length)
    start = 0
    for i, e in enumerate(edges):
        if e == DESC:
            blocks.append((start, i + 1 - start))
            start = i + 1
    blocks.append((start, len(labels) - start))

    def block_at(b: tuple[int, int], pos: int) -> bool:
        off, ln = b
        if pos + ln > len(w):
            return False
        for j in range(ln):
            lab = labels[off + j]
            if lab != STAR and w[pos + j] != lab:
                return False
        return True

    # all blocks before the last: earliest placement
    pos = 0
    first = True
    for b in blocks[:-1]:
        found = -1
        limit = len(w) - b[1]
        while pos <= limit:
            if block_at(b, pos):
                found = pos
                break
            if first:
                return False  # the first block is pinned to position 0
            pos += 1
        if found < 0:
            return False
        pos = found + b[1]
        first = False

    last = blocks[-1]
    if end_anchored:
        s = len(w) - last[1]
        if s < pos or (first and s != 0):
            return False
        return block_at(last, s)
    if first:
        return block_at(last, 0)
    limit = len(w) - last[1]
    while pos <= limit:
        if block_at(last, pos):
            return True
        pos += 1
    return False


def pattern_holds_in_tree(labels: Labels, edges: Edges, t: Tree) -> bool:
    """Boolean satisfaction: the pattern matches some root-down chain."""
    return any(match_word(labels, edges, w, False) for w in t.path_words)


# -- the shared three-stage engine --------------------------------------------

Check = Callable[[Labels, Edges], bool]


def _desc_positions(edges: Edges) -> list[int]:
    return [i for i, e in enumerate(edges) if e == DESC]


def _insert_block(
    labels: Labels, edges: Edges, at: int, u: Word
) -> tuple[Labels, Edges]:
    """Replace the descendant edge at ``at`` by ``// u //``."""
    new_labels = labels[: at + 1] + tuple(u) + labels[at + 1 :]
    new_edges = edges[:at] + (DESC,) + (CHILD,) * (len(u) - 1) + (DESC,) + edges[at + 1 :]
    return new_labels, new_edges


def _replace_with_chain(
    labels: Labels, edges: Edges, at: int, stars: int, lead: int
) -> tuple[Labels, Edges]:
    """Replace the descendant edge at ``at`` by ``lead (*/)^stars``."""
    new_labels = labels[: at + 1] + (STAR,) * stars + labels[at + 1 :]
    new_edges = edges[:at] + (lead,) + (CHILD,) * stars + edges[at + 1 :]
    return new_labels, new_edges


def _generalize(
    w: Word,
    check: Check,
    label_pool: frozenset[str],
    skip_last_star_edge: bool,
    max_gap: int,
) -> tuple[Labels, Edges]:
    labels: Labels = (STAR, STAR)
    edges: Edges = (DESC,)

    # stage 1: common factors of w's inner part, longest first,
    # leftmost occurrence first among equals, rescanning after each hit
    inner = w[1:-1]
    m = len(inner)
    for ln in range(m, 0, -1):
        for s in range(0, m - ln + 1):
            u = inner[s : s + ln]
            if not set(u) <= label_pool:
                continue
            while True:
                for at in _desc_positions(edges):
                    cand = _insert_block(labels, edges, at, u)
                    if check(*cand):
                        labels, edges = cand
                        break
                else:
                    break

    # stage 2: endpoint specialization
    if labels[0] == STAR:
        cand = (w[0],) + labels[1:]
        if check(cand, edges):
            labels = cand
    if labels[-1] == STAR:
        cand = labels[:-1] + (w[-1],)
        if check(cand, edges):
            labels = cand

    # stage 3: exact-depth conversion of descendant edges
    i = 0
    while i < len(edges):
        if edges[i] != DESC:
            i += 1
            continue
        if skip_last_star_edge and i == len(edges) - 1 and labels[-1] == STAR:
            i += 1
            continue
        stars = 0
        while stars < max_gap:
            cand = _replace_with_chain(labels, edges, i, stars + 1, DESC)
            if check(*cand):
                stars += 1
            else:
                break
        cand = _replace_with_chain(labels, edges, i, stars, CHILD)
        if check(*cand):
            labels, edges = cand
            i += stars + 1
        else:
            i += 1
    return labels, edges


# -- the learners --------------------------------------------------------------


def learn_anch_path1(
    sample: Iterable[DecoratedTree], config: LearnerConfig = DEFAULT_CONFIG
) -> TwigQuery:
    """Minimal unary anchored path query satisfied by every example."""
    examples = list(sample)
    if not examples:
        raise EmptySampleError("cannot learn from an empty sample")
    sel_words = [t.sel_word for t in examples]
    w = canonical_min(sel_words)

    def check(labels: Labels, edges: Edges) -> bool:
        return all(match_word(labels, edges, sw, True) for sw in sel_words)

    pool = frozenset.intersection(*(frozenset(sw) for sw in sel_words))
    labels, edges = _generalize(
        w, check, pool, skip_last_star_edge=False, max_gap=max(map(len, sel_words))
    )
    return path_query(labels, edges, unary=True)


def learn_anch_path0_star(
    u: Word,
    sample: Iterable[Tree],
    config: LearnerConfig = DEFAULT_CONFIG,
) -> TwigQuery:
    """Minimal Boolean anchored path query satisfied by the word u (read
    as a path tree) and by every tree of the sample."""
    trees = list(sample)
    if not trees:
        raise EmptySampleError("cannot learn from an empty sample")
    if len(u) < 2 or any(t.height < 1 for t in trees):
        # the universal pattern needs two nodes on a path; height-0
        # examples leave only single-node queries as candidates
        roots = {t.labels[0] for t in trees} | {u[0]}
        label = roots.pop() if len(roots) == 1 else STAR
        return path_query((label,), ())

    tree_words = [tuple(t.path_words) for t in trees]

    def check(labels: Labels, edges: Edges) -> bool:
        if not match_word(labels, edges, u, False):
            return False
        return all(
            any(match_word(labels, edges, pw, False) for pw in ws)
            for ws in tree_words
        )

    pool = frozenset(u)
    for ws in tree_words:
        pool &= frozenset(lab for pw in ws for lab in pw)
    max_gap = max(max(map(len, ws)) for ws in tree_words)
    labels, edges = _generalize(
        u, check, pool, skip_last_star_edge=True, max_gap=max(max_gap, len(u))
    )
    return path_query(labels, edges)


def learn_conj_path0(
    sample: Iterable[Tree], config: LearnerConfig = DEFAULT_CONFIG
) -> ConjQuery:
    """Most specific path queries over all sample paths, kept reduced.

    Each sample path seeds one run of the Boolean path learner; a result
    enters the aggregate only if no present member is contained in it,
    and evicts the members it is contained in.
    """
    trees = list(sample)
    if not trees:
        raise EmptySampleError("cannot learn from an empty sample")
    members: list[TwigQuery] = []
    for u in sorted(paths(trees), key=word_key):
        p = learn_anch_path0_star(u, trees, config)
        if any(subsumes(p, q) for q in members):
            continue
        members = [q for q in members if not subsumes(q, p)]
        members.append(p)
    return ConjQuery.of(members)


def learn_anch_path0(
    sample: Iterable[Tree],
    negatives: Sequence[Tree] = (),
    config: LearnerConfig = DEFAULT_CONFIG,
) -> TwigQuery:
    """One member of the conjunction learned from the sample.

    Default choice: canonically minimal serialization.  When negative
    trees are supplied, prefer the member rejecting the most of them.
    """
    conj = learn_conj_path0(sample, config)
    if negatives:
        def key(member: TwigQuery):
            rejected = sum(1 for t in negatives if not embeds(member, t))
            return (-rejected, member.canonical)

        return min(conj.members, key=key)
    return min(conj.members, key=lambda member: member.canonical)
