"""Desk-scale brute-force ground truth.

Exhaustive, canonically deduplicated enumeration of queries and trees,
minimal-consistent-query computation, refutation-based non-containment,
and the most specific wildcard-free twig of a set of trees (a product
construction; the exact minimum of the wildcard-free class).

Everything here is guarded by budgets and meant for small instances.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence, Union

from .errors import CapExceededError
from .matching import embeds, subsumes
from .queries import (
    CHILD,
    DESC,
    STAR,
    TwigQuery,
    is_anchored,
    is_psf,
    path_query,
)
from .trees import DecoratedTree, Example, Tree

QUERY_CLASSES = (
    "path-unary",
    "path-boolean",
    "anchored-path-unary",
    "anchored-path-boolean",
    "twig-boolean",
    "twig-unary",
    "psf-twig-boolean",
    "psf-twig-unary",
)

DEFAULT_QUERY_CAP = 10**5
DEFAULT_TREE_CAP = 10**4


@dataclass(frozen=True)
class EnumSpec:
    """Bounds and class for exhaustive query enumeration."""

    labels: tuple[str, ...]
    max_nodes: int
    query_class: str
    max_depth: Optional[int] = None
    allow_star: bool = True
    allow_desc: bool = True
    query_cap: int = DEFAULT_QUERY_CAP

    def __post_init__(self):
        if self.max_nodes < 1:
            raise ValueError("max_nodes must be at least 1")
        if self.query_class not in QUERY_CLASSES:
            raise ValueError(f"unknown query class {self.query_class!r}")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate labels")
        if STAR in self.labels:
            raise ValueError("the wildcard is implicit; do not list it")

    @property
    def unary(self) -> bool:
        return self.query_class.endswith("unary")

    @property
    def is_path_class(self) -> bool:
        return "path" in self.query_class


def _alphabet(spec: EnumSpec) -> tuple[str, ...]:
    return spec.labels + ((STAR,) if spec.allow_star else ())


def _edge_kinds(spec: EnumSpec) -> tuple[int, ...]:
    return (CHILD, DESC) if spec.allow_desc else (CHILD,)


def _class_admits(spec: EnumSpec, q: TwigQuery) -> bool:
    if spec.query_class.startswith("anchored-path"):
        return is_anchored(q)
    if spec.query_class.startswith("psf-twig"):
        return is_psf(q)
    return True


def _enumerate_paths(spec: EnumSpec, n: int) -> Iterator[TwigQuery]:
    alphabet = _alphabet(spec)
    kinds = _edge_kinds(spec)
    if spec.max_depth is not None and n - 1 > spec.max_depth:
        return
    if spec.unary and n == 1:
        return  # a unary query needs a non-root selecting node
    for labels in itertools.product(alphabet, repeat=n):
        for edges in itertools.product(kinds, repeat=n - 1):
            yield path_query(labels, edges, unary=spec.unary)


def _tree_shapes(
    spec: EnumSpec, n: int, height_budget: Optional[int], pool: dict
) -> list[TwigQuery]:
    """Boolean twigs with exactly n nodes and height within budget,
    canonical (children multisets non-decreasing), memoized in pool."""
    key = (n, height_budget)
    if key in pool:
        return pool[key]
    alphabet = _alphabet(spec)
    kinds = _edge_kinds(spec)
    out: list[TwigQuery] = []
    if n >= 1 and (height_budget is None or height_budget >= 0):
        child_budget = None if height_budget is None else height_budget - 1
        # attached subtrees: (edge kind, subtree); multisets are encoded
        # by a non-decreasing sequence of pool indices
        attach_pool: list[tuple[int, TwigQuery]] = []
        if n > 1 and (child_budget is None or child_budget >= 0):
            for size in range(1, n):
                for sub in _tree_shapes(spec, size, child_budget, pool):
                    for kind in kinds:
                        attach_pool.append((kind, sub))

        def build(root_label: str, chosen: list[tuple[int, TwigQuery]]) -> TwigQuery:
            labels = [root_label]
            parents = [-1]
            edges = [CHILD]
            for kind, sub in chosen:
                offset = len(labels)
                labels.extend(sub.labels)
                parents.append(0)
                parents.extend(p + offset for p in sub.parents[1:])
                edges.append(kind)
                edges.extend(sub.edges[1:])
            return TwigQuery(tuple(labels), tuple(parents), tuple(edges))

        def pick(start: int, remaining: int, chosen: list):
            if remaining == 0:
                for root_label in alphabet:
                    out.append(build(root_label, chosen))
                return
            for idx in range(start, len(attach_pool)):
                kind, sub = attach_pool[idx]
                if sub.size > remaining:
                    continue
                chosen.append((kind, sub))
                pick(idx, remaining - sub.size, chosen)
                chosen.pop()

        pick(0, n - 1, [])
    pool[key] = out
    return out


def _enumerate_twigs(spec: EnumSpec, n: int, pool: dict) -> Iterator[TwigQuery]:
    for q in _tree_shapes(spec, n, spec.max_depth, pool):
        if spec.unary:
            seen = set()
            for sel in range(1, q.size):
                uq = TwigQuery(q.labels, q.parents, q.edges, sel)
                if uq.canonical not in seen:
                    seen.add(uq.canonical)
                    yield uq
        else:
            yield q


def enumerate_queries(spec: EnumSpec) -> Iterator[TwigQuery]:
    """Every class member over labels plus the wildcard, up to
    ``max_nodes``, exactly once up to isomorphism, ordered by node count
    then canonical text.  Raises when the cap is hit."""
    emitted = 0
    pool: dict = {}
    for n in range(1, spec.max_nodes + 1):
        batch: dict[str, TwigQuery] = {}
        raw = (
            _enumerate_paths(spec, n)
            if spec.is_path_class
            else _enumerate_twigs(spec, n, pool)
        )
        for q in raw:
            if not _class_admits(spec, q):
                continue
            batch.setdefault(q.canonical, q)
        for key in sorted(batch):
            emitted += 1
            if emitted > spec.query_cap:
                raise CapExceededError(f"query cap of {spec.query_cap} exceeded")
            yield batch[key]


# -- trees -------------------------------------------------------------------


def enumerate_trees(
    labels: Sequence[str],
    max_nodes: int,
    cap: int = DEFAULT_TREE_CAP,
    max_depth: Optional[int] = None,
) -> Iterator[Tree]:
    """Canonical unordered labeled trees by size, then canonical text."""
    emitted = 0
    pool: dict = {}
    spec = EnumSpec(
        labels=tuple(labels),
        max_nodes=max_nodes,
        query_class="twig-boolean",
        allow_star=False,
        allow_desc=False,
        max_depth=max_depth,
        query_cap=cap,
    )
    for n in range(1, max_nodes + 1):
        batch: dict[str, Tree] = {}
        for q in _tree_shapes(spec, n, max_depth, pool):
            t = Tree(q.labels, q.parents)
            batch.setdefault(t.canonical, t)
        for key in sorted(batch):
            emitted += 1
            if emitted > cap:
                raise CapExceededError(f"tree cap of {cap} exceeded")
            yield batch[key]


# -- minimality ----------------------------------------------------------------


def _consistent(q: TwigQuery, sample: Sequence[Example]) -> bool:
    return all(embeds(q, ex) for ex in sample)


def _consistent_path_candidates(
    sample: Sequence[Example], spec: EnumSpec
) -> Iterator[TwigQuery]:
    """Consistent members of a path class, generated by extending chains
    and pruning prefixes that already fail some example.

    Sound because an embedding of a chain restricts to one of every
    prefix; yields the same set as filtering the full enumeration.
    """
    from .path_learners import match_word

    if spec.unary:
        words = [ex.sel_word for ex in sample]
        per_example = [[w] for w in words]
    else:
        per_example = [sorted(ex.path_words) for ex in sample]
    alphabet = _alphabet(spec)
    kinds = _edge_kinds(spec)
    emitted = 0

    def viable(labels, edges) -> bool:
        return all(
            any(match_word(labels, edges, w, False) for w in ws)
            for ws in per_example
        )

    def full_ok(labels, edges) -> bool:
        if spec.unary:
            if not all(match_word(labels, edges, w, True) for w in words):
                return False
        q = path_query(labels, edges, unary=spec.unary)
        return _class_admits(spec, q)

    anchored_class = spec.query_class.startswith("anchored-path")

    def hopeless(labels, edges) -> bool:
        # in the anchored classes an inner wildcard on a descendant edge
        # never recovers, whatever is appended
        if not anchored_class:
            return False
        for i in range(1, len(labels) - 1):
            if labels[i] == STAR and (edges[i - 1] == DESC or edges[i] == DESC):
                return True
        return False

    def grow(labels: tuple, edges: tuple):
        nonlocal emitted
        if not viable(labels, edges):
            return
        if (not spec.unary or len(labels) > 1) and full_ok(labels, edges):
            emitted += 1
            if emitted > spec.query_cap:
                raise CapExceededError(f"query cap of {spec.query_cap} exceeded")
            yield path_query(labels, edges, unary=spec.unary)
        if len(labels) == spec.max_nodes:
            return
        if spec.max_depth is not None and len(labels) - 1 >= spec.max_depth:
            return
        for kind in kinds:
            for lab in alphabet:
                nl, ne = labels + (lab,), edges + (kind,)
                if not hopeless(nl, ne):
                    yield from grow(nl, ne)

    for lab in alphabet:
        yield from grow((lab,), ())


def consistent_candidates(
    sample: Sequence[Example], spec: EnumSpec
) -> Iterator[TwigQuery]:
    """All consistent queries of the spec's universe."""
    if spec.is_path_class:
        yield from _consistent_path_candidates(sample, spec)
    else:
        for q in enumerate_queries(spec):
            if _consistent(q, sample):
                yield q


def strictly_below(
    a: TwigQuery, b: TwigQuery, exact: bool, refute_budget: int = 2000
) -> bool:
    """Is a strictly more specific than b?

    ``exact`` marks classes where containment coincides with
    subsumption, making this plain subsumption arithmetic; otherwise
    strictness is certified by a refutation witness.
    """
    if not subsumes(b, a):
        return False
    if exact:
        return not subsumes(a, b)
    if subsumes(a, b):
        return False
    verdict, _ = refute_contains(b, a, refute_budget)
    return verdict == "not-contained"


def minimal_consistent(
    sample: Sequence[Example], spec: EnumSpec
) -> list[TwigQuery]:
    """All enumerated consistent queries with no strictly more specific
    consistent query in the enumeration."""
    candidates = list(consistent_candidates(sample, spec))
    exact = spec.query_class.startswith(("anchored-path", "psf-twig"))
    out = [
        q
        for q in candidates
        if not any(strictly_below(other, q, exact) for other in candidates)
    ]
    return sorted(out, key=lambda q: (q.size, q.canonical))


def has_consistent_below(
    q: TwigQuery, sample: Sequence[Example], spec: EnumSpec
) -> Optional[TwigQuery]:
    """A consistent enumerated query strictly more specific than q, if any."""
    exact = spec.query_class.startswith(("anchored-path", "psf-twig"))
    for other in consistent_candidates(sample, spec):
        if strictly_below(other, q, exact):
            return other
    return None


# -- refutation-only non-containment -------------------------------------------


def refute_contains(
    q1: Union[TwigQuery],
    q2: Union[TwigQuery],
    tree_budget: int = DEFAULT_TREE_CAP,
) -> tuple[str, Optional[Example]]:
    """Search for a tree separating q1 from q2.

    Returns ("not-contained", witness) when a tree satisfying q1 but not
    q2 is found among trees over q1's labels plus one fresh label within
    the budget, and ("contained-unknown", None) otherwise.
    """
    from .charsample import FreshLabeler

    base = [lab for lab in dict.fromkeys(q1.labels) if lab != STAR]
    labeler = FreshLabeler(set(q1.labels) | set(q2.labels) | {STAR})
    alphabet = base + [labeler.fresh("z")]
    max_nodes = max(q1.size * (q1.size + 1), 4)
    examined = 0
    for t in enumerate_trees(alphabet, max_nodes, cap=tree_budget * 2):
        examined += 1
        if examined > tree_budget:
            break
        examples: Iterable[Example]
        if q1.is_unary:
            examples = (DecoratedTree(t, n) for n in range(1, t.size))
        else:
            examples = (t,)
        for ex in examples:
            if embeds(q1, ex) and not embeds(q2, ex):
                return ("not-contained", ex)
    return ("contained-unknown", None)


# -- most specific wildcard-free twig ------------------------------------------


def most_specific_twig(
    trees: Sequence[Tree],
    allow_desc: bool = True,
    max_depth: Optional[int] = None,
    node_budget: int = 10**5,
) -> Optional[TwigQuery]:
    """The inclusion-minimum wildcard-free twig satisfied by all trees.

    Works on the product of the trees: product nodes are tuples of
    equally labeled nodes, child steps descend every coordinate by one,
    descendant steps descend every coordinate by at least one.  The
    product unfolds into a twig; a successor reachable from a sibling is
    implied by it and pruned.  Every wildcard-free twig consistent with
    the trees embeds into the result, so the result is contained in all
    of them.  Returns None when the roots disagree (then no wildcard-
    free twig is consistent).
    """
    if not trees:
        raise ValueError("need at least one tree")
    if len({t.labels[0] for t in trees}) != 1:
        return None

    root = tuple(0 for _ in trees)

    def successors(state) -> list[tuple[int, tuple]]:
        options: list[list[tuple[int, int]]] = []  # per tree: (node, depth delta)
        for t, v in zip(trees, state):
            base = t.depths[v]
            if allow_desc:
                here = [
                    (d, t.depths[d] - base)
                    for d in t.subtree_nodes(v)
                    if d != v
                ]
            else:
                here = [(c, 1) for c in t.children[v]]
            options.append(here)
        by_label: dict[str, list[list[tuple[int, int]]]] = {}
        for idx, t in enumerate(trees):
            for d, delta in options[idx]:
                per = by_label.setdefault(t.labels[d], [[] for _ in trees])
                per[idx].append((d, delta))
        out: list[tuple[int, tuple]] = []
        for lab in sorted(by_label):
            per = by_label[lab]
            if any(not choices for choices in per):
                continue
            for combo in itertools.product(*per):
                nodes = tuple(c[0] for c in combo)
                kind = CHILD if all(c[1] == 1 for c in combo) else DESC
                out.append((kind, nodes))
        return out

    succ_cache: dict[tuple, list] = {}

    def succ(state):
        if state not in succ_cache:
            succ_cache[state] = successors(state)
        return succ_cache[state]

    reach_cache: dict[tuple, frozenset] = {}

    def reachable(state) -> frozenset:
        if state not in reach_cache:
            acc: set = set()
            for _, nxt in succ(state):
                acc.add(nxt)
                acc |= reachable(nxt)
            reach_cache[state] = frozenset(acc)
        return reach_cache[state]

    # nested form: (label, ((kind, child), ...)) with children sorted and
    # deduplicated; memoized per (state, remaining depth)
    Node = tuple
    budget = {"nodes": 0}
    unfold_cache: dict[tuple, Node] = {}

    def unfold(state, depth: int) -> Node:
        remaining = None if max_depth is None else max_depth - depth
        key = (state, remaining)
        if key in unfold_cache:
            return unfold_cache[key]
        budget["nodes"] += 1
        if budget["nodes"] > node_budget:
            raise CapExceededError(f"product twig exceeds {node_budget} nodes")
        label = trees[0].labels[state[0]]
        kids: dict[tuple[int, Node], None] = {}
        if remaining is None or remaining > 0:
            here = succ(state)
            states = [nxt for _, nxt in here]
            for kind, nxt in here:
                if kind == DESC and any(
                    nxt in reachable(other) for other in states if other != nxt
                ):
                    continue  # implied through the dominating sibling
                kids[(kind, unfold(nxt, depth + 1))] = None
        ordered = tuple(sorted(kids, key=lambda kc: (kc[0], _nested_str(kc[1]))))
        node = (label, ordered)
        unfold_cache[key] = node
        return node

    nested = unfold(root, 0)

    labels: list[str] = []
    parents: list[int] = []
    edges: list[int] = []

    def emit(node: Node, parent: int, kind: int):
        if len(labels) >= node_budget:
            raise CapExceededError(f"product twig exceeds {node_budget} nodes")
        me = len(labels)
        labels.append(node[0])
        parents.append(parent)
        edges.append(kind)
        for k, child in node[1]:
            emit(child, me, k)

    emit(nested, -1, CHILD)
    return TwigQuery(tuple(labels), tuple(parents), tuple(edges))


def _nested_str(node) -> str:
    label, kids = node
    if not kids:
        return label
    inner = ",".join(
        ("/" if k == CHILD else "//") + _nested_str(c) for k, c in kids
    )
    return f"{label}({inner})"
