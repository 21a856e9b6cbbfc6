"""Twig and path query ASTs, class predicates, and the textual grammar.

A query is an unordered tree over labels plus the wildcard ``*``; every
non-root node hangs off its parent by a child (``/``) or descendant
(``//``) edge.  Unary queries carry a selecting node (never the root).

Grammar (mode-tagged by the caller):

    Query   := Step (Sep Step)*
    Sep     := "/" | "//"
    Step    := (NAME | "*") Filter*
    Filter  := "[" ("." Sep)? Step (Sep Step)* "]"

In unary mode the last spine step is the selecting node.  Serialization
is canonical: the unary spine is the root-to-selecting path; Boolean
queries render as the root step with every subtree as a filter; filters
are sorted by their rendered text; a filter hanging off a descendant
edge starts with ``.//``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence

from .errors import ClassViolationError, QuerySyntaxError

STAR = "*"
CHILD = 0
DESC = 1

EdgeKind = int


@dataclass(frozen=True)
class TwigQuery:
    """Immutable twig query; node 0 is the root, ids are preorder."""

    labels: tuple[str, ...]
    parents: tuple[int, ...]
    edges: tuple[EdgeKind, ...]  # edges[i] connects i to parents[i]; edges[0] unused
    selecting: Optional[int] = None

    def __post_init__(self):
        n = len(self.labels)
        if n == 0:
            raise ValueError("a query has at least its root")
        if len(self.parents) != n or len(self.edges) != n:
            raise ValueError("labels/parents/edges length mismatch")
        if self.parents[0] != -1:
            raise ValueError("node 0 must be the root")
        for i in range(1, n):
            if not 0 <= self.parents[i] < i:
                raise ValueError(f"node {i} must have exactly one earlier parent")
            if self.edges[i] not in (CHILD, DESC):
                raise ValueError("edge kinds are CHILD or DESC")
        if any(not lab for lab in self.labels):
            raise ValueError("labels must be non-empty")
        if self.selecting is not None and not 0 < self.selecting < n:
            raise ValueError("selecting node must exist and differ from the root")

    # -- structure ---------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def is_unary(self) -> bool:
        return self.selecting is not None

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        kids: list[list[int]] = [[] for _ in range(self.size)]
        for i in range(1, self.size):
            kids[self.parents[i]].append(i)
        return tuple(tuple(k) for k in kids)

    @cached_property
    def leaves(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.size) if not self.children[i])

    @property
    def is_path(self) -> bool:
        return all(len(k) <= 1 for k in self.children)

    def ancestors(self, n: int) -> Iterator[int]:
        p = self.parents[n]
        while p != -1:
            yield p
            p = self.parents[p]

    def root_path_nodes(self, n: int) -> tuple[int, ...]:
        return tuple(reversed([n, *self.ancestors(n)]))

    def as_boolean(self) -> "TwigQuery":
        if self.selecting is None:
            return self
        return TwigQuery(self.labels, self.parents, self.edges, None)

    @cached_property
    def canonical(self) -> str:
        return serialize(self)

    def iso(self, other: "TwigQuery") -> bool:
        return self.canonical == other.canonical

    def __str__(self) -> str:
        return self.canonical


def path_query(
    labels: Sequence[str], edges: Sequence[EdgeKind], unary: bool = False
) -> TwigQuery:
    """Chain-shaped query; ``edges[i]`` sits between labels ``i`` and ``i+1``."""
    n = len(labels)
    if len(edges) != n - 1:
        raise ValueError("a chain of n nodes has n-1 edges")
    parents = tuple(range(-1, n - 1))
    return TwigQuery(
        tuple(labels),
        parents,
        (CHILD, *edges),
        n - 1 if unary else None,
    )


def path_labels_edges(q: TwigQuery) -> tuple[tuple[str, ...], tuple[EdgeKind, ...]]:
    """Inverse of ``path_query`` for chain-shaped queries."""
    if not q.is_path:
        raise ValueError("not a path query")
    order = [0]
    while q.children[order[-1]]:
        order.append(q.children[order[-1]][0])
    return (
        tuple(q.labels[v] for v in order),
        tuple(q.edges[v] for v in order[1:]),
    )


def universal_query(unary: bool = False) -> TwigQuery:
    """``*//*``, satisfied by every tree of height >= 1."""
    return path_query((STAR, STAR), (DESC,), unary=unary)


# -- class predicates --------------------------------------------------------


def is_path_shaped(q: TwigQuery) -> bool:
    """Chain shape; when unary, the selecting node must be the only leaf."""
    if not q.is_path:
        return False
    if q.is_unary and q.children[q.selecting]:
        return False
    return True


def is_anchored(p: TwigQuery) -> bool:
    """No descendant edge touches an inner wildcard node.

    The root may touch one; so may the leaf of a unary path (the
    selecting node).  A Boolean wildcard leaf must hang off a descendant
    edge.  Single-node queries are anchored.
    """
    if not is_path_shaped(p):
        raise ValueError("is_anchored applies to path queries")
    labels, edges = path_labels_edges(p)
    n = len(labels)
    for i, lab in enumerate(labels):
        if lab != STAR:
            continue
        incident_desc = (i > 0 and edges[i - 1] == DESC) or (
            i < n - 1 and edges[i] == DESC
        )
        if incident_desc and 0 < i < n - 1:
            return False
    if not p.is_unary and n > 1 and labels[-1] == STAR and edges[-1] != DESC:
        return False
    return True


def paths_of_query(q: TwigQuery) -> tuple[TwigQuery, ...]:
    """Boolean path queries from the root to each leaf, one per leaf."""
    out = []
    for leaf in q.leaves:
        chain = q.root_path_nodes(leaf)
        out.append(
            path_query(
                [q.labels[v] for v in chain],
                [q.edges[v] for v in chain[1:]],
            )
        )
    return tuple(out)


def _contains_path(p1: TwigQuery, p2: TwigQuery) -> bool:
    """p1 is contained in p2 (both Boolean anchored paths, where this
    coincides with subsumption)."""
    from .matching import subsumes  # local import; matching depends on queries

    return subsumes(p2, p1)


def _group_reduced(group: Sequence[TwigQuery]) -> bool:
    for i, p1 in enumerate(group):
        for j, p2 in enumerate(group):
            if i != j and _contains_path(p1, p2):
                return False
    return True


def is_psf(q: TwigQuery) -> bool:
    """Path-subsumption-free twig membership.

    Boolean: every root-to-leaf path is anchored and no leaf path is
    contained in another.  Unary: the root-to-selecting path is a
    unary-anchored path and, per spine node, every path from that node
    to a non-selecting leaf below a non-spine child is Boolean-anchored,
    those per-node path groups again being free of mutual containment.
    """
    if q.selecting is None:
        leaf_paths = paths_of_query(q)
        return all(is_anchored(p) for p in leaf_paths) and _group_reduced(leaf_paths)

    spine = q.root_path_nodes(q.selecting)
    spine_set = set(spine)
    spine_path = path_query(
        [q.labels[v] for v in spine], [q.edges[v] for v in spine[1:]], unary=True
    )
    if not is_anchored(spine_path):
        return False
    for v in spine:
        group = []
        for leaf in q.leaves:
            if leaf in spine_set:
                continue
            chain = q.root_path_nodes(leaf)
            if v not in chain:
                continue
            # closest spine node on the leaf's path is the deepest spine
            # node among its ancestors-or-self
            anchor = max(i for i, u in enumerate(chain) if u in spine_set)
            if chain[anchor] != v:
                continue
            tail = chain[anchor:]
            fp = path_query(
                [q.labels[u] for u in tail], [q.edges[u] for u in tail[1:]]
            )
            if not is_anchored(fp):
                return False
            group.append(fp)
        if not _group_reduced(group):
            return False
    return True


# -- parsing -----------------------------------------------------------------

_NAME = re.compile(r"[^/\[\]\s*.]+")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str):
        raise QuerySyntaxError(msg, self.pos)

    def eof(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take_sep(self) -> Optional[EdgeKind]:
        if self.text.startswith("//", self.pos):
            self.pos += 2
            return DESC
        if self.text.startswith("/", self.pos):
            self.pos += 1
            return CHILD
        return None

    def take_name(self) -> Optional[str]:
        if self.peek() == STAR:
            self.pos += 1
            return STAR
        m = _NAME.match(self.text, self.pos)
        if m:
            self.pos = m.end()
            return m.group()
        return None


def parse_query(text: str, unary: bool = False) -> TwigQuery:
    """Parse query text; in unary mode the last spine step selects."""
    labels: list[str] = []
    parents: list[int] = []
    edges: list[EdgeKind] = []
    p = _Parser(text.strip())

    def add(label: str, parent: int, edge: EdgeKind) -> int:
        labels.append(label)
        parents.append(parent)
        edges.append(edge)
        return len(labels) - 1

    def step(parent: int, edge: EdgeKind) -> int:
        name = p.take_name()
        if name is None:
            p.error("expected a step name or '*'")
        me = add(name, parent, edge)
        while p.peek() == "[":
            p.pos += 1
            filt(me)
            if p.peek() != "]":
                p.error("expected ']'")
            p.pos += 1
        return me

    def filt(parent: int):
        lead = CHILD
        if p.peek() == ".":
            p.pos += 1
            sep = p.take_sep()
            if sep is None:
                p.error("expected '/' or '//' after '.'")
            lead = sep
        cur = step(parent, lead)
        while True:
            sep = p.take_sep()
            if sep is None:
                break
            cur = step(cur, sep)

    def spine() -> int:
        cur = step(-1, CHILD)
        while True:
            sep = p.take_sep()
            if sep is None:
                break
            cur = step(cur, sep)
        return cur

    if p.eof():
        p.error("empty query")
    last = spine()
    if not p.eof():
        p.error("trailing text after query")
    return TwigQuery(
        tuple(labels),
        tuple(parents),
        tuple(edges),
        last if unary else None,
    )


# -- serialization -----------------------------------------------------------


def _sep_text(edge: EdgeKind) -> str:
    return "//" if edge == DESC else "/"


def _filter_text(q: TwigQuery, v: int) -> str:
    """Render the subtree at ``v`` as filter content: chain while nodes
    have a single child, then nested filters at a branch."""
    lead = ".//" if q.edges[v] == DESC else ""
    parts = [q.labels[v]]
    cur = v
    while len(q.children[cur]) == 1:
        nxt = q.children[cur][0]
        parts.append(_sep_text(q.edges[nxt]) + q.labels[nxt])
        cur = nxt
    tail = "".join(
        f"[{t}]" for t in sorted(_filter_text(q, c) for c in q.children[cur])
    )
    return lead + "".join(parts) + tail


def serialize(q: TwigQuery) -> str:
    """Canonical text: invariant under sibling reordering."""
    if q.selecting is None:
        root_filters = "".join(
            f"[{t}]" for t in sorted(_filter_text(q, c) for c in q.children[0])
        )
        return q.labels[0] + root_filters
    spine = q.root_path_nodes(q.selecting)
    spine_set = set(spine)
    parts = []
    for idx, v in enumerate(spine):
        step = q.labels[v] + "".join(
            f"[{t}]"
            for t in sorted(
                _filter_text(q, c) for c in q.children[v] if c not in spine_set
            )
        )
        if idx > 0:
            step = _sep_text(q.edges[v]) + step
        parts.append(step)
    return "".join(parts)


def canonical_form(q: TwigQuery) -> str:
    return serialize(q)


def query_iso(q1: TwigQuery, q2: TwigQuery) -> bool:
    return serialize(q1) == serialize(q2)


# -- conjunctions ------------------------------------------------------------


@dataclass(frozen=True)
class ConjQuery:
    """Reduced, head-consistent set of Boolean anchored path queries.

    Semantically the twig obtained by gluing the members' roots.
    """

    members: tuple[TwigQuery, ...]

    def __post_init__(self):
        if not self.members:
            raise ValueError("a conjunction has at least one member")
        for m in self.members:
            if m.is_unary or not is_path_shaped(m):
                raise ClassViolationError("members must be Boolean path queries")
            if not is_anchored(m):
                raise ClassViolationError(f"member {serialize(m)} is not anchored")
        heads = {m.labels[0] for m in self.members}
        if len(heads) != 1:
            raise ClassViolationError("members must share one root label")
        for i, p1 in enumerate(self.members):
            for j, p2 in enumerate(self.members):
                if i != j and _contains_path(p1, p2):
                    raise ClassViolationError(
                        f"not reduced: {serialize(p1)} is contained in {serialize(p2)}"
                    )

    @staticmethod
    def of(members: Iterable[TwigQuery]) -> "ConjQuery":
        ordered = sorted({m.canonical: m for m in members}.items())
        return ConjQuery(tuple(m for _, m in ordered))

    @property
    def size(self) -> int:
        return self.as_twig().size

    @cached_property
    def canonical(self) -> str:
        return " & ".join(m.canonical for m in self.members)

    def as_twig(self) -> TwigQuery:
        """Single twig with the members glued at the root."""
        head = self.members[0].labels[0]
        labels = [head]
        parents = [-1]
        edges = [CHILD]
        for m in self.members:
            offset = len(labels) - 1
            for i in range(1, m.size):
                labels.append(m.labels[i])
                parents.append(0 if m.parents[i] == 0 else m.parents[i] + offset)
                edges.append(m.edges[i])
        return TwigQuery(tuple(labels), tuple(parents), tuple(edges))

    def __str__(self) -> str:
        return self.canonical
