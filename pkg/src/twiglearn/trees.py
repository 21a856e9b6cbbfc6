"""Unranked labeled trees, decorated trees, and XML/term ingestion.

Trees are immutable.  Node ids are preorder indices assigned at
construction (root = 0), which also makes them stable handles for the
HTTP service.  Child order is preserved for serialization but carries
no meaning: isomorphism is equality of canonical forms, which sort
children recursively.
"""

from __future__ import annotations

import io
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Optional, Union

from .errors import TermSyntaxError, XmlFormatError

#: A root-to-leaf path read as a word over labels.
Word = tuple[str, ...]

POSITIVE = "+"
NEGATIVE = "-"

DEFAULT_MIN_LABEL = "a0"
DEFAULT_ANNOT_ATTR = "annot"
DEFAULT_VIRTUAL_ROOT_LABEL = "_root"


def word_key(w: Word) -> tuple[int, Word]:
    """Sort key realizing the canonical order: length first, then lexicographic."""
    return (len(w), w)


def canonical_min(words: Iterable[Word]) -> Word:
    """The unique canonically minimal word of a non-empty collection."""
    ws = list(words)
    if not ws:
        raise ValueError("canonical_min of an empty collection")
    return min(ws, key=word_key)


@dataclass(frozen=True)
class Tree:
    """Unranked labeled tree over string labels.

    ``labels[i]`` is the label of node ``i`` and ``parents[i]`` its
    parent (-1 for the root).  Nodes are numbered in preorder.
    """

    labels: tuple[str, ...]
    parents: tuple[int, ...]

    def __post_init__(self):
        n = len(self.labels)
        if n == 0:
            raise ValueError("a tree has at least its root")
        if len(self.parents) != n:
            raise ValueError("labels/parents length mismatch")
        if self.parents[0] != -1:
            raise ValueError("node 0 must be the root")
        for i in range(1, n):
            if not 0 <= self.parents[i] < i:
                raise ValueError(f"node {i} must have exactly one earlier parent")
        if any(not lab for lab in self.labels):
            raise ValueError("labels must be non-empty strings")

    # -- structure ---------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.labels)

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        kids: list[list[int]] = [[] for _ in range(self.size)]
        for i in range(1, self.size):
            kids[self.parents[i]].append(i)
        return tuple(tuple(k) for k in kids)

    @cached_property
    def depths(self) -> tuple[int, ...]:
        d = [0] * self.size
        for i in range(1, self.size):
            d[i] = d[self.parents[i]] + 1
        return tuple(d)

    @property
    def height(self) -> int:
        return max(self.depths)

    def label(self, n: int) -> str:
        return self.labels[n]

    def is_leaf(self, n: int) -> bool:
        return not self.children[n]

    @cached_property
    def leaves(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.size) if not self.children[i])

    def ancestors(self, n: int) -> Iterator[int]:
        """Proper ancestors of ``n``, nearest first."""
        p = self.parents[n]
        while p != -1:
            yield p
            p = self.parents[p]

    def root_path_nodes(self, n: int) -> tuple[int, ...]:
        """Nodes from the root down to ``n``, inclusive."""
        up = [n, *self.ancestors(n)]
        return tuple(reversed(up))

    def subtree_nodes(self, n: int) -> tuple[int, ...]:
        """Preorder node ids of the subtree rooted at ``n``."""
        out = []
        stack = [n]
        while stack:
            v = stack.pop()
            out.append(v)
            stack.extend(reversed(self.children[v]))
        return tuple(out)

    def subtree(self, n: int) -> tuple["Tree", dict[int, int]]:
        """Subtree rooted at ``n`` plus the old-id -> new-id mapping."""
        order = self.subtree_nodes(n)
        remap = {old: new for new, old in enumerate(order)}
        labels = tuple(self.labels[o] for o in order)
        parents = tuple(
            -1 if o == n else remap[self.parents[o]] for o in order
        )
        return Tree(labels, parents), remap

    # -- words -------------------------------------------------------------

    def root_word(self, n: int) -> Word:
        """Labels on the root-to-``n`` path, inclusive."""
        return tuple(self.labels[v] for v in self.root_path_nodes(n))

    @cached_property
    def path_words(self) -> frozenset[Word]:
        """One word per leaf, root to leaf (set semantics)."""
        return frozenset(self.root_word(leaf) for leaf in self.leaves)

    # -- canonical form ----------------------------------------------------

    @cached_property
    def canonical(self) -> str:
        return self._canon(0, None)

    def _canon(self, n: int, selected: Optional[int]) -> str:
        mark = "!" if n == selected else ""
        kids = sorted(self._canon(c, selected) for c in self.children[n])
        if kids:
            return f"{self.labels[n]}{mark}({','.join(kids)})"
        return self.labels[n] + mark

    def to_term(self) -> str:
        """Term syntax preserving construction order of children."""
        return _write_term(self, None)

    def iso(self, other: "Tree") -> bool:
        return self.canonical == other.canonical

    # -- construction ------------------------------------------------------

    @staticmethod
    def from_nested(nested) -> "Tree":
        """Build from ``(label, [children...])`` or a bare label string."""
        labels: list[str] = []
        parents: list[int] = []

        def walk(node, parent):
            if isinstance(node, str):
                lab, kids = node, []
            else:
                lab, kids = node
            me = len(labels)
            labels.append(lab)
            parents.append(parent)
            for k in kids:
                walk(k, me)

        walk(nested, -1)
        return Tree(tuple(labels), tuple(parents))

    @staticmethod
    def from_term(text: str) -> "Tree":
        tree, sel = parse_term(text)
        if sel is not None:
            raise TermSyntaxError("unexpected selection mark in plain tree")
        return tree


@dataclass(frozen=True)
class DecoratedTree:
    """A tree with one selected node; the unit of a unary example.

    The selected node is never the root.
    """

    tree: Tree
    selected: int

    def __post_init__(self):
        if not 0 < self.selected < self.tree.size:
            raise ValueError("selected node must exist and differ from the root")

    @property
    def size(self) -> int:
        return self.tree.size

    @cached_property
    def sel_word(self) -> Word:
        """Labels on the root-to-selected path, inclusive."""
        return self.tree.root_word(self.selected)

    @cached_property
    def canonical(self) -> str:
        return self.tree._canon(0, self.selected)

    def to_term(self) -> str:
        return _write_term(self.tree, self.selected)

    def iso(self, other: "DecoratedTree") -> bool:
        return self.canonical == other.canonical

    @staticmethod
    def from_term(text: str) -> "DecoratedTree":
        tree, sel = parse_term(text)
        if sel is None:
            raise TermSyntaxError("decorated tree needs a '!' selection mark")
        return DecoratedTree(tree, sel)


Example = Union[Tree, DecoratedTree]


def sel_path(t: DecoratedTree) -> Word:
    """Path from the root to the selected node, as a word."""
    return t.sel_word


def paths(trees: Union[Tree, Iterable[Tree]]) -> frozenset[Word]:
    """Root-to-leaf words of a tree, or the union over a sample."""
    if isinstance(trees, Tree):
        return trees.path_words
    out: set[Word] = set()
    for t in trees:
        out |= t.path_words
    return frozenset(out)


def add_virtual_root(t: Example, label: str = DEFAULT_VIRTUAL_ROOT_LABEL) -> Example:
    """Wrap the tree under a fresh root; selection is preserved."""
    if isinstance(t, DecoratedTree):
        return DecoratedTree(add_virtual_root(t.tree, label), t.selected + 1)
    labels = (label, *t.labels)
    parents = (-1, 0, *(p + 1 for p in t.parents[1:]))
    return Tree(labels, parents)


# -- term syntax -----------------------------------------------------------
#
# r(a(b),b(a(c)))  with an optional '!' suffix marking the selected node,
# e.g. r(b(a!)).

_TERM_LABEL = re.compile(r"[^(),!\s]+")


def parse_term(text: str) -> tuple[Tree, Optional[int]]:
    labels: list[str] = []
    parents: list[int] = []
    selected: Optional[int] = None
    pos = 0
    n = len(text)

    def skip_ws():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def node(parent: int):
        nonlocal pos, selected
        skip_ws()
        m = _TERM_LABEL.match(text, pos)
        if not m:
            raise TermSyntaxError("expected a label", pos)
        me = len(labels)
        labels.append(m.group())
        parents.append(parent)
        pos = m.end()
        if pos < n and text[pos] == "!":
            if selected is not None:
                raise TermSyntaxError("more than one selected node", pos)
            selected = me
            pos += 1
        skip_ws()
        if pos < n and text[pos] == "(":
            pos += 1
            while True:
                node(me)
                skip_ws()
                if pos < n and text[pos] == ",":
                    pos += 1
                    continue
                if pos < n and text[pos] == ")":
                    pos += 1
                    break
                raise TermSyntaxError("expected ',' or ')'", pos)

    node(-1)
    skip_ws()
    if pos != n:
        raise TermSyntaxError("trailing text after tree", pos)
    return Tree(tuple(labels), tuple(parents)), selected


def _write_term(tree: Tree, selected: Optional[int]) -> str:
    def rec(v: int) -> str:
        mark = "!" if v == selected else ""
        kids = tree.children[v]
        if kids:
            return f"{tree.labels[v]}{mark}({','.join(rec(c) for c in kids)})"
        return tree.labels[v] + mark

    return rec(0)


def parse_example(text: str) -> Example:
    """Parse a term as a Tree or, when a '!' mark is present, a DecoratedTree."""
    tree, sel = parse_term(text)
    if sel is None:
        return tree
    return DecoratedTree(tree, sel)


# -- signed samples --------------------------------------------------------


@dataclass(frozen=True)
class SignedSample:
    """Examples paired with '+' / '-' signs, deduplicated canonically."""

    examples: tuple[tuple[Example, str], ...]

    def __post_init__(self):
        seen = set()
        for ex, sign in self.examples:
            if sign not in (POSITIVE, NEGATIVE):
                raise ValueError(f"unknown sign {sign!r}")
            key = (ex.canonical, sign)
            if key in seen:
                raise ValueError("duplicate signed example")
            seen.add(key)

    @staticmethod
    def of(pairs: Iterable[tuple[Example, str]]) -> "SignedSample":
        dedup: dict[tuple[str, str], tuple[Example, str]] = {}
        for ex, sign in pairs:
            dedup[(ex.canonical, sign)] = (ex, sign)
        ordered = sorted(dedup.values(), key=lambda p: (p[1], p[0].canonical))
        return SignedSample(tuple(ordered))

    def positives(self) -> list[Example]:
        return [ex for ex, s in self.examples if s == POSITIVE]

    def negatives(self) -> list[Example]:
        return [ex for ex, s in self.examples if s == NEGATIVE]


# -- XML ingestion ---------------------------------------------------------
#
# Supported subset: elements, attributes, and text.  Namespaces and
# processing instructions are rejected; comments are dropped by the
# parser.  Every non-whitespace text chunk becomes a leaf child labeled
# by its trimmed value.

_PI_RE = re.compile(r"<\?(?!xml[\s?])", re.IGNORECASE)


def _reject_unsupported(text: str):
    if _PI_RE.search(text):
        raise XmlFormatError("processing instructions are not supported")


def _element_to_tree(
    root: ET.Element,
    annot_attr: str,
    collect: Optional[list[tuple[int, str]]],
) -> Tree:
    labels: list[str] = []
    parents: list[int] = []

    def add_text(parent: int, raw: Optional[str]):
        if raw and raw.strip():
            labels.append(raw.strip())
            parents.append(parent)

    def walk(el: ET.Element, parent: int):
        tag = el.tag
        if not isinstance(tag, str):
            return  # comments / PIs materialized by some parsers
        if tag.startswith("{") or ":" in tag:
            raise XmlFormatError(f"namespaced element {tag!r} is not supported")
        me = len(labels)
        labels.append(tag)
        parents.append(parent)
        if annot_attr in el.attrib:
            value = el.attrib[annot_attr]
            if collect is None:
                raise XmlFormatError(
                    "in-document annotations are not allowed in boolean mode"
                )
            if value not in (POSITIVE, NEGATIVE):
                raise XmlFormatError(f"unknown annotation value {value!r}")
            collect.append((me, value))
        add_text(me, el.text)
        for child in el:
            walk(child, me)
            add_text(me, child.tail)

    walk(root, -1)
    return Tree(tuple(labels), tuple(parents))


def parse_xml(
    text: str,
    mode: str = "unary",
    annot_attr: str = DEFAULT_ANNOT_ATTR,
    sign: Optional[str] = None,
    virtual_root: Optional[str] = None,
) -> SignedSample:
    """Read an XML document into signed examples.

    In ``unary`` mode every node carrying ``annot_attr`` ("+" or "-")
    yields one decorated example over the shared tree.  In ``boolean``
    mode the caller supplies the document-level ``sign`` and in-document
    annotations are rejected.  ``virtual_root`` wraps the document under
    a fresh root with the given label, which also legalizes annotations
    on the document root.
    """
    if mode not in ("unary", "boolean"):
        raise ValueError(f"unknown mode {mode!r}")
    _reject_unsupported(text)
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise XmlFormatError(f"malformed XML: {exc}") from exc

    if mode == "boolean":
        if sign not in (POSITIVE, NEGATIVE):
            raise ValueError("boolean mode needs a document sign")
        tree = _element_to_tree(root, annot_attr, None)
        if virtual_root is not None:
            tree = add_virtual_root(tree, virtual_root)
        return SignedSample.of([(tree, sign)])

    annotations: list[tuple[int, str]] = []
    tree = _element_to_tree(root, annot_attr, annotations)
    if virtual_root is not None:
        tree = add_virtual_root(tree, virtual_root)
        annotations = [(node + 1, s) for node, s in annotations]
    pairs: list[tuple[Example, str]] = []
    for node, s in annotations:
        if node == 0:
            raise XmlFormatError(
                "annotation on the document root (enable a virtual root)"
            )
        pairs.append((DecoratedTree(tree, node), s))
    return SignedSample.of(pairs)


def parse_xml_tree(text: str, virtual_root: Optional[str] = None) -> Tree:
    """Read an XML document as a bare tree, ignoring any annotations."""
    _reject_unsupported(text)
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise XmlFormatError(f"malformed XML: {exc}") from exc
    sink: list[tuple[int, str]] = []
    tree = _element_to_tree(root, DEFAULT_ANNOT_ATTR, sink)
    if virtual_root is not None:
        tree = add_virtual_root(tree, virtual_root)
    return tree


_XML_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\-]*$")


def serialize_xml(tree: Tree) -> str:
    """Write a tree back to XML.

    Leaves whose labels are not valid element names are emitted as text
    content; re-parsing yields an isomorphic tree either way.
    """
    if not _XML_NAME.match(tree.labels[0]):
        raise XmlFormatError(f"root label {tree.labels[0]!r} is not an XML name")

    def rec(v: int) -> ET.Element:
        el = ET.Element(tree.labels[v])
        for c in tree.children[v]:
            lab = tree.labels[c]
            if not tree.children[c] and not _XML_NAME.match(lab):
                prev = list(el)
                if prev:
                    prev[-1].tail = (prev[-1].tail or " ") + lab
                else:
                    el.text = (el.text or " ") + lab
            else:
                if not _XML_NAME.match(lab):
                    raise XmlFormatError(f"label {lab!r} is not an XML name")
                el.append(rec(c))
        return el

    buf = io.BytesIO()
    ET.ElementTree(rec(0)).write(buf, encoding="utf-8", xml_declaration=False)
    return buf.getvalue().decode("utf-8")
