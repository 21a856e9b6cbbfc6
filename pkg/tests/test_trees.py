import pytest

from twiglearn.errors import TermSyntaxError, XmlFormatError
from twiglearn.trees import (
    DecoratedTree,
    SignedSample,
    Tree,
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

LIBRARY_XML = """
<library>
  <collection>
    <title annot="+">Capital</title>
    <author>K. Marx</author>
  </collection>
  <book>
    <title annot="+">Manifesto</title>
    <author>K. Marx</author>
    <author>F. Engels</author>
  </book>
  <book>
    <title annot="-">The conditions of ...</title>
    <author>F. Engels</author>
  </book>
</library>
"""


def test_parse_term_roundtrip():
    text = "r(a(b),b(a(c)),c(b(a)))"
    t = Tree.from_term(text)
    assert t.size == 9
    assert t.to_term() == text


def test_term_selection():
    d = DecoratedTree.from_term("r(b(a!))")
    assert d.selected == 2
    assert d.to_term() == "r(b(a!))"
    with pytest.raises(TermSyntaxError):
        DecoratedTree.from_term("r(b(a))")
    with pytest.raises(TermSyntaxError):
        parse_term("r(a!,b!)")


def test_tree_validation():
    with pytest.raises(ValueError):
        Tree(("a", "b"), (-1, 5))
    with pytest.raises(ValueError):
        DecoratedTree(Tree.from_term("r(a)"), 0)


def test_paths_of_branching_tree(branching_tree):
    assert paths(branching_tree) == {
        ("r", "a", "b"),
        ("r", "b", "a", "c"),
        ("r", "c", "b", "a"),
    }


def test_paths_of_offers(offers_sample):
    assert paths(offers_sample) == {
        ("offer", "item", "for-sale"),
        ("offer", "item", "descr"),
        ("offer", "list", "item", "for-sale"),
        ("offer", "list", "item", "descr"),
        ("offer", "list", "item", "wanted"),
    }


def test_paths_single_node():
    assert paths(Tree.from_term("a")) == {("a",)}


def test_paths_count_is_leaf_count():
    t = Tree.from_term("r(a(x,y),a(x,y))")
    # set semantics: equal label sequences collapse
    assert len(t.leaves) == 4
    assert len(t.path_words) == 2


def test_sel_path():
    d = DecoratedTree.from_term("r(a(b),b(a!(c)),c(b(a)))")
    assert sel_path(d) == ("r", "b", "a")
    assert len(sel_path(d)) == d.tree.depths[d.selected] + 1


def test_canonical_min():
    assert canonical_min(
        [tuple("rabcd"), tuple("rbcabd")]
    ) == tuple("rabcd")
    assert canonical_min([("a",)]) == ("a",)
    assert canonical_min([("r", "b"), ("r", "a")]) == ("r", "a")
    with pytest.raises(ValueError):
        canonical_min([])


def test_canonical_form_ignores_child_order():
    t1 = Tree.from_term("r(a(x),b)")
    t2 = Tree.from_term("r(b,a(x))")
    assert t1.iso(t2)
    assert not t1.iso(Tree.from_term("r(a,b(x))"))


def test_add_virtual_root():
    t = Tree.from_term("r(a)")
    wrapped = add_virtual_root(t, "top")
    assert wrapped.to_term() == "top(r(a))"
    d = add_virtual_root(DecoratedTree.from_term("r(a!)"), "top")
    assert d.to_term() == "top(r(a!))"
    twice = add_virtual_root(wrapped, "top")
    assert twice.size == wrapped.size + 1 == t.size + 2


def test_parse_xml_unary():
    sample = parse_xml(LIBRARY_XML, mode="unary")
    assert len(sample.examples) == 3
    signs = sorted(sign for _, sign in sample.examples)
    assert signs == ["+", "+", "-"]
    shapes = {ex.tree.canonical for ex, _ in sample.examples}
    assert len(shapes) == 1  # one tree shape shared by all decorations
    selected_labels = {ex.tree.labels[ex.selected] for ex, _ in sample.examples}
    assert selected_labels == {"title"}


def test_parse_xml_text_leaves():
    sample = parse_xml(LIBRARY_XML, mode="unary")
    tree = sample.examples[0][0].tree
    assert "K. Marx" in tree.labels
    assert "Capital" in tree.labels


def test_parse_xml_boolean():
    sample = parse_xml("<r><a/></r>", mode="boolean", sign="+")
    (tree, sign), = sample.examples
    assert sign == "+"
    assert tree.to_term() == "r(a)"
    with pytest.raises(XmlFormatError):
        parse_xml('<r><a annot="+"/></r>', mode="boolean", sign="+")


def test_parse_xml_errors():
    with pytest.raises(XmlFormatError):
        parse_xml("<r><a></r>", mode="boolean", sign="+")
    with pytest.raises(XmlFormatError):
        parse_xml('<r annot="+"><a/></r>', mode="unary")
    with pytest.raises(XmlFormatError):
        parse_xml('<r><a annot="yes"/></r>', mode="unary")
    with pytest.raises(XmlFormatError):
        parse_xml('<ns:r xmlns:ns="urn:x"><a/></ns:r>', mode="boolean", sign="+")
    with pytest.raises(XmlFormatError):
        parse_xml("<r><?pi data?><a/></r>", mode="boolean", sign="+")


def test_parse_xml_root_annotation_needs_virtual_root():
    doc = '<r annot="+"><a/></r>'
    with pytest.raises(XmlFormatError):
        parse_xml(doc, mode="unary")
    sample = parse_xml(doc, mode="unary", virtual_root="_root")
    (ex, sign), = sample.examples
    assert ex.tree.labels[0] == "_root"
    assert ex.tree.labels[ex.selected] == "r"


def test_xml_roundtrip_isomorphic():
    tree = parse_xml_tree(LIBRARY_XML)
    again = parse_xml_tree(serialize_xml(tree))
    assert tree.iso(again)


def test_signed_sample_dedup():
    t = Tree.from_term("r(a,b)")
    u = Tree.from_term("r(b,a)")  # isomorphic
    sample = SignedSample.of([(t, "+"), (u, "+"), (t, "-")])
    assert len(sample.examples) == 2
    with pytest.raises(ValueError):
        SignedSample(((t, "+"), (u, "+")))


def test_parse_example_dispatch():
    assert isinstance(parse_example("r(a)"), Tree)
    assert isinstance(parse_example("r(a!)"), DecoratedTree)
