import pytest

from twiglearn.trees import DecoratedTree, Tree


@pytest.fixture
def offers_sample():
    """Two positive offer feeds: a flat one and one nested under a list."""
    return [
        Tree.from_term("offer(item(for-sale,descr))"),
        Tree.from_term("offer(list(item(for-sale,descr),item(wanted,descr)))"),
    ]


@pytest.fixture
def offers_negative():
    return Tree.from_term("offer(item(wanted,descr))")


@pytest.fixture
def dblp_sample():
    """Two listings: articles and books, with overlapping child sets."""
    return [
        Tree.from_term("dblp(article(author,title),article(author,title,url))"),
        Tree.from_term("dblp(book(editor,title,url),book(author,title))"),
    ]


@pytest.fixture
def library_sample():
    """Unary sample: the title nodes are selected."""
    return [
        DecoratedTree.from_term("library(collection(title!(capital),author(marx)))"),
        DecoratedTree.from_term(
            "library(book(title!(manifesto),author(marx),author(engels)))"
        ),
    ]


@pytest.fixture
def branching_tree():
    """r(a(b),b(a(c)),c(b(a))): one a at depth 2 and one at depth 3."""
    return Tree.from_term("r(a(b),b(a(c)),c(b(a)))")


@pytest.fixture
def path_learning_sample():
    """Three decorated trees sharing the inner factor b/c on their
    selecting paths at depth-1 offsets."""
    return [
        DecoratedTree.from_term("r(a(c,b(c(a!))))"),
        DecoratedTree.from_term("r(b(b(c(c!),b)))"),
        DecoratedTree.from_term("r(a(b(c(b(c!))),a))"),
    ]


def interleaved_chains(n: int) -> list[Tree]:
    """Two chains interleaving a_i/b_i in opposite orders, ending in c.

    Their common path generalizations explode combinatorially, which
    makes them the stock worst case for conjunction minimality.
    """

    def chain(seq):
        nested = seq[-1]
        for lab in reversed(seq[:-1]):
            nested = (lab, [nested])
        return Tree.from_nested(nested)

    first = chain(["r"] + [x for i in range(1, n + 1) for x in (f"a{i}", f"b{i}")] + ["c"])
    second = chain(["r"] + [x for i in range(1, n + 1) for x in (f"b{i}", f"a{i}")] + ["c"])
    return [first, second]


@pytest.fixture
def exp_sample():
    return interleaved_chains(2)
