import random

import pytest

import qgen
from twiglearn.charsample import char_sample
from twiglearn.errors import EmptySampleError
from twiglearn.matching import embeds, subsumes
from twiglearn.path_learners import learn_conj_path0
from twiglearn.queries import (
    CHILD,
    DESC,
    is_psf,
    parse_query,
    path_query,
    paths_of_query,
    query_iso,
)
from twiglearn.trees import DecoratedTree, Tree
from twiglearn.twig_learners import (
    fusions,
    learn_psf_twig0,
    learn_psf_twig1,
    learn_psf_twig1_star,
)


def test_fusions_running_example():
    p = path_query(("r", "a", "b"), (DESC, CHILD))
    q = parse_query("r[*/a][.//a/c]")
    got = sorted(f.canonical for f in fusions(p, q))
    assert got == [
        "r[*/a/b][.//a/c]",  # below the a under the wildcard
        "r[*/a][.//a/b][.//a/c]",  # whole suffix at the root
        "r[*/a][.//a[b][c]]",  # beside c under the descendant a
    ]


def test_fusions_phantom():
    p = path_query(("r", "a"), (CHILD,))
    assert [f.canonical for f in fusions(p, None)] == ["r[a]"]


def test_fusions_can_be_empty():
    p = path_query(("a", "a"), (CHILD,))
    q = parse_query("b[a]/b")
    assert fusions(p, q) == ()


def test_twig0_dblp(dblp_sample):
    q = learn_psf_twig0(dblp_sample)
    assert query_iso(q, parse_query("dblp[*/url]/*[title]/author"))


def test_twig0_two_leaves():
    assert learn_psf_twig0([Tree.from_term("r(a,b)")]).canonical == "r[a][b]"


def test_twig0_interleaved(exp_sample):
    q = learn_psf_twig0(exp_sample)
    assert q.canonical == "r[.//a1/*/a2//c][.//b1/*/b2//c]"
    members = learn_conj_path0(exp_sample).members
    assert q.size <= sum(m.size for m in members)


def test_twig0_empty():
    with pytest.raises(EmptySampleError):
        learn_psf_twig0([])


def test_twig0_sound_and_psf():
    rng = random.Random(51)
    for _ in range(200):
        sample = qgen.rand_sample(rng, rng.randint(1, 3), 8, ["a", "b", "c"], unary=False)
        q = learn_psf_twig0(sample)
        assert is_psf(q)
        assert all(embeds(q, t) for t in sample)


def test_twig1_library(library_sample):
    q = learn_psf_twig1(library_sample)
    assert query_iso(q, parse_query("library/*[author/marx]/title[.//*]", unary=True))


def test_twig1_star_library_subtrees():
    sample = [
        DecoratedTree.from_term("collection(title!(capital),author(marx))"),
        DecoratedTree.from_term("book(title!(manifesto),author(marx),author(engels))"),
    ]
    q0 = parse_query("*/title[.//*]", unary=True)
    q = learn_psf_twig1_star(sample, q0)
    assert query_iso(q, parse_query("*[author/marx]/title[.//*]", unary=True))


def test_twig1_star_absorbs_when_already_subsumed():
    # differing grandchild labels make the inferred path end in //*,
    # whose leaf split embeds into q0, so every fusion is equivalent to
    # q0 and the smallest candidate is q0 itself
    sample = [
        DecoratedTree.from_term("x(a!(b))"),
        DecoratedTree.from_term("x(a!(c))"),
    ]
    q0 = parse_query("x/a[.//*]", unary=True)
    assert query_iso(learn_psf_twig1_star(sample, q0), q0)


def test_twig1_star_specializes_without_leaf_embedding():
    # r/a/b is contained in q0 but its leaf split needs a child edge,
    # so fusion grafts the leaf and the result is strictly below q0
    sample = [DecoratedTree.from_term("r(a!(b))")]
    q0 = parse_query("r/a[.//*]", unary=True)
    q = learn_psf_twig1_star(sample, q0)
    assert q.canonical == "r/a[.//*][b]"
    assert subsumes(q0, q) and not subsumes(q, q0)


def test_twig1_star_checks_precondition():
    with pytest.raises(ValueError):
        learn_psf_twig1_star(
            [DecoratedTree.from_term("r(a!)")],
            parse_query("r/b", unary=True),
        )


def test_twig1_single_example():
    q = learn_psf_twig1([DecoratedTree.from_term("r(a(b!))")])
    assert q.canonical == "r/a/b"


def test_twig1_single_node_subtrees():
    # the selected nodes are leaves, so the deepest step learns from
    # single-node trees and must absorb them
    sample = [
        DecoratedTree.from_term("r(x(s!))"),
        DecoratedTree.from_term("r(y(x(s!)))"),
    ]
    q = learn_psf_twig1(sample)
    assert all(embeds(q, t) for t in sample)


def test_twig1_spine_is_path1_spine(library_sample):
    from twiglearn.path_learners import learn_anch_path1
    from twiglearn.queries import path_labels_edges

    q = learn_psf_twig1(library_sample)
    spine_nodes = q.root_path_nodes(q.selecting)
    spine = path_query(
        [q.labels[v] for v in spine_nodes],
        [q.edges[v] for v in spine_nodes[1:]],
        unary=True,
    )
    assert query_iso(spine, learn_anch_path1(library_sample))


def test_twig1_sound_and_psf():
    rng = random.Random(52)
    for _ in range(150):
        sample = qgen.rand_sample(rng, rng.randint(1, 3), 8, ["a", "b", "c"], unary=True)
        q = learn_psf_twig1(sample)
        assert is_psf(q)
        assert all(embeds(q, t) for t in sample)


def test_conj_on_twig_match_set_returns_its_paths():
    rng = random.Random(53)
    for _ in range(60):
        q = qgen.rand_psf_twig(rng, ["a", "b"], 8, unary=False)
        conj = learn_conj_path0(char_sample(q))
        got = sorted(m.canonical for m in conj.members)
        expected = sorted({p.canonical for p in paths_of_query(q)})
        assert got == expected, q.canonical


def test_twig0_completeness_on_match_sets():
    rng = random.Random(54)
    for _ in range(50):
        q = qgen.rand_psf_twig(rng, ["a", "b"], 8, unary=False)
        sample = list(char_sample(q))
        for _ in range(rng.randint(0, 3)):
            sample.append(qgen.instantiate(rng, q, ["a", "b", "z1"]))
        learned = learn_psf_twig0(sample)
        assert subsumes(learned, q) and subsumes(q, learned), (
            q.canonical,
            learned.canonical,
        )


def test_twig1_completeness_on_match_sets():
    rng = random.Random(55)
    for _ in range(50):
        q = qgen.rand_psf_twig(rng, ["a", "b"], 8, unary=True)
        sample = list(char_sample(q))
        for _ in range(rng.randint(0, 3)):
            sample.append(qgen.instantiate(rng, q, ["a", "b", "z1"]))
        learned = learn_psf_twig1(sample)
        assert subsumes(learned, q) and subsumes(q, learned), (
            q.canonical,
            learned.canonical,
        )


def test_fusion_loop_intermediates_stay_psf():
    # replay the learner's fusion loop: every chosen intermediate twig
    # is path-subsumption-free, step by step
    from twiglearn.twig_learners import _minimal_candidate

    rng = random.Random(57)
    checked = 0
    for _ in range(150):
        sample = qgen.rand_sample(rng, rng.randint(1, 3), 8, ["a", "b", "c"], unary=False)
        conj = learn_conj_path0(sample)
        q = None
        for p in conj.members:
            cands = [
                f for f in fusions(p, q) if all(embeds(f, t) for t in sample)
            ]
            q = _minimal_candidate(cands)
            checked += 1
            assert is_psf(q), (p.canonical, q.canonical)
    assert checked > 150


def test_fusions_of_comparable_paths_can_break_psf():
    # fusing a copy of an existing branch duplicates a root-to-leaf
    # path, so the blanket preservation claim needs the reduced-set
    # precondition above
    q = parse_query("b[.//b][a]")
    assert is_psf(q)
    results = fusions(path_query(("b", "b"), (DESC,)), q)
    assert any(not is_psf(f) for f in results)


def test_fusion_steps_on_match_sets_have_unique_minimum():
    # replay the fusion loop over a match-set sample: the consistent
    # fusions at every step collapse to a single minimal candidate up to
    # equivalence, and it stays below the goal query
    from twiglearn.twig_learners import _minimal_candidate

    rng = random.Random(58)
    for _ in range(40):
        goal = qgen.rand_psf_twig(rng, ["a", "b"], 8, unary=False)
        sample = list(char_sample(goal))
        conj = learn_conj_path0(sample)
        q = None
        for p in conj.members:
            cands = [
                f
                for f in fusions(p, q)
                if all(embeds(f, t) for t in sample)
            ]
            assert cands
            minimal = [
                c
                for c in cands
                if not any(
                    subsumes(c, o) and not subsumes(o, c) for o in cands
                )
            ]
            canon = {m.canonical for m in minimal}
            for a in minimal:
                for b in minimal:
                    assert subsumes(a, b) and subsumes(b, a), canon
            q = _minimal_candidate(cands)
            assert subsumes(q, goal), (goal.canonical, q.canonical)
        assert subsumes(goal, q) and subsumes(q, goal)


def test_twig_output_size_bounded_by_path_total():
    rng = random.Random(56)
    for _ in range(100):
        sample = qgen.rand_sample(rng, rng.randint(1, 2), 8, ["a", "b"], unary=False)
        q = learn_psf_twig0(sample)
        members = learn_conj_path0(sample).members
        assert q.size <= sum(m.size for m in members)
