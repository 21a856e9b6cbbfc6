"""Cross-cutting invariants, driven by hypothesis where inputs are flat
data and by seeded random structure generators elsewhere."""

import random

from hypothesis import given, settings
from hypothesis import strategies as st

import qgen
from twiglearn.charsample import char_sample
from twiglearn.matching import embeds, subsumes
from twiglearn.oracle import EnumSpec, consistent_candidates
from twiglearn.path_learners import (
    learn_anch_path0_star,
    learn_anch_path1,
    learn_conj_path0,
)
from twiglearn.queries import is_anchored, parse_query, serialize
from twiglearn.trees import Tree, canonical_min, parse_term, word_key
from twiglearn.twig_learners import learn_psf_twig0, learn_psf_twig1

labels_st = st.text(alphabet="abc", min_size=1, max_size=3)
words_st = st.lists(labels_st, min_size=1, max_size=6).map(tuple)


@given(st.lists(words_st, min_size=1, max_size=8))
def test_canonical_min_is_total_and_stable(words):
    first = canonical_min(words)
    assert first == canonical_min(list(reversed(words)))
    assert all(word_key(first) <= word_key(w) for w in words)
    assert first in words


@given(st.recursive(labels_st, lambda kids: st.tuples(labels_st, st.lists(kids, max_size=3)), max_leaves=12))
def test_term_roundtrip(nested):
    t = Tree.from_nested(nested)
    again, sel = parse_term(t.to_term())
    assert sel is None
    assert again == t


@settings(max_examples=60)
@given(st.integers(0, 10**6))
def test_query_text_roundtrip(seed):
    rng = random.Random(seed)
    q = qgen.rand_twig(rng, ["a", "b", "c"], 10)
    assert serialize(parse_query(serialize(q))) == serialize(q)


def test_char_sample_decides_containment_like_subsumption():
    rng = random.Random(101)
    for _ in range(150):
        unary = rng.random() < 0.5
        q = qgen.rand_anchored_path(rng, ["a", "b"], 7, unary=unary)
        q2 = qgen.rand_anchored_path(rng, ["a", "b"], 7, unary=unary)
        holds = all(embeds(q2, t) for t in char_sample(q))
        assert holds == subsumes(q2, q)


def test_learner_outputs_remain_in_class_and_sound():
    rng = random.Random(102)
    for _ in range(120):
        trees = qgen.rand_sample(rng, rng.randint(1, 3), 9, ["a", "b", "c"], unary=False)
        conj = learn_conj_path0(trees)
        assert all(is_anchored(m) for m in conj.members)
        assert all(embeds(conj, t) for t in trees)
        # the conjunction and the twig learner agree on satisfaction
        twig = learn_psf_twig0(trees)
        for t in trees:
            assert embeds(twig, t)


def test_star_learner_result_also_accepts_its_seed_word():
    rng = random.Random(103)
    for _ in range(150):
        trees = qgen.rand_sample(rng, rng.randint(1, 2), 8, ["a", "b"], unary=False)
        words = sorted({w for t in trees for w in t.path_words})
        u = rng.choice(words)
        p = learn_anch_path0_star(u, trees)
        seed_tree = Tree(
            tuple(u), tuple(range(-1, len(u) - 1))
        )
        assert embeds(p, seed_tree)


def test_unary_learners_select_annotated_nodes():
    rng = random.Random(104)
    for _ in range(100):
        sample = qgen.rand_sample(rng, rng.randint(1, 3), 8, ["a", "b"], unary=True)
        for learner in (learn_anch_path1, learn_psf_twig1):
            q = learner(sample)
            for ex in sample:
                assert embeds(q, ex)


def test_oracle_candidates_are_consistent_and_exhaustive():
    rng = random.Random(105)
    for _ in range(30):
        trees = [t for t in qgen.rand_sample(rng, 2, 5, ["a", "b"], unary=False)]
        spec = EnumSpec(
            labels=("a", "b"), max_nodes=3, query_class="anchored-path-boolean"
        )
        from twiglearn.oracle import enumerate_queries

        slow = {
            q.canonical
            for q in enumerate_queries(spec)
            if all(embeds(q, t) for t in trees)
        }
        fast = {q.canonical for q in consistent_candidates(trees, spec)}
        assert slow == fast
