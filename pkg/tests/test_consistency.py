import itertools
import random

import pytest

import qgen
from twiglearn.consistency import (
    CnfFormula,
    brute_force_sat,
    check_consistency,
    parse_dimacs,
    reduction_spec,
    sat_crosscheck,
    sat_to_sample,
)
from twiglearn.matching import embeds
from twiglearn.oracle import EnumSpec
from twiglearn.trees import SignedSample, Tree

PHI0 = CnfFormula(3, ((-1, 2, -3), (1, -2)))


def brush(spec: dict) -> str:
    parts = []
    for i in (1, 2, 3):
        leaves = spec.get(i, "01")
        parts.append(f"x{i}({','.join(leaves)})" if leaves else f"x{i}")
    return f"d({','.join(parts)})"


def test_cnf_validation():
    with pytest.raises(ValueError):
        CnfFormula(1, ((),))
    with pytest.raises(ValueError):
        CnfFormula(1, ((2,),))
    with pytest.raises(ValueError):
        CnfFormula(1, ((0,),))


def test_parse_dimacs():
    text = """c sample
p cnf 3 2
-1 2 -3 0
1 -2 0
"""
    f = parse_dimacs(text)
    assert f == PHI0
    with pytest.raises(ValueError):
        parse_dimacs("p cnf 2 5\n1 0\n")


def test_brute_force_sat():
    assert brute_force_sat(PHI0)
    assert not brute_force_sat(CnfFormula(1, ((1,), (-1,))))
    assert brute_force_sat(CnfFormula(0, ()))


def test_sat_to_sample_matches_construction():
    sample = sat_to_sample(PHI0)
    examples = sample.examples
    assert [sign for _, sign in examples].count("+") == 2
    assert [sign for _, sign in examples].count("-") == 1
    positives = sample.positives()
    negative = sample.negatives()[0]
    pos_terms = {t.canonical for t in positives}
    clause1 = f"c({brush({1: '0'})},{brush({2: '1'})},{brush({3: '0'})})"
    clause2 = f"c({brush({1: '1'})},{brush({2: '0'})})"
    assert pos_terms == {
        Tree.from_term(clause1).canonical,
        Tree.from_term(clause2).canonical,
    }
    neg_term = f"c({brush({1: ''})},{brush({2: ''})},{brush({3: ''})})"
    assert negative.canonical == Tree.from_term(neg_term).canonical


def test_sat_to_sample_single_clause():
    f = CnfFormula(1, ((1,),))
    sample = sat_to_sample(f)
    (pos,) = sample.positives()
    (neg,) = sample.negatives()
    assert pos.to_term() == "c(d(x1(1)))"
    assert neg.to_term() == "c(d(x1))"


def test_sat_to_sample_size_linear():
    for nvars in (1, 2, 3):
        for nclauses in (1, 2, 3):
            clauses = tuple(
                tuple((v + 1) * (1 if (c + v) % 2 else -1) for v in range(nvars))
                for c in range(nclauses)
            )
            f = CnfFormula(nvars, clauses)
            total = sum(ex.size for ex, _ in sat_to_sample(f).examples)
            # per c-tree: one brush of <= 1 + 3*nvars nodes per literal
            assert total <= (nclauses * nvars + nvars) * (1 + 3 * nvars) + nclauses + 1


def test_reduction_consistency_satisfiable():
    sample = sat_to_sample(PHI0)
    q = check_consistency(sample, reduction_spec(sample))
    assert q is not None
    for ex, sign in sample.examples:
        assert embeds(q, ex) == (sign == "+")


def test_reduction_consistency_unsatisfiable():
    sample = sat_to_sample(CnfFormula(1, ((1,), (-1,))))
    assert check_consistency(sample, reduction_spec(sample)) is None


def test_separating_filter_shape():
    # a satisfying valuation of the first formula is x1=0, x2=0: the
    # corresponding brush pattern separates by hand
    sample = sat_to_sample(PHI0)
    q_text = "c[d[x1/0][x2/0][x3/0]]"
    from twiglearn.queries import parse_query

    q = parse_query(q_text)
    for ex, sign in sample.examples:
        assert embeds(q, ex) == (sign == "+")


def test_positive_only_always_consistent():
    rng = random.Random(71)
    for _ in range(30):
        trees = qgen.rand_sample(rng, rng.randint(1, 3), 6, ["a", "b"], unary=False)
        sample = SignedSample.of([(t, "+") for t in trees])
        spec = EnumSpec(
            labels=("a", "b"), max_nodes=2, query_class="anchored-path-boolean"
        )
        assert check_consistency(sample, spec) is not None


def test_returned_query_separates():
    rng = random.Random(72)
    done = 0
    for _ in range(40):
        trees = qgen.rand_sample(rng, 3, 5, ["a", "b"], unary=False)
        sample = SignedSample.of(
            [(trees[0], "+"), (trees[1], "+"), (trees[2], "-")]
        )
        if len(sample.examples) < 3:
            continue
        spec = EnumSpec(
            labels=("a", "b"), max_nodes=4, query_class="twig-boolean"
        )
        q = check_consistency(sample, spec)
        if q is None:
            continue
        done += 1
        for ex, sign in sample.examples:
            assert embeds(q, ex) == (sign == "+")
    assert done > 5


def all_small_formulas(max_vars=2, max_clauses=2):
    for nvars in range(1, max_vars + 1):
        literals = [v for i in range(1, nvars + 1) for v in (i, -i)]
        clause_pool = [
            tuple(sorted(c, key=abs))
            for size in range(1, len(literals) + 1)
            for c in itertools.combinations(literals, size)
        ]
        for nclauses in range(1, max_clauses + 1):
            for clauses in itertools.combinations_with_replacement(
                clause_pool, nclauses
            ):
                yield CnfFormula(nvars, clauses)


def test_crosscheck_examples():
    assert sat_crosscheck(PHI0)
    assert sat_crosscheck(CnfFormula(1, ((1,), (-1,))))


def test_crosscheck_all_small_formulas():
    count = 0
    for f in all_small_formulas():
        assert sat_crosscheck(f), f
        count += 1
    assert count > 100


def test_restricted_space_matches_wider_star_free_search():
    # widening the wildcard-free space (descendant edges back in, looser
    # caps) changes nothing on tiny instances: labels are forced to
    # commit to a 0/1 leaf either way
    for f in [
        CnfFormula(1, ((1,),)),
        CnfFormula(1, ((-1,),)),
        CnfFormula(1, ((1,), (-1,))),
        CnfFormula(1, ((1, -1),)),
    ]:
        sample = sat_to_sample(f)
        restricted = check_consistency(sample, reduction_spec(sample)) is not None
        labels = tuple(sorted({lab for ex, _ in sample.examples for lab in ex.labels}))
        wide_spec = EnumSpec(
            labels=labels,
            max_nodes=4,
            query_class="twig-boolean",
            max_depth=6,
            allow_star=False,
            allow_desc=True,
            query_cap=10**6,
        )
        wide = check_consistency(sample, wide_spec) is not None
        assert restricted == wide == brute_force_sat(f)


def test_wildcards_defeat_the_encoding():
    # with wildcards admitted, one query separates every encoded sample
    # regardless of satisfiability: per variable it asks only for the
    # existence of some leaf, which every positive brush has and the
    # negative's per-variable brushes are built to lack
    from twiglearn.queries import parse_query

    f = CnfFormula(1, ((1,), (-1,)))  # unsatisfiable
    assert not brute_force_sat(f)
    sample = sat_to_sample(f)
    dodge = parse_query("c[d/x1/*]")
    for ex, sign in sample.examples:
        assert embeds(dodge, ex) == (sign == "+")
    labels = tuple(sorted({lab for ex, _ in sample.examples for lab in ex.labels}))
    starry = EnumSpec(
        labels=labels,
        max_nodes=5,
        query_class="twig-boolean",
        max_depth=4,
        query_cap=10**6,
    )
    assert check_consistency(sample, starry) is not None
