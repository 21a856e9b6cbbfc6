"""Positive/negative samples: bounded consistency and the SAT encoding.

With negative examples, deciding whether any query of a class agrees
with every sign is NP-complete, so the decider here is bounded: it
searches the enumerable query space of an ``EnumSpec`` and reports the
first fit, or absence within the bounds.  For the wildcard-free,
descendant-free Boolean space the decision is exact and fast: the most
specific product twig of the positives separates iff anything does.

The SAT encoding turns a CNF formula into brush trees: one positive
c-tree per clause holding one brush per literal (the brush keeps, under
the literal's variable, only the leaf that satisfies it) and a single
negative c-tree with one leafless-variable brush per variable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .errors import CapExceededError
from .matching import embeds
from .oracle import EnumSpec, enumerate_queries, most_specific_twig
from .queries import TwigQuery
from .trees import (
    NEGATIVE,
    POSITIVE,
    DecoratedTree,
    Example,
    SignedSample,
    Tree,
)


@dataclass(frozen=True)
class CnfFormula:
    """Clauses are tuples of non-zero literals (sign = polarity)."""

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.num_vars < 0:
            raise ValueError("negative variable count")
        for clause in self.clauses:
            if not clause:
                raise ValueError("empty clause")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} out of range")


def parse_dimacs(text: str) -> CnfFormula:
    num_vars = None
    declared = None
    clauses: list[tuple[int, ...]] = []
    pending: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad problem line: {line!r}")
            num_vars, declared = int(parts[2]), int(parts[3])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                if pending:
                    clauses.append(tuple(pending))
                    pending.clear()
            else:
                pending.append(lit)
    if pending:
        clauses.append(tuple(pending))
    if num_vars is None:
        num_vars = max((abs(l) for c in clauses for l in c), default=0)
    if declared is not None and declared != len(clauses):
        raise ValueError(
            f"problem line declares {declared} clauses, found {len(clauses)}"
        )
    return CnfFormula(num_vars, tuple(clauses))


def brute_force_sat(f: CnfFormula) -> bool:
    if f.num_vars > 20:
        raise CapExceededError("truth-table check limited to 20 variables")
    for bits in itertools.product((False, True), repeat=f.num_vars):
        if all(
            any((lit > 0) == bits[abs(lit) - 1] for lit in clause)
            for clause in f.clauses
        ):
            return True
    return False


# -- the reduction -------------------------------------------------------------


def _brush(num_vars: int, keep: dict[int, tuple[str, ...]]) -> tuple:
    """Nested form of a brush: d over x1..xn, leaf sets per variable."""
    kids = []
    for i in range(1, num_vars + 1):
        leaves = keep.get(i, ("0", "1"))
        kids.append((f"x{i}", [lab for lab in leaves]))
    return ("d", kids)


def sat_to_sample(f: CnfFormula) -> SignedSample:
    """Boolean signed sample whose consistency mirrors satisfiability."""
    pairs: list[tuple[Example, str]] = []
    for clause in f.clauses:
        brushes = []
        for lit in clause:
            var = abs(lit)
            satisfying = ("1",) if lit > 0 else ("0",)
            brushes.append(_brush(f.num_vars, {var: satisfying}))
        pairs.append((Tree.from_nested(("c", brushes)), POSITIVE))
    neg_brushes = [
        _brush(f.num_vars, {i: ()}) for i in range(1, f.num_vars + 1)
    ]
    pairs.append((Tree.from_nested(("c", neg_brushes)), NEGATIVE))
    # duplicate clauses produce identical c-trees and collapse here
    return SignedSample.of(pairs)


def reduction_spec(sample: SignedSample) -> EnumSpec:
    """Bounds under which the reduction loses nothing: the sample's
    labels, no wildcard, no descendant edges, height at most 4.  The
    node bound leaves room for the product of the positives."""
    labels = sorted(
        {lab for ex, _ in sample.examples for lab in _tree_of(ex).labels}
    )
    max_nodes = 1
    for ex in sample.positives():
        max_nodes *= _tree_of(ex).size
    max_nodes = max(max_nodes, 1)
    return EnumSpec(
        labels=tuple(labels),
        max_nodes=max_nodes,
        query_class="twig-boolean",
        max_depth=4,
        allow_star=False,
        allow_desc=False,
    )


def _tree_of(ex: Example) -> Tree:
    return ex.tree if isinstance(ex, DecoratedTree) else ex


# -- bounded consistency ---------------------------------------------------------


def _fits(q: TwigQuery, positives, negatives) -> bool:
    return all(embeds(q, p) for p in positives) and not any(
        embeds(q, n) for n in negatives
    )


def check_consistency(
    sample: SignedSample, spec: EnumSpec
) -> Optional[TwigQuery]:
    """A query within the spec consistent with every sign, or None.

    Exact for wildcard-free, descendant-free Boolean specs (through the
    product twig of the positives); elsewhere a bounded search that is
    complete only within the spec's bounds and raises past its cap.
    """
    positives = sample.positives()
    negatives = sample.negatives()
    if not positives:
        # nothing constrains from below; search the space directly
        return _enumerated_fit(sample, spec)

    unary = spec.query_class.endswith("unary")
    for ex in sample.positives() + sample.negatives():
        if isinstance(ex, DecoratedTree) != unary:
            raise ValueError("sample arity does not match the spec's class")

    if (
        not spec.allow_star
        and not spec.allow_desc
        and spec.query_class == "twig-boolean"
    ):
        product = most_specific_twig(
            [_tree_of(p) for p in positives],
            allow_desc=False,
            max_depth=spec.max_depth,
        )
        if product is None or product.size > spec.max_nodes:
            return None if product is None else _enumerated_fit(sample, spec)
        return product if _fits(product, positives, negatives) else None

    return _enumerated_fit(sample, spec)


def _enumerated_fit(sample: SignedSample, spec: EnumSpec) -> Optional[TwigQuery]:
    positives = sample.positives()
    negatives = sample.negatives()
    for q in enumerate_queries(spec):
        if _fits(q, positives, negatives):
            return q
    return None


def sat_crosscheck(f: CnfFormula, spec: Optional[EnumSpec] = None) -> bool:
    """Does bounded consistency of the encoded sample agree with the
    formula's brute-force satisfiability?"""
    sample = sat_to_sample(f)
    spec = spec or reduction_spec(sample)
    found = check_consistency(sample, spec) is not None
    return found == brute_force_sat(f)
