"""Command-line front end.

Exit codes: 0 success, 1 no result (e.g. an inconsistent signed
sample), 2 usage errors.  Diagnostics go to stderr; results to stdout,
one query per line in canonical syntax.

Tree inputs are XML documents (``.xml``) or term fixtures (anything
else): term files hold one tree per non-empty line, ``r(b(a!))`` style,
with ``!`` marking the selected node.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Iterable, Optional

from . import consistency as cons
from .charsample import char_sample
from .errors import TwiglearnError
from .matching import answers, embeds, subsumes
from .oracle import (
    EnumSpec,
    enumerate_queries,
    minimal_consistent,
    refute_contains,
)
from .path_learners import learn_anch_path0, learn_anch_path1, learn_conj_path0
from .queries import ConjQuery, TwigQuery, parse_query
from .trees import (
    DEFAULT_ANNOT_ATTR,
    DEFAULT_MIN_LABEL,
    DEFAULT_VIRTUAL_ROOT_LABEL,
    DecoratedTree,
    SignedSample,
    Tree,
    parse_example,
    parse_xml,
    parse_xml_tree,
)
from .twig_learners import learn_psf_twig0, learn_psf_twig1

UNARY_CLASSES = {"path1": learn_anch_path1, "twig1": learn_psf_twig1}
BOOLEAN_CLASSES = {
    "path0": learn_anch_path0,
    "conj0": learn_conj_path0,
    "twig0": learn_psf_twig0,
}


def _read_terms(path: Path) -> list:
    out = []
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(parse_example(line))
    return out


def _load_trees(paths: Iterable[str], virtual_root: Optional[str]) -> list[Tree]:
    trees: list[Tree] = []
    for name in paths:
        path = Path(name)
        if path.suffix.lower() == ".xml":
            trees.append(parse_xml_tree(path.read_text(encoding="utf-8"), virtual_root))
        else:
            for ex in _read_terms(path):
                if isinstance(ex, DecoratedTree):
                    raise TwiglearnError(
                        f"{name}: selected-node marks are not allowed here"
                    )
                trees.append(ex)
    return trees


def _load_unary_sample(
    paths: Iterable[str], annot_attr: str, virtual_root: Optional[str]
) -> SignedSample:
    pairs = []
    for name in paths:
        path = Path(name)
        if path.suffix.lower() == ".xml":
            sample = parse_xml(
                path.read_text(encoding="utf-8"),
                mode="unary",
                annot_attr=annot_attr,
                virtual_root=virtual_root,
            )
            pairs.extend(sample.examples)
        else:
            for ex in _read_terms(path):
                if not isinstance(ex, DecoratedTree):
                    raise TwiglearnError(f"{name}: term lacks a '!' selection mark")
                pairs.append((ex, "+"))
    return SignedSample.of(pairs)


def _emit_queries(queries: list[TwigQuery], args, extra: Optional[dict] = None):
    if getattr(args, "json", False):
        doc = {
            "queries": [
                {"text": q.canonical, "size": q.size, "unary": q.is_unary}
                for q in queries
            ],
        }
        doc.update(extra or {})
        print(json.dumps(doc, sort_keys=True))
    else:
        for q in queries:
            print(q.canonical)


def _cmd_learn(args) -> int:
    vroot = args.virtual_root
    if args.query_class in UNARY_CLASSES:
        files = args.files + args.pos
        if not files:
            raise TwiglearnError("no input documents")
        sample = _load_unary_sample(files, args.annot_attr, vroot)
        positives = sample.positives()
        negatives = sample.negatives()
        if not positives:
            print("no positive examples", file=sys.stderr)
            return 1
        query = UNARY_CLASSES[args.query_class](positives)
        queries = [query]
        signed = [(ex, s) for ex, s in sample.examples]
    else:
        positives = _load_trees(args.pos + args.files, vroot)
        negatives = _load_trees(args.neg, vroot)
        if not positives:
            print("no positive examples", file=sys.stderr)
            return 1
        if args.query_class == "path0":
            result = learn_anch_path0(positives, negatives=negatives)
        else:
            result = BOOLEAN_CLASSES[args.query_class](positives)
        queries = list(result.members) if isinstance(result, ConjQuery) else [result]
        signed = [(t, "+") for t in positives] + [(t, "-") for t in negatives]

    extra = {"class": args.query_class}
    if getattr(args, "json", False):
        verdicts = [
            {
                "sign": sign,
                "selected": all(embeds(q, ex) for q in queries),
            }
            for ex, sign in signed
        ]
        extra["per_example"] = verdicts
        extra["consistent"] = all(
            v["selected"] if v["sign"] == "+" else not v["selected"]
            for v in verdicts
        )
    _emit_queries(queries, args, extra)
    return 0


def _cmd_eval(args) -> int:
    query = parse_query(args.query, unary=args.unary)
    vroot = args.virtual_root
    for name in args.files:
        path = Path(name)
        if path.suffix.lower() == ".xml":
            trees = [parse_xml_tree(path.read_text(encoding="utf-8"), vroot)]
        else:
            trees = _load_trees([name], vroot)
        for idx, tree in enumerate(trees):
            tag = name if len(trees) == 1 else f"{name}:{idx + 1}"
            if args.unary:
                for n in sorted(answers(query, tree)):
                    print(f"{tag}\t{n}\t{'/'.join(tree.root_word(n))}")
            else:
                print(f"{tag}\t{str(embeds(query, tree)).lower()}")
    return 0


def _cmd_subsume(args) -> int:
    q1 = parse_query(args.query1, unary=args.unary)
    q2 = parse_query(args.query2, unary=args.unary)
    print(str(subsumes(q1, q2)).lower())
    return 0


def _cmd_charsample(args) -> int:
    query = parse_query(args.query, unary=args.unary)
    for t in char_sample(query, a0=args.a0):
        print(t.to_term())
    return 0


def _spec_from_args(args, default_max_nodes: Optional[int] = None) -> EnumSpec:
    max_nodes = args.max_nodes if args.max_nodes is not None else default_max_nodes
    if max_nodes is None:
        raise TwiglearnError("--max-nodes is required here")
    return EnumSpec(
        labels=tuple(args.labels.split(",")) if args.labels else (),
        max_nodes=max_nodes,
        query_class=args.query_class,
        max_depth=args.max_depth,
        allow_star=not args.no_star,
        allow_desc=not args.no_desc,
        query_cap=args.cap,
    )


def _cmd_oracle_enumerate(args) -> int:
    for q in enumerate_queries(_spec_from_args(args)):
        print(q.canonical)
    return 0


def _cmd_oracle_minimal(args) -> int:
    unary = args.query_class.endswith("unary")
    if unary:
        sample = list(_load_unary_sample(args.pos, args.annot_attr, None).positives())
    else:
        sample = _load_trees(args.pos, None)
    spec = _spec_from_args(args)
    if not spec.labels:
        labels = sorted(
            {
                lab
                for ex in sample
                for lab in (ex.tree.labels if unary else ex.labels)
            }
        )
        spec = EnumSpec(
            labels=tuple(labels),
            max_nodes=spec.max_nodes,
            query_class=spec.query_class,
            max_depth=spec.max_depth,
            allow_star=spec.allow_star,
            allow_desc=spec.allow_desc,
            query_cap=spec.query_cap,
        )
    for q in minimal_consistent(sample, spec):
        print(q.canonical)
    return 0


def _cmd_oracle_refute(args) -> int:
    q1 = parse_query(args.query1, unary=args.unary)
    q2 = parse_query(args.query2, unary=args.unary)
    verdict, witness = refute_contains(q1, q2, args.budget)
    if verdict == "not-contained":
        print(witness.to_term())
        return 0
    print("unknown")
    return 1


def _cmd_consistency(args) -> int:
    unary = args.query_class.endswith("unary")
    vroot = args.virtual_root
    if unary:
        sample = SignedSample.of(
            pair
            for name in args.files + args.pos
            for pair in _load_unary_sample([name], args.annot_attr, vroot).examples
        )
    else:
        pairs = [(t, "+") for t in _load_trees(args.pos, vroot)]
        pairs += [(t, "-") for t in _load_trees(args.neg, vroot)]
        sample = SignedSample.of(pairs)
    if not sample.examples:
        print("no examples", file=sys.stderr)
        return 1
    sizes = [ex.size for ex in sample.positives()]
    spec = _spec_from_args(args, default_max_nodes=min(sizes) if sizes else 4)
    if not spec.labels:
        labels = sorted(
            {
                lab
                for ex, _ in sample.examples
                for lab in (ex.tree.labels if isinstance(ex, DecoratedTree) else ex.labels)
            }
        )
        spec = EnumSpec(
            labels=tuple(labels),
            max_nodes=spec.max_nodes,
            query_class=spec.query_class,
            max_depth=spec.max_depth,
            allow_star=spec.allow_star,
            allow_desc=spec.allow_desc,
            query_cap=spec.query_cap,
        )
    result = cons.check_consistency(sample, spec)
    if result is None:
        print("inconsistent within bounds", file=sys.stderr)
        return 1
    print(result.canonical)
    return 0


def _cmd_sat2sample(args) -> int:
    formula = cons.parse_dimacs(Path(args.cnf).read_text(encoding="utf-8"))
    sample = cons.sat_to_sample(formula)
    for ex, sign in sample.examples:
        print(f"{sign} {ex.to_term()}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(static_dir=args.static)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twiglearn",
        description="Learn XPath-like path and twig queries from annotated XML",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_sample_flags(p, neg=True):
        p.add_argument("files", nargs="*", help="input documents")
        p.add_argument("--pos", nargs="*", default=[], help="positive documents")
        if neg:
            p.add_argument("--neg", nargs="*", default=[], help="negative documents")
        p.add_argument("--annot-attr", default=DEFAULT_ANNOT_ATTR)
        p.add_argument(
            "--virtual-root",
            nargs="?",
            const=DEFAULT_VIRTUAL_ROOT_LABEL,
            default=None,
            metavar="LABEL",
            help="wrap documents under a fresh root (optional label)",
        )

    p = sub.add_parser("learn", help="learn a query from examples")
    p.add_argument(
        "--class",
        dest="query_class",
        required=True,
        choices=sorted(list(UNARY_CLASSES) + list(BOOLEAN_CLASSES)),
    )
    add_sample_flags(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_learn)

    p = sub.add_parser("eval", help="evaluate a query on documents")
    p.add_argument("--query", required=True)
    p.add_argument("--unary", action="store_true")
    p.add_argument(
        "--virtual-root",
        nargs="?",
        const=DEFAULT_VIRTUAL_ROOT_LABEL,
        default=None,
        metavar="LABEL",
    )
    p.add_argument("files", nargs="+")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("subsume", help="does the first query subsume the second?")
    p.add_argument("query1")
    p.add_argument("query2")
    p.add_argument("--unary", action="store_true")
    p.set_defaults(func=_cmd_subsume)

    p = sub.add_parser("charsample", help="emit the two-tree match set of a query")
    p.add_argument("query")
    p.add_argument("--unary", action="store_true")
    p.add_argument("--a0", default=DEFAULT_MIN_LABEL)
    p.set_defaults(func=_cmd_charsample)

    oracle = sub.add_parser("oracle", help="brute-force ground truth")
    osub = oracle.add_subparsers(dest="oracle_command", required=True)

    def add_spec_flags(p, nodes_required=True):
        p.add_argument("--labels", default="", help="comma-separated alphabet")
        p.add_argument("--max-nodes", type=int, required=nodes_required, default=None)
        p.add_argument("--max-depth", type=int, default=None)
        p.add_argument("--no-star", action="store_true")
        p.add_argument("--no-desc", action="store_true")
        p.add_argument("--cap", type=int, default=10**5)
        p.add_argument(
            "--class",
            dest="query_class",
            required=True,
            choices=[
                "path-unary",
                "path-boolean",
                "anchored-path-unary",
                "anchored-path-boolean",
                "twig-boolean",
                "twig-unary",
                "psf-twig-boolean",
                "psf-twig-unary",
            ],
        )

    p = osub.add_parser("enumerate", help="list every class member in bounds")
    add_spec_flags(p)
    p.set_defaults(func=_cmd_oracle_enumerate)

    p = osub.add_parser("minimal", help="minimal consistent queries of a sample")
    add_spec_flags(p)
    p.add_argument("--pos", nargs="+", required=True)
    p.add_argument("--annot-attr", default=DEFAULT_ANNOT_ATTR)
    p.set_defaults(func=_cmd_oracle_minimal)

    p = osub.add_parser("refute", help="search a tree separating two queries")
    p.add_argument("query1")
    p.add_argument("query2")
    p.add_argument("--unary", action="store_true")
    p.add_argument("--budget", type=int, default=10**4)
    p.set_defaults(func=_cmd_oracle_refute)

    p = sub.add_parser("consistency", help="bounded signed-sample consistency")
    add_spec_flags(p, nodes_required=False)
    add_sample_flags(p)
    p.set_defaults(func=_cmd_consistency)

    p = sub.add_parser("sat2sample", help="encode a DIMACS CNF as a signed sample")
    p.add_argument("cnf")
    p.set_defaults(func=_cmd_sat2sample)

    p = sub.add_parser("serve", help="run the annotation HTTP service")
    p.add_argument("--host", default=os.environ.get("TWIGLEARN_HOST", "127.0.0.1"))
    p.add_argument(
        "--port", type=int, default=int(os.environ.get("TWIGLEARN_PORT", "8808"))
    )
    p.add_argument("--static", default=None, help="serve a UI build at /ui")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TwiglearnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
