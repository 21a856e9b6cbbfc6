"""Session-based HTTP API for the annotate / learn / inspect loop.

A session holds uploaded documents (immutable, node ids are preorder
indices) and per-node +/- annotations.  The query endpoint learns from
the current positives; negatives are verified against the result and,
when violated, a bounded consistency search runs before giving up with
422.  Sessions live in memory; requests touching one session are
serialized.
"""

from __future__ import annotations

import threading
import uuid
from concurrent.futures import ThreadPoolExecutor, TimeoutError as FutureTimeout
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .consistency import check_consistency
from .errors import CapExceededError, TwiglearnError, XmlFormatError
from .matching import answers, embeds
from .oracle import EnumSpec
from .path_learners import learn_anch_path0, learn_anch_path1, learn_conj_path0
from .queries import parse_query
from .trees import (
    DEFAULT_VIRTUAL_ROOT_LABEL,
    NEGATIVE,
    POSITIVE,
    DecoratedTree,
    SignedSample,
    Tree,
    parse_xml_tree,
)
from .twig_learners import learn_psf_twig0, learn_psf_twig1

UNARY_CLASSES = ("path1", "twig1")
BOOLEAN_CLASSES = ("path0", "conj0", "twig0")
DEFAULT_CLASS = "twig1"

#: ceiling for the bounded consistency search triggered by negatives
CONSISTENCY_MAX_NODES = 6


class SessionCreate(BaseModel):
    query_class: str = DEFAULT_CLASS
    virtual_root: bool = False


class DocumentUpload(BaseModel):
    xml: str


class Annotation(BaseModel):
    sign: str


@dataclass
class Session:
    id: str
    query_class: str
    virtual_root: bool
    documents: dict[str, Tree] = field(default_factory=dict)
    annotations: dict[tuple[str, int], str] = field(default_factory=dict)
    last_result: Optional[dict] = None
    lock: threading.RLock = field(default_factory=threading.RLock)
    doc_counter: int = 0


def _tree_json(tree: Tree, node: int = 0) -> dict:
    return {
        "id": node,
        "label": tree.labels[node],
        "children": [_tree_json(tree, c) for c in tree.children[node]],
    }


def _signed_examples(session: Session):
    unary = session.query_class in UNARY_CLASSES
    positives: list = []
    negatives: list = []
    doc_signs: dict[str, set[str]] = {}
    for (doc_id, node), sign in sorted(session.annotations.items()):
        tree = session.documents[doc_id]
        if unary:
            ex = DecoratedTree(tree, node)
            (positives if sign == POSITIVE else negatives).append(ex)
        else:
            doc_signs.setdefault(doc_id, set()).add(sign)
    if not unary:
        for doc_id, signs in sorted(doc_signs.items()):
            if len(signs) > 1:
                raise HTTPException(
                    422,
                    detail={
                        "error": "conflicting document signs",
                        "doc": doc_id,
                    },
                )
            tree = session.documents[doc_id]
            (positives if POSITIVE in signs else negatives).append(tree)
    return positives, negatives


def _learn(session: Session) -> dict:
    positives, negatives = _signed_examples(session)
    if not positives:
        raise HTTPException(422, detail={"error": "no examples"})
    cls = session.query_class
    if cls == "path1":
        queries = [learn_anch_path1(positives)]
    elif cls == "twig1":
        queries = [learn_psf_twig1(positives)]
    elif cls == "path0":
        queries = [learn_anch_path0(positives, negatives=negatives)]
    elif cls == "conj0":
        queries = list(learn_conj_path0(positives).members)
    else:
        queries = [learn_psf_twig0(positives)]

    def selects(ex) -> bool:
        return all(embeds(q, ex) for q in queries)

    consistent = all(not selects(n) for n in negatives)
    verdict = {
        "positives": len(positives),
        "negatives": len(negatives),
        "consistent": consistent,
    }
    if not consistent:
        found = _bounded_consistency(session, positives, negatives)
        if found is None:
            raise HTTPException(
                422,
                detail={"error": "inconsistent within bounds", **verdict},
            )
        queries = [found]
        verdict["consistent"] = True
        verdict["via"] = "bounded-search"
    return {
        "class": cls,
        "query": queries[0].canonical if len(queries) == 1 else None,
        "queries": [q.canonical for q in queries],
        "size": sum(q.size for q in queries),
        **verdict,
    }


def _bounded_consistency(session: Session, positives, negatives):
    unary = session.query_class in UNARY_CLASSES
    labels = sorted(
        {
            lab
            for ex in positives
            for lab in (ex.tree.labels if unary else ex.labels)
        }
    )
    smallest = min(ex.size for ex in positives)
    spec = EnumSpec(
        labels=tuple(labels),
        max_nodes=min(smallest, CONSISTENCY_MAX_NODES),
        query_class="twig-unary" if unary else "twig-boolean",
        query_cap=50_000,
    )
    sample = SignedSample.of(
        [(ex, POSITIVE) for ex in positives] + [(ex, NEGATIVE) for ex in negatives]
    )
    try:
        return check_consistency(sample, spec)
    except CapExceededError:
        return None


def create_app(
    learn_timeout: float = 30.0, static_dir: Optional[str] = None
) -> FastAPI:
    app = FastAPI(title="twiglearn annotation service")
    if static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=static_dir, html=True), name="ui")
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()
    executor = ThreadPoolExecutor(max_workers=4)

    def get_session(sid: str) -> Session:
        with registry_lock:
            session = sessions.get(sid)
        if session is None:
            raise HTTPException(404, detail={"error": "unknown session"})
        return session

    def get_doc(session: Session, doc_id: str) -> Tree:
        tree = session.documents.get(doc_id)
        if tree is None:
            raise HTTPException(404, detail={"error": "unknown document"})
        return tree

    @app.post("/sessions")
    def create_session(body: SessionCreate):
        if body.query_class not in UNARY_CLASSES + BOOLEAN_CLASSES:
            raise HTTPException(422, detail={"error": "unknown query class"})
        sid = uuid.uuid4().hex
        with registry_lock:
            sessions[sid] = Session(
                id=sid, query_class=body.query_class, virtual_root=body.virtual_root
            )
        return {"id": sid, "class": body.query_class}

    @app.delete("/sessions/{sid}")
    def delete_session(sid: str):
        with registry_lock:
            if sid not in sessions:
                raise HTTPException(404, detail={"error": "unknown session"})
            del sessions[sid]
        return {"deleted": sid}

    @app.post("/sessions/{sid}/docs")
    def upload(sid: str, body: DocumentUpload):
        session = get_session(sid)
        try:
            tree = parse_xml_tree(
                body.xml,
                DEFAULT_VIRTUAL_ROOT_LABEL if session.virtual_root else None,
            )
        except (XmlFormatError, TwiglearnError) as exc:
            raise HTTPException(422, detail={"error": str(exc)})
        with session.lock:
            session.doc_counter += 1
            doc_id = f"d{session.doc_counter}"
            session.documents[doc_id] = tree
        return {"doc_id": doc_id, "tree": _tree_json(tree)}

    @app.put("/sessions/{sid}/docs/{doc_id}/nodes/{node}/annotation")
    def annotate(sid: str, doc_id: str, node: int, body: Annotation):
        session = get_session(sid)
        with session.lock:
            tree = get_doc(session, doc_id)
            if not 0 <= node < tree.size:
                raise HTTPException(404, detail={"error": "unknown node"})
            if body.sign not in (POSITIVE, NEGATIVE):
                raise HTTPException(422, detail={"error": "sign must be + or -"})
            unary = session.query_class in UNARY_CLASSES
            if unary and node == 0:
                raise HTTPException(
                    409,
                    detail={"error": "cannot annotate the root without a virtual root"},
                )
            session.annotations[(doc_id, node)] = body.sign
            session.last_result = None
        return {"doc": doc_id, "node": node, "sign": body.sign}

    @app.delete("/sessions/{sid}/docs/{doc_id}/nodes/{node}/annotation")
    def clear_annotation(sid: str, doc_id: str, node: int):
        session = get_session(sid)
        with session.lock:
            get_doc(session, doc_id)
            removed = session.annotations.pop((doc_id, node), None)
            session.last_result = None
        return {"doc": doc_id, "node": node, "removed": removed is not None}

    @app.get("/sessions/{sid}/query")
    def get_query(sid: str, query_class: Optional[str] = None):
        session = get_session(sid)
        with session.lock:
            if query_class and query_class != session.query_class:
                if query_class not in UNARY_CLASSES + BOOLEAN_CLASSES:
                    raise HTTPException(422, detail={"error": "unknown query class"})
                session.query_class = query_class
                session.last_result = None
            if session.last_result is not None:
                return session.last_result
            future = executor.submit(_learn, session)
            try:
                result = future.result(timeout=learn_timeout)
            except FutureTimeout:
                raise HTTPException(
                    503, detail={"error": "learning exceeded the time budget"}
                )
            session.last_result = result
            return result

    @app.get("/sessions/{sid}/docs/{doc_id}/highlight")
    def highlight(sid: str, doc_id: str, query_class: Optional[str] = None):
        session = get_session(sid)
        with session.lock:
            tree = get_doc(session, doc_id)
            result = get_query(sid, query_class)
            unary = session.query_class in UNARY_CLASSES
            if unary:
                q = parse_query(result["queries"][0], unary=True)
                nodes = set(answers(q, tree))
                return {"doc": doc_id, "nodes": sorted(nodes), "matches": bool(nodes)}
            qs = [parse_query(text) for text in result["queries"]]
            matches = all(embeds(q, tree) for q in qs)
            return {"doc": doc_id, "nodes": [], "matches": matches}

    @app.get("/health")
    def health():
        return {"ok": True}

    return app
