"""HTTP/JSON document service.

The boundary between the engine and any UI: an in-memory store of versioned
documents with optimistic concurrency. Every mutation names the version it
was computed against; a stale version is rejected with 409 and leaves the
document untouched, so accepted versions per document form a gap-free
sequence. Mutations on one document are serialized by a per-document lock;
reads serve immutable snapshots and never bump the version.

Persistence is client-driven: POST a saved .adt body to create a document,
GET the export endpoint to take one home. A documents directory can be
preloaded at startup (file stem becomes the document id).
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from fastapi import FastAPI, Query, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import ioexport
from .document import (
    AdtDocument,
    apply_edit,
    attach_domain,
    evaluate_instance,
    new_document,
    set_valuation_value,
)
from .domains import DEFAULT_REGISTRY, DomainRegistry, encode_value
from .errors import (
    AdtError,
    DomainCheckError,
    DoubleCounterError,
    DuplicateDomainIdError,
    EmptyDocumentError,
    EmptyLabelError,
    FormatError,
    IncompleteValuationError,
    IntegrityError,
    PlayerTypeError,
    StructureError,
    TermParseError,
    UnknownActionError,
    UnknownDocumentError,
    UnknownDomainError,
    UnknownInstanceError,
    UnknownNodeError,
    ValueOutOfDomainError,
    VersionConflictError,
)
from .layout import LayoutConfig, layout
from .model import Player
from .terms import tree_to_term
from .termtext import parse_term, print_term
from .treediff import reconcile

DEFAULT_LISTEN = "127.0.0.1:8345"


@dataclass
class _Entry:
    version: int
    doc: AdtDocument
    lock: threading.Lock = field(default_factory=threading.Lock)


class DocumentStore:
    """Versioned in-memory documents with per-document serialization."""

    def __init__(self, registry: Optional[DomainRegistry] = None):
        self.registry = registry or DEFAULT_REGISTRY
        self._lock = threading.Lock()
        self._entries: dict[str, _Entry] = {}
        self._serial = 0

    def create(self, doc: Optional[AdtDocument] = None, doc_id: Optional[str] = None) -> tuple[str, int]:
        doc = doc or new_document()
        with self._lock:
            if doc_id is None:
                while True:
                    self._serial += 1
                    doc_id = f"d{self._serial}"
                    if doc_id not in self._entries:
                        break
            self._entries[doc_id] = _Entry(version=1, doc=doc)
        return doc_id, 1

    def ids(self) -> list[str]:
        with self._lock:
            return sorted(self._entries)

    def _entry(self, doc_id: str) -> _Entry:
        with self._lock:
            try:
                return self._entries[doc_id]
            except KeyError:
                raise UnknownDocumentError(doc_id) from None

    def snapshot(self, doc_id: str) -> tuple[int, AdtDocument]:
        entry = self._entry(doc_id)
        with entry.lock:
            return entry.version, entry.doc

    def mutate(
        self,
        doc_id: str,
        base_version: Optional[int],
        change: Callable[[AdtDocument], tuple[AdtDocument, object]],
    ) -> tuple[int, object]:
        """Apply atomically; the old snapshot is never modified in place."""
        entry = self._entry(doc_id)
        with entry.lock:
            if base_version is not None and base_version != entry.version:
                raise VersionConflictError(entry.version, base_version)
            new_doc, payload = change(entry.doc)
            entry.doc = new_doc
            entry.version += 1
            return entry.version, payload


class EditRequest(BaseModel):
    baseVersion: int
    op: str
    args: dict = {}


class TermUpdate(BaseModel):
    baseVersion: int
    text: str


class DomainAttach(BaseModel):
    domainId: str
    params: dict = {}
    baseVersion: Optional[int] = None


class ValuationUpdate(BaseModel):
    baseVersion: int
    player: str
    label: str
    value: object = None


_STATUS: list[tuple[type, int]] = [
    (VersionConflictError, 409),
    (UnknownDocumentError, 404),
    (UnknownNodeError, 404),
    (UnknownInstanceError, 404),
    (UnknownActionError, 404),
    (UnknownDomainError, 404),
    (TermParseError, 422),
    (PlayerTypeError, 422),
    (StructureError, 422),
    (FormatError, 422),
    (IntegrityError, 422),
    (ValueOutOfDomainError, 422),
    (IncompleteValuationError, 422),
    (DoubleCounterError, 422),
    (EmptyDocumentError, 422),
    (EmptyLabelError, 422),
    (DuplicateDomainIdError, 422),
    (DomainCheckError, 422),
]


def _error_response(exc: AdtError) -> JSONResponse:
    status = next((code for cls, code in _STATUS if isinstance(exc, cls)), 500)
    body: dict = {"error": type(exc).__name__, "message": str(exc)}
    span = getattr(exc, "span", None)
    if span is not None:
        body["span"] = {
            "startLine": span.start_line,
            "startCol": span.start_col,
            "endLine": span.end_line,
            "endCol": span.end_col,
        }
    if isinstance(exc, TermParseError):
        body["expected"] = exc.expected
        body["found"] = exc.found
    if isinstance(exc, VersionConflictError):
        body["currentVersion"] = exc.expected
    return JSONResponse(status_code=status, content=body)


def preload_documents(store: DocumentStore, directory: str) -> list[str]:
    """Load every *.adt file in the directory; returns loaded document ids."""
    loaded = []
    for path in sorted(Path(directory).glob("*.adt")):
        doc = ioexport.load(path.read_bytes(), store.registry)
        store.create(doc, doc_id=path.stem)
        loaded.append(path.stem)
    return loaded


def create_app(
    registry: Optional[DomainRegistry] = None,
    store: Optional[DocumentStore] = None,
    docs_dir: Optional[str] = None,
    ui_dir: Optional[str] = None,
) -> FastAPI:
    registry = registry or DEFAULT_REGISTRY
    store = store or DocumentStore(registry)
    if docs_dir:
        preload_documents(store, docs_dir)

    app = FastAPI(title="adtrees document service")
    app.state.store = store
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    @app.exception_handler(AdtError)
    async def handle_adt_error(_request: Request, exc: AdtError):
        return _error_response(exc)

    @app.exception_handler(ValueError)
    async def handle_value_error(_request: Request, exc: ValueError):
        return JSONResponse(status_code=422, content={"error": "ValueError", "message": str(exc)})

    @app.exception_handler(KeyError)
    async def handle_key_error(_request: Request, exc: KeyError):
        return JSONResponse(
            status_code=422,
            content={"error": "MissingArgument", "message": f"missing {exc.args[0]!r}"},
        )

    @app.post("/documents")
    async def create_document(request: Request):
        body = await request.body()
        doc = ioexport.load(body, registry) if body.strip() else None
        doc_id, version = store.create(doc)
        return {"docId": doc_id, "version": version}

    @app.get("/documents")
    def list_documents():
        return {"documents": store.ids()}

    @app.get("/documents/{doc_id}")
    def get_document(doc_id: str):
        version, doc = store.snapshot(doc_id)
        return {
            "docId": doc_id,
            "version": version,
            "document": json.loads(ioexport.save(doc).decode("utf-8")),
        }

    @app.post("/documents/{doc_id}/edits")
    def post_edit(doc_id: str, body: EditRequest):
        def change(doc):
            new_doc, record = apply_edit(doc, registry, body.op, body.args)
            return new_doc, record

        version, record = store.mutate(doc_id, body.baseVersion, change)
        return {"version": version, "changedNodeIds": list(record.changed_ids)}

    @app.get("/documents/{doc_id}/term")
    def get_term(doc_id: str):
        version, doc = store.snapshot(doc_id)
        return {"text": print_term(tree_to_term(doc.root)), "version": version}

    @app.put("/documents/{doc_id}/term")
    def put_term(doc_id: str, body: TermUpdate):
        term = parse_term(body.text)  # parse outside the lock; 422 leaves the doc alone

        def change(doc):
            new_doc, summary = reconcile(doc, term, registry)
            return new_doc, summary

        version, summary = store.mutate(doc_id, body.baseVersion, change)
        return {
            "version": version,
            "mapping": {
                "matched": summary.matched,
                "inserted": summary.inserted,
                "deleted": summary.deleted,
            },
        }

    @app.get("/domains")
    def list_domains():
        return {"domains": [domain.describe() for domain in registry.all()]}

    @app.post("/documents/{doc_id}/domains")
    def attach(doc_id: str, body: DomainAttach):
        def change(doc):
            return attach_domain(doc, registry, body.domainId, body.params)

        version, instance_id = store.mutate(doc_id, body.baseVersion, change)
        return {"instanceId": instance_id, "version": version}

    @app.put("/documents/{doc_id}/valuations/{instance_id}")
    def put_valuation(doc_id: str, instance_id: str, body: ValuationUpdate):
        player = Player(body.player)
        value = body.value
        if value == "inf":
            value = float("inf")

        def change(doc):
            return set_valuation_value(doc, registry, instance_id, player, body.label, value), None

        version, _ = store.mutate(doc_id, body.baseVersion, change)
        return {"version": version}

    @app.get("/documents/{doc_id}/evaluation/{instance_id}")
    def get_evaluation(doc_id: str, instance_id: str):
        version, doc = store.snapshot(doc_id)
        result = evaluate_instance(doc, registry, instance_id)
        inst = doc.instance(instance_id)
        provenance = {
            f"{player.value}:{label}": prov.value
            for (player, label), prov in inst.valuation.provenance.items()
        }
        return {
            "version": version,
            "perNode": {node_id: encode_value(v) for node_id, v in result.per_node.items()},
            "rootValue": encode_value(result.root_value),
            "rootDisplay": encode_value(result.root_display),
            "dependenceWarning": result.dependence_warning,
            "values": {
                f"{player.value}:{label}": encode_value(v)
                for (player, label), v in inst.valuation.entries.items()
            },
            "provenance": provenance,
        }

    @app.get("/documents/{doc_id}/layout")
    def get_layout(doc_id: str, fold: bool = Query(default=True)):
        _version, doc = store.snapshot(doc_id)
        result = layout(doc.root, LayoutConfig(), respect_fold=fold)
        return {
            "positions": {node_id: [x, y] for node_id, (x, y) in result.positions.items()},
            "bounds": list(result.bounds),
        }

    @app.get("/documents/{doc_id}/export")
    def get_export(
        doc_id: str,
        format: str = Query(default="adt"),
        instanceId: Optional[str] = Query(default=None),
        fold: bool = Query(default=False),
    ):
        _version, doc = store.snapshot(doc_id)
        if format == "adt":
            return Response(content=ioexport.save(doc), media_type="application/json")
        overlay = evaluate_instance(doc, registry, instanceId) if instanceId else None
        result = layout(doc.root, LayoutConfig(), respect_fold=fold)
        if format == "svg":
            data = ioexport.export_svg(doc.root, result, LayoutConfig(), overlay)
            return Response(content=data, media_type="image/svg+xml")
        if format == "tikz":
            data = ioexport.export_tikz(doc.root, result, LayoutConfig(), overlay)
            return Response(content=data, media_type="application/x-tex")
        raise ValueError(f"unknown export format {format!r}")

    return app


def run_server(
    listen: str = DEFAULT_LISTEN,
    docs_dir: Optional[str] = None,
    registry: Optional[DomainRegistry] = None,
    ui_dir: Optional[str] = None,
) -> None:
    import uvicorn

    host, _, port = listen.rpartition(":")
    app = create_app(registry=registry, docs_dir=docs_dir, ui_dir=ui_dir)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port), log_level="warning")
