"""Offline-first client: local store plus queue-and-forward sync over HTTP.

Records created while offline land in the local store and a durable FIFO
queue; sync pushes the queue in order (acknowledged entries leave it, so a
retry after a lost response is safe because the server is idempotent on
UUIDs), then pulls any standard dataset whose digest differs from the local
catalog's. Dataset bodies travel at most once per distinct digest value.
"""

from __future__ import annotations

import json
import logging
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import httpx

from .errors import MedgraphError
from .records import Patient, RecordStore, Visit, patient_to_json, visit_to_json
from .standards import Catalog, Indicator, Sex, XUnit, digest, parse_standard_table

logger = logging.getLogger(__name__)

DIGEST_HEADER = "X-Dataset-Digest"


class NetworkUnreachable(MedgraphError):
    def __init__(self, message: str, report: "SyncReport"):
        self.report = report
        super().__init__(message)


class SyncInProgress(MedgraphError):
    pass


@dataclass(frozen=True)
class SyncReport:
    pushed: int
    pulled: tuple[str, ...]
    unchanged: int


class SyncClient:
    """One clinic device: local records + catalog + pending upload queue."""

    def __init__(
        self,
        data_dir: Path | str,
        server_url: str = "",
        http_client: httpx.Client | None = None,
    ):
        self.data_dir = Path(data_dir)
        self.catalog = Catalog(self.data_dir / "standards")
        self.store = RecordStore(self.data_dir)
        self._http = http_client or httpx.Client(base_url=server_url, timeout=10.0)
        self._state_path = self.data_dir / "sync_state.json"
        self._rejects_path = self.data_dir / "sync_rejected.jsonl"
        self._lock = threading.Lock()
        self._queue: list[dict] = []
        self.known_digests: dict[str, str] = {}
        self.last_sync: str | None = None
        self._load_state()

    # -- local capture -----------------------------------------------------

    def record_patient(self, patient: Patient) -> Patient:
        stored = self.store.create_patient(patient)
        self._queue.append({"kind": "patient", "doc": patient_to_json(stored)})
        self._save_state()
        return stored

    def record_visit(self, visit: Visit) -> Visit:
        stored = self.store.add_visit(visit)
        self._queue.append({"kind": "visit", "doc": visit_to_json(stored)})
        self._save_state()
        return stored

    def pending_visits(self) -> list[dict]:
        return [e["doc"] for e in self._queue if e["kind"] == "visit"]

    def pending_patients(self) -> list[dict]:
        return [e["doc"] for e in self._queue if e["kind"] == "patient"]

    # -- sync --------------------------------------------------------------

    def sync(self) -> SyncReport:
        """Push the queue in order, then pull changed standards.

        Raises NetworkUnreachable on transport failure or a server-side
        outage; the exception carries the partial report and the state
        already saved, so re-running continues where this run stopped.
        """
        if not self._lock.acquire(blocking=False):
            raise SyncInProgress("a sync is already running")
        try:
            pushed: list[int] = [0]
            pulled: list[str] = []
            unchanged: list[int] = [0]
            try:
                self._push(pushed)
                self._pull(pulled, unchanged)
            except httpx.TransportError as e:
                report = SyncReport(pushed=pushed[0], pulled=tuple(pulled), unchanged=unchanged[0])
                raise NetworkUnreachable(f"server unreachable: {e}", report) from e
            self.last_sync = datetime.now(timezone.utc).isoformat()
            self._save_state()
            return SyncReport(pushed=pushed[0], pulled=tuple(pulled), unchanged=unchanged[0])
        finally:
            self._lock.release()

    def _push(self, pushed: list[int]):
        while self._queue:
            entry = self._queue[0]
            doc = entry["doc"]
            if entry["kind"] == "patient":
                resp = self._http.post("/api/patients", json=doc)
            else:
                resp = self._http.post(f"/api/patients/{doc['patient_id']}/visits", json=doc)
            if resp.status_code >= 500:
                report = SyncReport(pushed=pushed[0], pulled=(), unchanged=0)
                raise NetworkUnreachable(f"server error {resp.status_code}", report)
            if 400 <= resp.status_code < 500:
                # permanently rejected: keep it locally, park it for review
                logger.warning("server rejected %s %s: %s", entry["kind"], doc.get("id"), resp.text)
                self._park_reject(entry, resp)
            else:
                pushed[0] += 1
            self._queue.pop(0)
            self._save_state()

    def _pull(self, pulled: list[str], unchanged: list[int]):
        self._refresh_known_digests()
        resp = self._http.get("/api/standards")
        resp.raise_for_status()
        for entry in resp.json():
            ds_id = entry["id"]
            known = self.known_digests.get(ds_id)
            if known == entry["digest"]:
                unchanged[0] += 1
                continue
            headers = {DIGEST_HEADER: known} if known else {}
            body = self._http.get(f"/api/standards/{ds_id}", headers=headers)
            if body.status_code == 304:
                unchanged[0] += 1
                continue
            body.raise_for_status()
            ds = parse_standard_table(
                body.text,
                id=ds_id,
                indicator=Indicator(entry["indicator"]),
                sex=Sex(entry["sex"]),
                x_unit=XUnit(entry["x_unit"]),
                x_label=entry.get("x_label", ""),
                y_label=entry.get("y_label", ""),
            )
            self.catalog.put(ds)
            self.known_digests[ds_id] = digest(ds).hex
            pulled.append(ds_id)
            self._save_state()

    def _refresh_known_digests(self):
        # the local catalog is the source of truth for what we already hold
        fresh = {}
        for ds_id, d in self.catalog.list():
            fresh[ds_id] = d.hex
        self.known_digests = fresh

    # -- state persistence ---------------------------------------------------

    def _load_state(self):
        if not self._state_path.exists():
            return
        doc = json.loads(self._state_path.read_text(encoding="utf-8"))
        self._queue = doc.get("pending", [])
        self.known_digests = doc.get("known_digests", {})
        self.last_sync = doc.get("last_sync")

    def _save_state(self):
        doc = {
            "pending": self._queue,
            "known_digests": self.known_digests,
            "last_sync": self.last_sync,
        }
        self._state_path.write_text(json.dumps(doc, indent=2), encoding="utf-8")

    def _park_reject(self, entry: dict, resp: httpx.Response):
        line = json.dumps({"entry": entry, "status": resp.status_code, "body": resp.text})
        with self._rejects_path.open("a", encoding="utf-8") as fh:
            fh.write(line + "\n")
