"""Maass-form data: fixture files, the local cache and the LMFDB client.

Fixture and cache files hold one JSON document per line. Floats are written
with Python's shortest round-trip repr, and the spectral parameter is kept as
the original decimal string, so ``serialize(parse(line)) == line`` holds
byte for byte.

Environment variables:

``MIXMOMENTS_LMFDB_URL``
    API base URL (default ``https://www.lmfdb.org/api``).
``MIXMOMENTS_CACHE_DIR``
    cache directory (default ``~/.cache/mixmoments``).
``MIXMOMENTS_FIXTURE``
    fixture file used by the command line (default: the shipped file).
"""

from __future__ import annotations

import json
import os
import re
import tempfile
import threading
import urllib.parse
import urllib.request
import warnings
from dataclasses import dataclass
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .errors import FixtureParseError, NetworkError, SchemaDriftError, ValidationError
from .forms import MaassFormRecord

SCHEMA_VERSION = 1
DEFAULT_BASE_URL = "https://www.lmfdb.org/api"
DEFAULT_FIXTURE = Path(str(resources.files("mixmoments") / "data" / "maass_fixtures.jsonl"))
FIELD_MAP_PATH = Path(str(resources.files("mixmoments") / "data" / "lmfdb_fieldmap.json"))
LABEL_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9.\-_]{0,63}$")

_KEYS = ("schema_version", "label", "spectral_parameter", "parity", "source",
         "provenance", "sym2_L_value", "coefficients")


class RamanujanWarning(UserWarning):
    pass


def base_url():
    return os.environ.get("MIXMOMENTS_LMFDB_URL", DEFAULT_BASE_URL).rstrip("/")


def cache_dir():
    default = Path.home() / ".cache" / "mixmoments"
    return Path(os.environ.get("MIXMOMENTS_CACHE_DIR", default))


def fixture_path():
    return Path(os.environ.get("MIXMOMENTS_FIXTURE", DEFAULT_FIXTURE))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def record_to_dict(rec):
    text = rec.spectral_parameter_text or repr(float(rec.spectral_parameter))
    return {
        "schema_version": SCHEMA_VERSION,
        "label": rec.label,
        "spectral_parameter": text,
        "parity": rec.parity,
        "source": rec.source,
        "provenance": rec.provenance,
        "sym2_L_value": rec.sym2_L_value,
        "coefficients": [float(c) for c in rec.coefficients],
    }


def serialize_record(rec):
    return json.dumps(record_to_dict(rec), separators=(",", ":"), allow_nan=False)


def record_from_dict(doc, where=None):
    where = where or {}
    if not isinstance(doc, dict):
        raise FixtureParseError("record is not a JSON object", **where)
    missing = [k for k in _KEYS if k not in doc]
    if missing:
        raise FixtureParseError("missing field", field=missing[0], **where)
    if doc["schema_version"] != SCHEMA_VERSION:
        raise FixtureParseError(f"unsupported schema_version {doc['schema_version']!r}",
                                field="schema_version", **where)
    text = doc["spectral_parameter"]
    try:
        t = float(text)
    except (TypeError, ValueError):
        raise FixtureParseError("spectral_parameter is not a decimal string",
                                field="spectral_parameter", **where) from None
    coeffs = doc["coefficients"]
    if not isinstance(coeffs, list) or not all(isinstance(c, (int, float)) for c in coeffs):
        raise FixtureParseError("coefficients must be a list of numbers", field="coefficients", **where)
    try:
        rec = MaassFormRecord(
            label=doc["label"],
            spectral_parameter=t,
            spectral_parameter_text=text,
            coefficients=np.array(coeffs, dtype=float),
            sym2_L_value=doc["sym2_L_value"],
            source=doc["source"],
            parity=doc["parity"],
            provenance=doc["provenance"],
        )
    except ValidationError as exc:
        raise FixtureParseError(str(exc), **where) from None
    if rec.ramanujan_flag:
        warnings.warn(f"{rec.label}: some |lambda(n)| exceeds 1.2 d(n)", RamanujanWarning, stacklevel=3)
    return rec


def parse_fixture_bytes(data):
    records = []
    offset = 0
    for lineno, raw in enumerate(data.splitlines(keepends=True), start=1):
        line = raw.rstrip(b"\r\n")
        if line.strip():
            try:
                doc = json.loads(line.decode("utf-8"))
            except UnicodeDecodeError as exc:
                raise FixtureParseError("invalid UTF-8", offset=offset + exc.start, line=lineno) from None
            except json.JSONDecodeError as exc:
                pos = len(line.decode("utf-8")[: exc.pos].encode("utf-8"))
                raise FixtureParseError(f"malformed JSON: {exc.msg}", offset=offset + pos,
                                        line=lineno) from None
            records.append(record_from_dict(doc, {"offset": offset, "line": lineno}))
        offset += len(raw)
    return records


def load_fixture(path=None):
    """Load and validate every record of a fixture file."""
    path = Path(path) if path is not None else fixture_path()
    return parse_fixture_bytes(path.read_bytes())


def serialize_records(records):
    return "".join(serialize_record(r) + "\n" for r in records).encode("utf-8")


def _atomic_write(path, data):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_fixture(path, records):
    _atomic_write(path, serialize_records(records))


def find_record(label, path=None):
    for rec in load_fixture(path):
        if rec.label == label:
            return rec
    raise KeyError(f"no record labelled {label!r}")


# ---------------------------------------------------------------------------
# cache
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CacheEntry:
    label: str
    fetched_at: str
    payload: MaassFormRecord
    schema_version: int = SCHEMA_VERSION


class MaassCache:
    """Label-keyed JSON-lines cache with atomic replacement on every write."""

    _lock = threading.Lock()

    def __init__(self, directory=None):
        self.directory = Path(directory) if directory is not None else cache_dir()
        self.path = self.directory / "maass_cache.jsonl"

    def entries(self):
        if not self.path.exists():
            return {}
        out = {}
        for lineno, line in enumerate(self.path.read_text("utf-8").splitlines(), start=1):
            if not line.strip():
                continue
            doc = json.loads(line)
            if doc.get("schema_version") != SCHEMA_VERSION:
                continue
            rec = record_from_dict(doc["payload"], {"line": lineno})
            out[doc["label"]] = CacheEntry(doc["label"], doc["fetched_at"], rec)
        return out

    def get(self, label):
        return self.entries().get(label)

    def put(self, records):
        with self._lock:
            current = self.entries()
            now = datetime.now(timezone.utc).isoformat(timespec="seconds")
            for rec in records:
                current[rec.label] = CacheEntry(rec.label, now, rec)
            lines = []
            for label in sorted(current):
                e = current[label]
                lines.append(json.dumps({
                    "schema_version": SCHEMA_VERSION,
                    "label": label,
                    "fetched_at": e.fetched_at,
                    "payload": record_to_dict(e.payload),
                }, separators=(",", ":")) + "\n")
            _atomic_write(self.path, "".join(lines).encode("utf-8"))


# ---------------------------------------------------------------------------
# LMFDB client
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MaassQuery:
    """Either a label or a spectral-parameter window (level 1 only)."""

    label: Optional[str] = None
    t_min: float = 0.0
    t_max: float = float("inf")
    parity: str = "even"

    def key(self):
        if self.label:
            return f"label:{self.label}"
        return f"range:{self.t_min}:{self.t_max}:{self.parity}"


def load_field_map(path=None):
    return json.loads(Path(path or FIELD_MAP_PATH).read_text("utf-8"))


def _default_opener(url, timeout=30):
    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            return resp.read()
    except OSError as exc:
        raise NetworkError(f"GET {url} failed: {exc}") from exc


def _get(doc, dotted):
    cur = doc
    for part in dotted.split("."):
        if not isinstance(cur, dict) or part not in cur:
            return None
        cur = cur[part]
    return cur


def map_payload(doc, field_map):
    """Translate one remote document through the first matching layout."""
    for layout in field_map["layouts"]:
        f = layout["fields"]
        if all(_get(doc, f[k]) is not None for k in ("label", "spectral_parameter", "coefficients")):
            parity_raw = _get(doc, f["parity"]) if "parity" in f else None
            parity = layout.get("parity_values", {}).get(str(parity_raw), "even" if parity_raw is None else None)
            coeffs = np.asarray(_get(doc, f["coefficients"]), dtype=float)
            if layout.get("coefficients_start", 1) == 0:
                coeffs = coeffs[1:]
            if coeffs.size and layout.get("normalization") == "scale_by_first" and coeffs[0] != 0:
                coeffs = coeffs / coeffs[0]
            text = str(_get(doc, f["spectral_parameter"]))
            return {
                "schema_version": SCHEMA_VERSION,
                "label": str(_get(doc, f["label"])),
                "spectral_parameter": text,
                "parity": parity or "unknown",
                "source": "lmfdb",
                "provenance": layout["name"],
                "sym2_L_value": None,
                "coefficients": coeffs.tolist(),
            }
    raise SchemaDriftError("remote document matches no declared layout", raw=doc)


class LMFDBClient:
    """Minimal LMFDB API client with a write-through cache.

    ``opener(url) -> bytes`` is injectable so tests can instrument or replace
    the network.
    """

    def __init__(self, base=None, cache=None, opener: Optional[Callable] = None, field_map=None):
        self.base = (base or base_url()).rstrip("/")
        self.cache = cache if cache is not None else MaassCache()
        self.opener = opener or _default_opener
        self.field_map = field_map or load_field_map()
        self.calls = 0

    def _url(self, query, limit):
        fm = self.field_map
        params = {"_format": "json", "_limit": str(limit)}
        params.update(fm.get("fixed_params", {}))
        f = fm["layouts"][0]["fields"]
        if query.label:
            params[f["label"]] = query.label
        else:
            hi = "" if query.t_max == float("inf") else repr(query.t_max)
            params[f["spectral_parameter"]] = f"{query.t_min!r}-{hi}"
        return f"{self.base}/{fm['collection']}/?{urllib.parse.urlencode(params)}"

    def fetch(self, query, limit=10):
        if isinstance(query, str):
            query = MaassQuery(label=query)
        elif isinstance(query, tuple):
            query = MaassQuery(t_min=query[0], t_max=query[1])
        if query.label is not None and not LABEL_RE.match(query.label):
            raise ValidationError(f"malformed label {query.label!r}")
        if query.label is not None:
            hit = self.cache.get(query.label)
            if hit is not None:
                return [hit.payload]
        else:
            hits = [e.payload for e in self.cache.entries().values()
                    if query.t_min <= e.payload.spectral_parameter <= query.t_max
                    and e.payload.parity == query.parity]
            if len(hits) >= limit:
                return sorted(hits, key=lambda r: r.spectral_parameter)[:limit]
        url = self._url(query, limit)
        self.calls += 1
        raw = self.opener(url)
        try:
            body = json.loads(raw)
        except (ValueError, TypeError) as exc:
            raise SchemaDriftError(f"response is not JSON: {exc}", raw=raw) from None
        docs = body.get("data") if isinstance(body, dict) else body
        if not isinstance(docs, list):
            raise SchemaDriftError("response has no 'data' list", raw=body)
        records = []
        for doc in docs:
            mapped = map_payload(doc, self.field_map)
            if mapped["parity"] != query.parity and query.label is None:
                continue
            records.append(record_from_dict(mapped))
        records.sort(key=lambda r: r.spectral_parameter)
        records = records[:limit]
        if records:
            self.cache.put(records)
        return records


def fetch_maass_form(query, limit=10, client=None):
    """Fetch validated records from LMFDB, serving repeats from the cache."""
    return (client or LMFDBClient()).fetch(query, limit)
