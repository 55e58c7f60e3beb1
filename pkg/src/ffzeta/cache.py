"""Persistent JSON cache for expensive intermediates (power sums and
Anderson-Thakur polynomials).

Entries are keyed by kind and integer key tuple, carry the artifact
version (a mismatch invalidates), and are written with atomic renames so
concurrent readers never see a torn file.  Payloads stay JSON because they
are small at desk scale and a human-inspectable cache makes debugging
exact arithmetic much easier.
"""

from __future__ import annotations

import json
import logging
import os
import tempfile

from . import __version__
from .scalar import BiPoly, Field, Poly, RatFunc

log = logging.getLogger("ffzeta.cache")

_ACTIVE = None


def set_active(cache):
    """Install the process-wide cache consulted by the evaluators."""
    global _ACTIVE
    _ACTIVE = cache


def get_active():
    return _ACTIVE


def ratfunc_to_json(r: RatFunc) -> dict:
    return {"num": [int(c) for c in r.num.coeffs], "den": [int(c) for c in r.den.coeffs]}


def ratfunc_from_json(fld: Field, data: dict) -> RatFunc:
    return RatFunc(Poly(fld, data["num"]), Poly(fld, data["den"]))


def bipoly_to_json(b: BiPoly) -> dict:
    return {"rows": [[int(c) for c in row] for row in b.coeffs]}


def bipoly_from_json(fld: Field, data: dict) -> BiPoly:
    rows = data["rows"]
    if not rows:
        return BiPoly.zero(fld)
    width = max(len(r) for r in rows)
    grid = [list(r) + [0] * (width - len(r)) for r in rows]
    return BiPoly(fld, grid)


class JsonCache:
    """Content-addressed JSON files under a directory."""

    def __init__(self, directory):
        self.directory = str(directory)
        os.makedirs(self.directory, exist_ok=True)

    def _path(self, kind: str, key) -> str:
        tag = "_".join(str(int(k)) for k in key)
        return os.path.join(self.directory, f"{kind}__{tag}.json")

    def get(self, kind: str, key):
        path = self._path(kind, key)
        try:
            with open(path, "r", encoding="utf-8") as fh:
                entry = json.load(fh)
        except FileNotFoundError:
            return None
        except (json.JSONDecodeError, OSError) as exc:
            log.warning("ignoring corrupted cache file %s (%s); recomputing", path, exc)
            return None
        if entry.get("version") != __version__ or entry.get("kind") != kind:
            return None
        return entry.get("payload")

    def put(self, kind: str, key, payload) -> None:
        path = self._path(kind, key)
        entry = {
            "kind": kind,
            "key": [int(k) for k in key],
            "version": __version__,
            "payload": payload,
        }
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(entry, fh, sort_keys=True)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
