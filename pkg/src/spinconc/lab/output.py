"""CSV / JSONL emission with a replayable metadata header."""
from __future__ import annotations

import hashlib
import json
import math
import sys
from contextlib import contextmanager

import numpy as np

from .. import __version__
from .._kernels import BACKEND
from ..dicke import RNG_NAME
from ..tolerances import LADDER


def config_hash(config):
    blob = json.dumps(config, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def metadata(command, config, seed=None):
    return {
        "program": "spinconc",
        "version": __version__,
        "command": command,
        "config_hash": config_hash(config),
        "config": config,
        "seed": seed,
        "rng": RNG_NAME,
        "kernels": BACKEND,
        "tolerances": LADDER,
    }


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "nan" if math.isnan(v) else f"{float(v):.17g}"
    return str(v).replace(",", ";").replace("\n", " ")


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return None if math.isnan(v) else v
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


class RowWriter:
    """Streams rows in a fixed column order after a metadata header.

    CSV files start with ``#``-prefixed metadata lines followed by one header
    row; JSONL files start with a ``{"meta": ...}`` record.
    """

    def __init__(self, stream, fmt, fields, meta):
        if fmt not in ("csv", "jsonl"):
            raise ValueError(f"unknown format {fmt!r}")
        self.stream, self.fmt, self.fields = stream, fmt, list(fields)
        if fmt == "csv":
            for key, value in meta.items():
                text = json.dumps(value, sort_keys=True) if isinstance(value, dict) else value
                stream.write(f"# {key}: {text}\n")
            stream.write(",".join(self.fields) + "\n")
        else:
            stream.write(json.dumps({"meta": meta}, sort_keys=True, default=str) + "\n")

    def write(self, row):
        if self.fmt == "csv":
            self.stream.write(",".join(_fmt(row.get(f)) for f in self.fields) + "\n")
        else:
            rec = {f: _jsonable(row.get(f)) for f in self.fields}
            self.stream.write(json.dumps(rec) + "\n")


@contextmanager
def open_output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def read_rows(path):
    """Parse a file written by :class:`RowWriter` back into ``(meta, rows)``."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    if lines and lines[0].startswith("{"):
        meta = json.loads(lines[0])["meta"]
        return meta, [json.loads(line) for line in lines[1:]]
    meta = {}
    body = []
    for line in lines:
        if line.startswith("# "):
            key, _, value = line[2:].partition(": ")
            meta[key] = value
        else:
            body.append(line)
    header = body[0].split(",")
    return meta, [dict(zip(header, line.split(","))) for line in body[1:]]
