"""On-disk dataset format.

A dataset is a directory holding ``manifest.txt`` plus one header-free CSV
per view (row = sample) and an optional labels file (one integer per line)::

    # comments and blank lines are ignored
    name = toy
    k = 2
    m = 2
    view.0 = view0.csv
    view.1 = view1.csv
    labels = labels.txt

Paths in the manifest are relative to the manifest's directory.  Floats are
written with ``repr`` so a write/read round trip is bit-exact.
"""

import os
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .errors import InvalidInput, ParseError
from .kernels import ViewData

MANIFEST = "manifest.txt"


@dataclass(eq=False)
class Dataset:
    name: str
    views: List[ViewData]
    truth: Optional[np.ndarray]
    k: int

    def __post_init__(self):
        if not self.views:
            raise InvalidInput("dataset has no views")
        n = self.views[0].n
        for v in self.views:
            if v.n != n:
                raise InvalidInput(f"view {v.view_id} has {v.n} samples, expected {n}")
        if self.truth is not None:
            self.truth = np.asarray(self.truth, dtype=np.int64)
            if self.truth.shape != (n,):
                raise InvalidInput(f"labels have length {self.truth.size}, expected {n}")
        if not 2 <= self.k <= n:
            raise InvalidInput(f"k={self.k} out of range for n={n}")

    @property
    def n(self):
        return self.views[0].n

    @property
    def m(self):
        return len(self.views)


def _read_manifest(path):
    entries = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParseError("expected 'key = value'", path, lineno)
            key, value = (s.strip() for s in line.split("=", 1))
            if not key or not value:
                raise ParseError("empty key or value", path, lineno)
            if key in entries:
                raise ParseError(f"duplicate key {key!r}", path, lineno)
            entries[key] = (value, lineno)
    return entries


def read_matrix(path):
    rows = []
    width = None
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot open matrix file: {exc.strerror}", path) from exc
    with fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                row = [float(tok) for tok in line.split(",")]
            except ValueError:
                raise ParseError("non-numeric entry", path, lineno) from None
            if not all(np.isfinite(row)):
                raise ParseError("non-finite entry", path, lineno)
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise ParseError(f"expected {width} columns, got {len(row)}", path, lineno)
            rows.append(row)
    if not rows:
        raise ParseError("matrix file is empty", path)
    return np.array(rows, dtype=np.float64)


def read_labels(path):
    out = []
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot open labels file: {exc.strerror}", path) from exc
    with fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                val = int(line)
            except ValueError:
                raise ParseError("label is not an integer", path, lineno) from None
            if val < 0:
                raise ParseError("label is negative", path, lineno)
            out.append(val)
    return np.array(out, dtype=np.int64)


def _int_field(entries, key, manifest):
    if key not in entries:
        raise ParseError(f"missing required key {key!r}", manifest)
    value, lineno = entries[key]
    try:
        return int(value)
    except ValueError:
        raise ParseError(f"{key} must be an integer", manifest, lineno) from None


def ingest(path):
    """Load a dataset from a directory (or a manifest file path)."""
    path = os.fspath(path)
    manifest = os.path.join(path, MANIFEST) if os.path.isdir(path) else path
    if not os.path.isfile(manifest):
        raise ParseError("manifest not found", manifest)
    base = os.path.dirname(manifest)
    entries = _read_manifest(manifest)
    k = _int_field(entries, "k", manifest)
    m = _int_field(entries, "m", manifest)
    name = entries.get("name", (os.path.basename(os.path.abspath(base)), 0))[0]
    views = []
    for i in range(m):
        key = f"view.{i}"
        if key not in entries:
            raise ParseError(f"missing required key {key!r}", manifest)
        fname = os.path.join(base, entries[key][0])
        if not os.path.isfile(fname):
            raise ParseError(f"view file {entries[key][0]!r} does not exist", manifest, entries[key][1])
        views.append(ViewData(view_id=i, features=read_matrix(fname)))
    extra = sorted(key for key in entries if key.startswith("view.") and key not in {f"view.{i}" for i in range(m)})
    if extra:
        raise ParseError(f"unexpected view keys {extra} for m={m}", manifest, entries[extra[0]][1])
    truth = None
    if "labels" in entries:
        fname = os.path.join(base, entries["labels"][0])
        if not os.path.isfile(fname):
            raise ParseError(f"labels file {entries['labels'][0]!r} does not exist", manifest, entries["labels"][1])
        truth = read_labels(fname)
    return Dataset(name=name, views=views, truth=truth, k=k)


def _write_matrix(path, x):
    with open(path, "w", encoding="utf-8") as fh:
        for row in x.tolist():
            fh.write(",".join(repr(v) for v in row))
            fh.write("\n")


def persist(dataset, directory):
    """Write ``dataset`` in the manifest format; returns the manifest path."""
    os.makedirs(directory, exist_ok=True)
    lines = [f"name = {dataset.name}", f"k = {dataset.k}", f"m = {dataset.m}"]
    for i, view in enumerate(dataset.views):
        fname = f"view{i}.csv"
        _write_matrix(os.path.join(directory, fname), view.features)
        lines.append(f"view.{i} = {fname}")
    if dataset.truth is not None:
        with open(os.path.join(directory, "labels.txt"), "w", encoding="utf-8") as fh:
            fh.writelines(f"{int(v)}\n" for v in dataset.truth)
        lines.append("labels = labels.txt")
    manifest = os.path.join(directory, MANIFEST)
    with open(manifest, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    return manifest
