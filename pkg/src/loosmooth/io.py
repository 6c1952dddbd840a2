"""Adjacency file formats and atomic report writers.

Two adjacency layouts are accepted, detected from the first line:

* edge list: a header ``# n=<count>`` followed by one ``i j`` pair per line
  (0-based, whitespace or comma separated, each pair is an undirected edge);
* dense CSV: ``n`` rows of ``n`` comma-separated 0/1 values.
"""

from __future__ import annotations

import csv
import io as _io
import json
import os
import re
import tempfile
from pathlib import Path

import numpy as np

_HEADER = re.compile(r"#\s*n\s*=\s*(\d+)\s*$")


class InputDataError(ValueError):
    """The adjacency input is malformed or violates the graph model."""


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path, payload) -> None:
    atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=False) + "\n")


def write_csv(path, header, rows) -> None:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    atomic_write_text(path, buf.getvalue())


def write_interval_reports(path, reports) -> None:
    from .inference import INTERVAL_COLUMNS

    write_csv(path, INTERVAL_COLUMNS,
              ([r.i, r.j, repr(r.estimate), r.method, repr(r.lower), repr(r.upper),
                repr(r.halfwidth), r.alpha] for r in reports))


def _split(line):
    return [tok for tok in re.split(r"[,\s]+", line.strip()) if tok]


def _parse_int(tok, lineno):
    try:
        return int(tok)
    except ValueError:
        raise InputDataError(f"line {lineno}: expected an integer node index, got {tok!r}") from None


def _read_edgelist(lines, n, symmetrize=False):
    A = np.zeros((n, n), dtype=np.int8)
    for lineno, line in lines:
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        toks = _split(s)
        if len(toks) != 2:
            raise InputDataError(f"line {lineno}: expected 'i j', got {s!r}")
        i, j = (_parse_int(t, lineno) for t in toks)
        for v in (i, j):
            if not 0 <= v < n:
                raise InputDataError(f"line {lineno}: node {v} out of range for n={n}")
        if i == j:
            if symmetrize:
                continue
            raise InputDataError(f"self-loop at node {i}")
        A[i, j] = A[j, i] = 1
    return A


def _read_dense(lines, symmetrize):
    rows = []
    for lineno, line in lines:
        if not line.strip():
            continue
        vals = []
        for col, tok in enumerate(_split(line)):
            if tok not in ("0", "1"):
                raise InputDataError(f"non-binary value {tok!r} at ({len(rows)}, {col})")
            vals.append(int(tok))
        rows.append(vals)
    n = len(rows)
    if n == 0:
        raise InputDataError("empty adjacency file")
    for r, vals in enumerate(rows):
        if len(vals) != n:
            raise InputDataError(f"row {r} has {len(vals)} entries, expected {n}")
    A = np.array(rows, dtype=np.int8)
    if symmetrize:
        A = (A | A.T).astype(np.int8)
        np.fill_diagonal(A, 0)
        return A
    diag = np.flatnonzero(np.diag(A))
    if diag.size:
        raise InputDataError(f"self-loop at node {diag[0]}")
    bad = np.argwhere(A != A.T)
    if bad.size:
        i, j = bad[0]
        raise InputDataError(f"asymmetric entry at ({i}, {j}): A[{i},{j}]={A[i, j]} but A[{j},{i}]={A[j, i]}")
    return A


def read_adjacency(path, symmetrize: bool = False) -> np.ndarray:
    """Load an adjacency matrix as int8, validating symmetry, binarity and the diagonal."""
    path = Path(path)
    if not path.exists():
        raise InputDataError(f"no such file: {path}")
    lines = list(enumerate(path.read_text(encoding="utf-8").splitlines(), start=1))
    first = next(((k, l) for k, l in lines if l.strip()), None)
    if first is None:
        raise InputDataError(f"{path} is empty")
    m = _HEADER.match(first[1].strip())
    if m:
        return _read_edgelist(lines, int(m.group(1)), symmetrize)
    if first[1].lstrip().startswith("#"):
        raise InputDataError(f"line {first[0]}: edge lists must start with '# n=<count>'")
    return _read_dense(lines, symmetrize)


def write_adjacency(path, A, fmt: str = "edgelist") -> None:
    A = np.asarray(A)
    n = A.shape[0]
    if fmt == "edgelist":
        iu, ju = np.nonzero(np.triu(A, k=1))
        text = f"# n={n}\n" + "".join(f"{i} {j}\n" for i, j in zip(iu, ju))
    elif fmt == "dense":
        text = "".join(",".join(str(int(v)) for v in row) + "\n" for row in A)
    else:
        raise ValueError(f"unknown adjacency format {fmt!r}")
    atomic_write_text(path, text)
