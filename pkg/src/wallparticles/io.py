"""CSV and JSON writers (header row, comma separated, LF line endings)."""

from __future__ import annotations

import csv
import json
import sys
from contextlib import contextmanager


def fmt(v) -> str:
    if isinstance(v, (int,)) and not isinstance(v, bool):
        return str(v)
    return repr(float(v))


@contextmanager
def open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            yield fh


def write_csv(path, header, rows):
    """Write ``rows`` (iterables of ints/floats) below ``header``; returns the row count."""
    n = 0
    with open_out(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(v) for v in r])
            n += 1
    return n


def particle_rows(traj):
    """``rep,t,i,x`` for ``t >= 1``; ``traj`` has shape ``(reps, steps + 1, k)``."""
    reps, T, k = traj.shape
    for rep in range(reps):
        for t in range(1, T):
            for i in range(k):
                yield rep, t, i + 1, traj[rep, t, i]


def indexed_rows(values, start_index=1):
    """``rep,n,j,value`` rows from an array of shape ``(reps, steps + 1, m)``; skips n = 0."""
    reps, T, m = values.shape
    for rep in range(reps):
        for t in range(1, T):
            for j in range(m):
                yield rep, t, j + start_index, values[rep, t, j]


def pattern_rows(rows_batch):
    """``rep,row,idx,value`` from a list of per-row arrays (row 2 first)."""
    n = rows_batch[0].shape[0]
    for rep in range(n):
        for r, arr in enumerate(rows_batch):
            for j in range(arr.shape[1]):
                yield rep, r + 2, j + 1, arr[rep, j]


def write_json(path, obj):
    with open_out(path) as fh:
        json.dump(obj, fh, indent=2, sort_keys=False, ensure_ascii=False)
        fh.write("\n")
