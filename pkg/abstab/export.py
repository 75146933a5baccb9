"""JSON and CSV writers for command output. Same input, same bytes."""

import csv
import io
import json
import logging
import os
from fractions import Fraction

import numpy as np

from .errors import InputError

log = logging.getLogger(__name__)


def _default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f'{type(obj).__name__} is not JSON serialisable')


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_default) + '\n'


def fmt(x) -> str:
    """12 significant digits, locale independent."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format(float(x), '.12g')


def csv_text(header: list, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator='\n')
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _write(path, text):
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    tmp = path + '.tmp'
    with open(tmp, 'w', encoding='utf-8', newline='') as f:
        f.write(text)
    os.replace(tmp, path)
    log.info('wrote %s', path)
    return path


def write_json(path: str, obj) -> str:
    return _write(path, dumps(obj))


def write_csv(path: str, header: list, rows) -> str:
    return _write(path, csv_text(header, rows))


def read_json(path: str):
    try:
        with open(path, encoding='utf-8') as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f'cannot read {path}: {e}') from e


# ── Row builders ────────────────────────────────────────


def vertex_rows(poly):
    return [tuple(v) for v in poly.vertices]


def vertex_header(dim):
    return [f'l{i}' for i in range(1, dim + 1)]


LORENZ_HEADER = ['k', 'S(k)', 'label']
HISTOGRAM_HEADER = ['bin_lo', 'bin_hi', 'count']
TERNARY_HEADER = ['l1', 'l2', 'l3', 'x', 'y']
