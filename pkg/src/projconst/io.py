"""Text formats: frame files, Seidel matrix files, flat config files, JSON reports.

Frame file::

    # comments start with '#'
    frame <real|complex> <m> <N>
    <m entries of column 1>
    ...
    <m entries of column N>

Complex entries are written ``a+bi`` / ``a-bi``; all numbers use 17
significant digits so a write/read round trip is exact.

Seidel file: a ``seidel <N>`` header, then ``N`` rows of ``N`` entries
from ``{0, 1, -1}``.

Config file: ``key = value`` lines, keys as in :class:`OptConfig`.
"""

import dataclasses
import json
import math

import numpy as np

from .etf import check_seidel
from .exceptions import FormatError, NotTwoGraphError
from .linalg import COMPLEX, FIELDS
from .search import OptConfig


def _content_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def format_scalar(z):
    if isinstance(z, (complex, np.complexfloating)):
        return f"{z.real:.17g}{z.imag:+.17g}i"
    return f"{float(z):.17g}"


def parse_scalar(token, field, lineno=None):
    try:
        if field == COMPLEX:
            return complex(token.replace("i", "j"))
        return float(token)
    except ValueError:
        raise FormatError(f"cannot parse {field} number {token!r}", lineno) from None


def dumps_frame(U):
    U = np.asarray(U)
    field = "complex" if np.iscomplexobj(U) else "real"
    m, N = U.shape
    rows = [f"frame {field} {m} {N}"]
    for j in range(N):
        rows.append(" ".join(format_scalar(z) for z in U[:, j]))
    return "\n".join(rows) + "\n"


def loads_frame(text):
    lines = list(_content_lines(text))
    if not lines:
        raise FormatError("empty frame file")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 4 or parts[0] != "frame" or parts[1] not in FIELDS:
        raise FormatError("header must be 'frame <real|complex> <m> <N>'", lineno)
    try:
        m, N = int(parts[2]), int(parts[3])
    except ValueError:
        raise FormatError("m and N must be integers", lineno) from None
    if m < 1 or N < 1:
        raise FormatError("m and N must be positive", lineno)
    field = parts[1]
    body = lines[1:]
    if len(body) != N:
        where = body[N][0] if len(body) > N else None
        raise FormatError(f"expected {N} column lines, found {len(body)}", where)
    U = np.zeros((m, N), dtype=np.complex128 if field == COMPLEX else np.float64)
    for j, (lineno, line) in enumerate(body):
        tokens = line.split()
        if len(tokens) != m:
            raise FormatError(f"expected {m} entries, found {len(tokens)}", lineno)
        U[:, j] = [parse_scalar(tok, field, lineno) for tok in tokens]
    if not np.all(np.isfinite(U)):
        raise FormatError("frame contains non-finite entries")
    return U


def write_frame(path, U):
    with open(path, "w") as fh:
        fh.write(dumps_frame(U))


def read_frame(path):
    with open(path) as fh:
        return loads_frame(fh.read())


def dumps_seidel(S):
    S = np.asarray(S)
    rows = [f"seidel {S.shape[0]}"]
    rows += [" ".join(str(int(x)) for x in row) for row in S]
    return "\n".join(rows) + "\n"


def loads_seidel(text):
    lines = list(_content_lines(text))
    if not lines:
        raise FormatError("empty Seidel file")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "seidel" or not parts[1].isdigit():
        raise FormatError("header must be 'seidel <N>'", lineno)
    N = int(parts[1])
    if len(lines) - 1 != N:
        raise FormatError(f"expected {N} rows, found {len(lines) - 1}")
    S = np.zeros((N, N))
    for i, (lineno, line) in enumerate(lines[1:]):
        tokens = line.split()
        if len(tokens) != N or any(tok not in ("0", "1", "-1") for tok in tokens):
            raise FormatError(f"row must have {N} entries from {{0, 1, -1}}", lineno)
        S[i] = [int(tok) for tok in tokens]
    try:
        return check_seidel(S)
    except NotTwoGraphError as exc:
        raise FormatError(str(exc)) from None


def write_seidel(path, S):
    with open(path, "w") as fh:
        fh.write(dumps_seidel(S))


def read_seidel(path):
    with open(path) as fh:
        return loads_seidel(fh.read())


def loads_config(text, cls=OptConfig):
    types = {f.name: type(f.default) for f in dataclasses.fields(cls)}
    values = {}
    for lineno, line in _content_lines(text):
        if "=" not in line:
            raise FormatError("expected 'key = value'", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in types:
            raise FormatError(f"unknown key {key!r}", lineno)
        try:
            values[key] = types[key](float(value)) if types[key] is int else types[key](value)
        except ValueError:
            raise FormatError(f"bad value for {key}: {value!r}", lineno) from None
    return cls(**values)


def dumps_config(config):
    return "".join(f"{k} = {v!r}\n" for k, v in dataclasses.asdict(config).items())


def read_config(path, cls=OptConfig):
    with open(path) as fh:
        return loads_config(fh.read(), cls)


def _jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        obj = obj.to_dict() if hasattr(obj, "to_dict") else dataclasses.asdict(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return {"re": obj.real.tolist(), "im": obj.imag.tolist()}
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def dumps_json(obj, indent=2):
    return json.dumps(_jsonable(obj), indent=indent)
