"""Text formats for codes, matrices and implicit switched codes.

Code file::

    # perfect-forge code v1
    q=<q> p=<p> k=<k> n=<n> count=<N>
    <n space-separated element indices per line, sorted>

Matrix files use ``rows=<r> cols=<c>`` in place of ``n=``/``count=``.  The
implicit description is section-tagged (``[parity-check]``, ``[member s]``
with ``[basis]`` and ``[shift]`` blocks).  Writers are atomic: they write a
temporary file in the target directory and rename it.
"""

from __future__ import annotations

import os
import re
import tempfile
from pathlib import Path
from typing import Iterable

import numpy as np

from .fqla import ExplicitCode, FqMatrix, FqVector, rank_of
from .gf import FieldSpec, field_make, perm_make

CODE_MAGIC = "# perfect-forge code v1"
MATRIX_MAGIC = "# perfect-forge matrix v1"
IMPLICIT_MAGIC = "# perfect-forge implicit v1"


class FormatError(ValueError):
    """Malformed or inconsistent input file."""


def atomic_write(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _rows_text(rows: np.ndarray) -> list[str]:
    return [" ".join(map(str, r)) for r in np.asarray(rows).tolist()]


def _field_header(f: FieldSpec) -> str:
    return f"q={f.q} p={f.p} k={f.k}"


def _parse_header(line: str) -> dict[str, int]:
    fields = {}
    for tok in line.split():
        m = re.fullmatch(r"([a-z]+)=(-?\d+)", tok)
        if not m:
            raise FormatError(f"bad header token {tok!r}")
        fields[m.group(1)] = int(m.group(2))
    return fields


def _field_from(h: dict[str, int]) -> FieldSpec:
    for key in ("q", "p", "k"):
        if key not in h:
            raise FormatError(f"header lacks {key}=")
    f = field_make(h["p"], h["k"])
    if f.q != h["q"]:
        raise FormatError(f"q={h['q']} does not equal p^k = {f.q}")
    return f


def _parse_rows(lines: Iterable[str], width: int, q: int) -> np.ndarray:
    rows = []
    for line in lines:
        parts = line.split()
        if len(parts) != width:
            raise FormatError(f"expected {width} symbols, got {len(parts)}: {line!r}")
        rows.append([int(t) for t in parts])
    arr = np.array(rows, dtype=np.int64).reshape(-1, width)
    if arr.size and (arr.min() < 0 or arr.max() >= q):
        raise FormatError(f"symbol outside 0..{q - 1}")
    return arr.astype(np.uint8)


def _content_lines(text: str) -> list[str]:
    return [ln.strip() for ln in text.splitlines() if ln.strip()]


def code_text(code: ExplicitCode) -> str:
    lines = [CODE_MAGIC, f"{_field_header(code.field)} n={code.n} count={len(code)}"]
    lines += _rows_text(code.words)
    return "\n".join(lines) + "\n"


def parse_code(text: str) -> ExplicitCode:
    lines = _content_lines(text)
    if not lines or lines[0] != CODE_MAGIC:
        raise FormatError(f"missing '{CODE_MAGIC}' line")
    if len(lines) < 2:
        raise FormatError("missing header line")
    h = _parse_header(lines[1])
    f = _field_from(h)
    if "n" not in h or "count" not in h:
        raise FormatError("header lacks n= or count=")
    body = [ln for ln in lines[2:] if not ln.startswith("#")]
    words = _parse_rows(body, h["n"], f.q)
    code = ExplicitCode(f, h["n"], words)
    if len(body) != h["count"]:
        raise FormatError(f"header says count={h['count']}, file has {len(body)} words")
    if len(code) != h["count"]:
        raise FormatError("file contains duplicate words")
    return code


def write_code(path, code: ExplicitCode) -> None:
    atomic_write(path, code_text(code))


def read_code(path) -> ExplicitCode:
    return parse_code(Path(path).read_text(encoding="utf-8"))


def matrix_text(m: FqMatrix, magic: bool = True) -> str:
    lines = [MATRIX_MAGIC] if magic else []
    lines.append(f"{_field_header(m.field)} rows={m.rows} cols={m.cols}")
    lines += _rows_text(m.entries)
    return "\n".join(lines) + "\n"


def _matrix_from_lines(lines: list[str]) -> tuple[FqMatrix, int]:
    h = _parse_header(lines[0])
    f = _field_from(h)
    if "rows" not in h or "cols" not in h:
        raise FormatError("matrix header lacks rows= or cols=")
    r, c = h["rows"], h["cols"]
    if len(lines) < 1 + r:
        raise FormatError(f"matrix declares {r} rows, only {len(lines) - 1} present")
    entries = _parse_rows(lines[1:1 + r], c, f.q).reshape(r, c)
    return FqMatrix(f, entries), 1 + r


def parse_matrix(text: str) -> FqMatrix:
    lines = _content_lines(text)
    if not lines or lines[0] != MATRIX_MAGIC:
        raise FormatError(f"missing '{MATRIX_MAGIC}' line")
    m, used = _matrix_from_lines(lines[1:])
    if used != len(lines) - 1:
        raise FormatError("trailing lines after matrix")
    return m


def write_matrix(path, m: FqMatrix) -> None:
    atomic_write(path, matrix_text(m))


def read_matrix(path) -> FqMatrix:
    return parse_matrix(Path(path).read_text(encoding="utf-8"))


# -- implicit switched codes --------------------------------------------------


def implicit_text(code) -> str:
    f = code.field
    lines = [IMPLICIT_MAGIC, f"{_field_header(f)} n={code.n} m={code.m} members={len(code.family)}"]
    lines.append("[parity-check]")
    lines.append(matrix_text(code.base.H, magic=False).rstrip("\n"))
    for s, member in enumerate(code.family, start=1):
        lines.append(f"[member {s}]")
        lines.append(f"i={member.i} sigma={member.sigma}")
        lines.append("[basis]")
        lines.append(matrix_text(member.component.basis, magic=False).rstrip("\n"))
        lines.append("[shift]")
        lines.append(str(member.shift))
    return "\n".join(lines) + "\n"


def parse_implicit(text: str):
    from .constructions import ConstructionError, switch_implicit
    from .hamming import GeometryError, hamming_from_parity_check

    lines = _content_lines(text)
    if not lines or lines[0] != IMPLICIT_MAGIC:
        raise FormatError(f"missing '{IMPLICIT_MAGIC}' line")
    h = _parse_header(lines[1])
    f = _field_from(h)
    pos = 2

    def expect(tag: str) -> None:
        nonlocal pos
        if pos >= len(lines) or lines[pos] != tag:
            raise FormatError(f"expected {tag} at content line {pos + 1}")
        pos += 1

    expect("[parity-check]")
    H, used = _matrix_from_lines(lines[pos:])
    pos += used
    try:
        base = hamming_from_parity_check(H)
    except GeometryError as exc:
        raise FormatError(f"parity-check matrix is not a Hamming matrix: {exc}") from exc
    if base.n != h.get("n") or base.m != h.get("m"):
        raise FormatError("header n/m disagree with the parity-check matrix")
    members = []
    stored = []
    for s in range(1, h.get("members", 0) + 1):
        expect(f"[member {s}]")
        meta = lines[pos].split()
        pos += 1
        kv = dict(tok.split("=", 1) for tok in meta)
        try:
            i = int(kv["i"])
            sigma = perm_make([int(t) for t in kv["sigma"].split(",")], f.q)
        except (KeyError, ValueError) as exc:
            raise FormatError(f"bad member line {meta}: {exc}") from exc
        expect("[basis]")
        basis, used = _matrix_from_lines(lines[pos:])
        pos += used
        expect("[shift]")
        shift = FqVector(f, _parse_rows([lines[pos]], base.n, f.q)[0])
        pos += 1
        members.append((i, shift, sigma))
        stored.append(basis.entries)
    if pos != len(lines):
        raise FormatError("trailing content after the last member")
    try:
        code = switch_implicit(base, members)
    except ConstructionError as exc:
        raise FormatError(str(exc)) from exc
    for member, rows in zip(code.family, stored):
        own = member.component.basis.entries
        if rows.shape != own.shape or rank_of(f, np.vstack([own, rows])) != own.shape[0]:
            raise FormatError(f"stored basis for coordinate {member.i} does not span R_{member.i}")
    return code


def write_implicit(path, code) -> None:
    atomic_write(path, implicit_text(code))


def read_implicit(path):
    return parse_implicit(Path(path).read_text(encoding="utf-8"))
