"""ASCII OFF and OBJ reading and writing."""
from __future__ import annotations

import os
import tempfile
from pathlib import Path

import numpy as np

from ..errors import ParseError
from .core import TriangleMesh, build_mesh

FORMATS = ("off", "obj")


def _format_for(path, fmt):
    if fmt is None:
        fmt = Path(path).suffix.lstrip(".")
    fmt = fmt.lower()
    if fmt not in FORMATS:
        raise ValueError(f"unsupported mesh format {fmt!r}; expected OFF or OBJ")
    return fmt


def _tokens(text):
    """Yield (line_no, [(column, token), ...]) for non-blank, non-comment lines."""
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        toks = []
        col = 0
        for tok in line.split():
            col = line.index(tok, col)
            toks.append((col + 1, tok))
            col += len(tok)
        if toks:
            yield line_no, toks


def _num(tok, kind, path, line_no):
    col, text = tok
    try:
        return kind(text)
    except ValueError:
        raise ParseError(f"expected {kind.__name__}, got {text!r}", path, line_no, col) from None


def parse_off(text: str, path=None):
    lines = _tokens(text)
    try:
        line_no, toks = next(lines)
    except StopIteration:
        raise ParseError("empty file", path) from None
    if toks[0][1] != "OFF":
        raise ParseError(f"expected header 'OFF', got {toks[0][1]!r}", path, line_no, toks[0][0])
    toks = toks[1:]
    if not toks:
        try:
            line_no, toks = next(lines)
        except StopIteration:
            raise ParseError("missing 'V F E' counts line", path) from None
    if len(toks) != 3:
        raise ParseError(f"counts line must hold 'V F E', got {len(toks)} fields", path, line_no, toks[0][0])
    n_v, n_f, _ = (_num(t, int, path, line_no) for t in toks)
    if n_v < 0 or n_f < 0:
        raise ParseError("negative element count", path, line_no, toks[0][0])

    vertices = np.empty((n_v, 3))
    faces = np.empty((n_f, 3), dtype=np.int64)
    last_line = line_no
    for i in range(n_v):
        try:
            line_no, toks = next(lines)
        except StopIteration:
            raise ParseError(f"expected {n_v} vertices, found {i}", path, last_line + 1) from None
        if len(toks) < 3:
            raise ParseError("vertex line needs 3 coordinates", path, line_no, toks[0][0])
        vertices[i] = [_num(t, float, path, line_no) for t in toks[:3]]
        last_line = line_no
    for i in range(n_f):
        try:
            line_no, toks = next(lines)
        except StopIteration:
            raise ParseError(f"header promises {n_f} faces, found {i}", path, last_line + 1) from None
        count = _num(toks[0], int, path, line_no)
        if count != 3 or len(toks) < 4:
            raise ParseError(f"only triangles are supported, got a {count}-gon", path, line_no, toks[0][0])
        idx = [_num(t, int, path, line_no) for t in toks[1:4]]
        for t, k in zip(toks[1:4], idx):
            if not 0 <= k < n_v:
                raise ParseError(f"vertex index {k} out of range [0, {n_v})", path, line_no, t[0])
        faces[i] = idx
        last_line = line_no
    extra = next(lines, None)
    if extra is not None:
        line_no, toks = extra
        raise ParseError(
            f"unexpected data after {n_f} faces; face count in header is wrong", path, line_no, toks[0][0]
        )
    return vertices, faces


def parse_obj(text: str, path=None):
    vertices, faces = [], []
    face_lines = []
    for line_no, toks in _tokens(text):
        tag = toks[0][1]
        if tag == "v":
            if len(toks) < 4:
                raise ParseError("vertex needs 3 coordinates", path, line_no, toks[0][0])
            vertices.append([_num(t, float, path, line_no) for t in toks[1:4]])
        elif tag == "f":
            if len(toks) != 4:
                raise ParseError(f"only triangles are supported, got {len(toks) - 1} indices", path, line_no, toks[0][0])
            idx = []
            for col, text_tok in toks[1:]:
                # "i", "i/t", "i//n", "i/t/n"
                idx.append(_num((col, text_tok.split("/", 1)[0]), int, path, line_no))
            faces.append(idx)
            face_lines.append((line_no, toks))
    n_v = len(vertices)
    out = np.empty((len(faces), 3), dtype=np.int64)
    for i, (idx, (line_no, toks)) in enumerate(zip(faces, face_lines)):
        for j, k in enumerate(idx):
            if k < 0:
                k = n_v + k  # relative index
            else:
                k -= 1
            if not 0 <= k < n_v:
                raise ParseError(f"vertex index {idx[j]} out of range", path, line_no, toks[j + 1][0])
            out[i, j] = k
    return np.array(vertices, dtype=float).reshape(-1, 3), out


def load_mesh(path, format: str | None = None) -> TriangleMesh:
    """Read and validate a mesh. ``format`` defaults to the file suffix."""
    fmt = _format_for(path, format)
    text = Path(path).read_text()
    parse = parse_off if fmt == "off" else parse_obj
    vertices, faces = parse(text, path=str(path))
    return build_mesh(vertices, faces)


def format_mesh(mesh: TriangleMesh, format: str) -> str:
    v, f = mesh.vertices, mesh.faces
    if format == "off":
        lines = ["OFF", f"{len(v)} {len(f)} {len(mesh.edges)}"]
        lines += [f"{x:.17g} {y:.17g} {z:.17g}" for x, y, z in v.tolist()]
        lines += [f"3 {a} {b} {c}" for a, b, c in f.tolist()]
    else:
        lines = [f"v {x:.17g} {y:.17g} {z:.17g}" for x, y, z in v.tolist()]
        lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in f.tolist()]
    return "\n".join(lines) + "\n"


def atomic_write_text(path, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def save_mesh(mesh: TriangleMesh, path, format: str | None = None) -> None:
    """Write ``mesh`` as ASCII OFF or OBJ; floats carry 17 significant digits."""
    atomic_write_text(path, format_mesh(mesh, _format_for(path, format)))
