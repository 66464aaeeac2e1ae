"""OFF reading and VTK legacy ASCII writing/reading.

Only the subset needed by the toolkit is supported: ASCII OFF triangle
meshes on input, VTK legacy 3.0 `DATASET UNSTRUCTURED_GRID` with scalar
POINT_DATA on output (cell types 3, 5 and 10).  Floats are written with
17 significant digits so a write/read round trip is bit-exact.
"""

from __future__ import annotations

import os
from typing import Mapping

import numpy as np

from .mesh import Mesh, MeshKind

_VTK_CELL_TYPE = {1: 3, 2: 5, 3: 10}
_KIND_FROM_DIM = {1: MeshKind.PLANAR, 2: MeshKind.PLANAR,
                  3: MeshKind.VOLUMETRIC}


class MeshIOError(ValueError):
    """Malformed mesh file or inconsistent field data."""


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def read_off(path: str | os.PathLike) -> Mesh:
    """Read an ASCII OFF triangle mesh; comment lines start with '#'."""
    tokens: list[tuple[int, str]] = []  # (line number, token)
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            body = line.split("#", 1)[0].strip()
            if body:
                tokens.extend((lineno, tok) for tok in body.split())
    pos = 0

    def take(n: int, what: str) -> list[tuple[int, str]]:
        nonlocal pos
        if pos + n > len(tokens):
            last = tokens[-1][0] if tokens else 1
            raise MeshIOError(f"{path}: unexpected end of file while "
                              f"reading {what} (after line {last})")
        out = tokens[pos:pos + n]
        pos += n
        return out

    first = take(1, "header")[0]
    if first[1].upper() == "OFF":
        counts = take(3, "counts")
    else:
        counts = [first] + take(2, "counts")
    try:
        nv, nf = int(counts[0][1]), int(counts[1][1])
    except ValueError:
        raise MeshIOError(f"{path}:{counts[0][0]}: bad vertex/face counts")
    verts = np.empty((nv, 3))
    for i in range(nv):
        toks = take(3, f"vertex {i}")
        try:
            verts[i] = [float(t) for _, t in toks]
        except ValueError:
            raise MeshIOError(f"{path}:{toks[0][0]}: bad vertex coordinate")
    cells = np.empty((nf, 3), dtype=np.intp)
    for i in range(nf):
        head = take(1, f"face {i}")[0]
        try:
            n = int(head[1])
        except ValueError:
            raise MeshIOError(f"{path}:{head[0]}: bad face vertex count")
        if n != 3:
            raise MeshIOError(f"{path}:{head[0]}: only triangle faces are "
                              f"supported, got {n}-gon")
        toks = take(3, f"face {i}")
        try:
            cells[i] = [int(t) for _, t in toks]
        except ValueError:
            raise MeshIOError(f"{path}:{toks[0][0]}: bad face index")
    return Mesh(verts, cells, MeshKind.SURFACE)


def write_vtk(mesh: Mesh, fields: Mapping[str, np.ndarray],
              path: str | os.PathLike, comment: str = "modeiso mesh") -> None:
    """Write a VTK legacy 3.0 ASCII unstructured grid with point scalars.

    Field lengths are validated before the file is opened, so a bad call
    leaves no partial file behind.
    """
    arrays: dict[str, np.ndarray] = {}
    for name, values in fields.items():
        arr = np.asarray(values, dtype=float)
        if arr.shape != (mesh.n_vertices,):
            raise MeshIOError(
                f"field '{name}' has length {arr.shape}, expected "
                f"({mesh.n_vertices},)")
        arrays[name] = arr

    points = np.zeros((mesh.n_vertices, 3))
    points[:, : mesh.embedding_dim] = mesh.vertices
    cell_type = _VTK_CELL_TYPE[mesh.intrinsic_dim]
    npc = mesh.intrinsic_dim + 1

    lines = ["# vtk DataFile Version 3.0",
             comment.splitlines()[0][:255] if comment else "modeiso mesh",
             "ASCII",
             "DATASET UNSTRUCTURED_GRID",
             f"POINTS {mesh.n_vertices} double"]
    for p in points:
        lines.append(" ".join(_fmt(c) for c in p))
    lines.append(f"CELLS {mesh.n_cells} {mesh.n_cells * (npc + 1)}")
    for cell in mesh.cells:
        lines.append(f"{npc} " + " ".join(str(int(i)) for i in cell))
    lines.append(f"CELL_TYPES {mesh.n_cells}")
    lines.extend([str(cell_type)] * mesh.n_cells)
    if arrays:
        lines.append(f"POINT_DATA {mesh.n_vertices}")
        for name, arr in arrays.items():
            lines.append(f"SCALARS {name} double 1")
            lines.append("LOOKUP_TABLE default")
            lines.extend(_fmt(v) for v in arr)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_vtk(path: str | os.PathLike) -> tuple[Mesh, dict[str, np.ndarray]]:
    """Read back the VTK subset produced by write_vtk."""
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh]

    def expect(idx: int, prefix: str) -> str:
        if idx >= len(lines) or not lines[idx].startswith(prefix):
            got = lines[idx] if idx < len(lines) else "<eof>"
            raise MeshIOError(f"{path}:{idx + 1}: expected '{prefix}', "
                              f"got '{got}'")
        return lines[idx]

    expect(0, "# vtk DataFile")
    expect(2, "ASCII")
    expect(3, "DATASET UNSTRUCTURED_GRID")
    header = expect(4, "POINTS").split()
    nv = int(header[1])
    points = np.array([[float(t) for t in lines[5 + i].split()]
                       for i in range(nv)])
    idx = 5 + nv
    header = expect(idx, "CELLS").split()
    nc = int(header[1])
    raw = [lines[idx + 1 + i].split() for i in range(nc)]
    npc = int(raw[0][0])
    cells = np.array([[int(t) for t in row[1:]] for row in raw],
                     dtype=np.intp)
    idx += 1 + nc
    expect(idx, "CELL_TYPES")
    cell_type = int(lines[idx + 1])
    idx += 1 + nc
    fields: dict[str, np.ndarray] = {}
    if idx < len(lines) and lines[idx].startswith("POINT_DATA"):
        idx += 1
        while idx < len(lines) and lines[idx].startswith("SCALARS"):
            name = lines[idx].split()[1]
            expect(idx + 1, "LOOKUP_TABLE")
            vals = np.array([float(lines[idx + 2 + i]) for i in range(nv)])
            fields[name] = vals
            idx += 2 + nv

    if cell_type == 10:
        kind = MeshKind.VOLUMETRIC
    elif cell_type == 5:
        kind = MeshKind.SURFACE if npc == 3 and not np.allclose(
            points[:, 2], 0.0) else MeshKind.PLANAR
    else:
        kind = MeshKind.PLANAR
    embed = {3: 1, 5: 2, 10: 3}[cell_type]
    if kind is MeshKind.SURFACE:
        embed = 3
    mesh = Mesh(points[:, :embed], cells, kind)
    return mesh, fields
