"""Simplicial mesh generation, deformation and validation.

Meshes are immutable value objects: vertex coordinates plus simplex
connectivity, with an intrinsic dimension (1 for intervals, 2 for planar
domains and embedded surfaces, 3 for volumes).  Embedded surfaces carry
3D coordinates and are required to be oriented manifolds.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

# Cells thinner than this fraction of the mean cell measure are rejected.
DEGENERACY_RTOL = 1e-12
# Two mapped vertices closer than this are considered coincident.
COINCIDENCE_TOL = 1e-12


class MeshError(ValueError):
    """Invalid mesh construction or deformation."""


class MeshKind(enum.Enum):
    PLANAR = "planar"
    VOLUMETRIC = "volumetric"
    SURFACE = "surface"


def simplex_measures(vertices: np.ndarray, cells: np.ndarray) -> np.ndarray:
    """Length/area/volume of each simplex, valid for any embedding dim."""
    coords = vertices[cells]  # (nc, d+1, e)
    edges = coords[:, 1:, :] - coords[:, :1, :]  # (nc, d, e)
    gram = edges @ edges.transpose(0, 2, 1)  # (nc, d, d)
    d = cells.shape[1] - 1
    det = np.linalg.det(gram)
    return np.sqrt(np.maximum(det, 0.0)) / math.factorial(d)


@dataclass(frozen=True)
class Mesh:
    vertices: np.ndarray  # (n_vertices, embedding_dim), float64
    cells: np.ndarray     # (n_cells, intrinsic_dim + 1), int
    kind: MeshKind

    def __post_init__(self) -> None:
        verts = np.ascontiguousarray(np.asarray(self.vertices, dtype=float))
        cells = np.ascontiguousarray(np.asarray(self.cells, dtype=np.intp))
        if verts.ndim != 2:
            raise MeshError("vertices must be a 2D array of coordinates")
        if cells.ndim != 2:
            raise MeshError("cells must be a 2D array of vertex indices")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "cells", cells)
        self._validate()

    @property
    def embedding_dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def intrinsic_dim(self) -> int:
        return self.cells.shape[1] - 1

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def n_cells(self) -> int:
        return self.cells.shape[0]

    def cell_measures(self) -> np.ndarray:
        return simplex_measures(self.vertices, self.cells)

    def measure(self) -> float:
        """Total length/area/volume of the mesh."""
        return float(self.cell_measures().sum())

    def _validate(self) -> None:
        if self.intrinsic_dim not in (1, 2, 3):
            raise MeshError(f"unsupported intrinsic dim {self.intrinsic_dim}")
        if self.embedding_dim not in (1, 2, 3):
            raise MeshError(f"unsupported embedding dim {self.embedding_dim}")
        if self.intrinsic_dim > self.embedding_dim:
            raise MeshError("intrinsic dim exceeds embedding dim")
        if self.cells.size and (self.cells.min() < 0
                                or self.cells.max() >= self.n_vertices):
            raise MeshError("cell index out of range")
        if self.n_cells == 0:
            raise MeshError("mesh has no cells")
        measures = self.cell_measures()
        bad = np.nonzero(measures <= DEGENERACY_RTOL * measures.mean())[0]
        if bad.size:
            raise MeshError(f"degenerate cells: {bad.tolist()[:10]}")
        if self.kind is MeshKind.SURFACE:
            if self.intrinsic_dim != 2 or self.embedding_dim != 3:
                raise MeshError("surface mesh must be triangles in 3D")
            _audit_surface(self.cells)
        if self.kind is MeshKind.VOLUMETRIC and self.intrinsic_dim != 3:
            raise MeshError("volumetric mesh must be tetrahedral")


def _audit_surface(cells: np.ndarray) -> None:
    """Check edge-manifoldness and consistent triangle orientation."""
    directed: set[tuple[int, int]] = set()
    undirected: dict[tuple[int, int], int] = {}
    for tri in cells:
        for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
            key = (int(a), int(b))
            if key in directed:
                raise MeshError(f"edge {key} traversed twice in same direction"
                                " (inconsistent orientation or non-manifold)")
            directed.add(key)
            ukey = (min(key), max(key))
            undirected[ukey] = undirected.get(ukey, 0) + 1
            if undirected[ukey] > 2:
                raise MeshError(f"edge {ukey} shared by > 2 triangles")


def boundary_edges(mesh: Mesh) -> list[tuple[int, int]]:
    """Directed edges of a triangle mesh that belong to exactly one cell."""
    if mesh.intrinsic_dim != 2:
        raise MeshError("boundary_edges requires a triangle mesh")
    count: dict[tuple[int, int], int] = {}
    order: list[tuple[int, int]] = []
    for tri in mesh.cells:
        for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
            key = (min(int(a), int(b)), max(int(a), int(b)))
            if key not in count:
                order.append(key)
            count[key] = count.get(key, 0) + 1
    return [e for e in order if count[e] == 1]


def boundary_loop_count(mesh: Mesh) -> int:
    """Number of connected components of the boundary edge graph."""
    edges = boundary_edges(mesh)
    if not edges:
        return 0
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        parent[find(a)] = find(b)
    return len({find(a) for a, _ in edges})


def euler_characteristic(mesh: Mesh) -> int:
    edges = set()
    for cell in mesh.cells:
        n = len(cell)
        for i in range(n):
            for j in range(i + 1, n):
                a, b = int(cell[i]), int(cell[j])
                edges.add((min(a, b), max(a, b)))
    used = np.unique(mesh.cells)
    if mesh.intrinsic_dim == 2:
        return int(used.size) - len(edges) + mesh.n_cells
    raise MeshError("euler_characteristic implemented for triangle meshes")


# ---------------------------------------------------------------------------
# generators


def generate_interval(length: float, n_cells: int) -> Mesh:
    if length <= 0:
        raise MeshError("interval length must be positive")
    if n_cells < 1:
        raise MeshError("n_cells must be >= 1")
    x = np.linspace(0.0, length, n_cells + 1)
    cells = np.column_stack([np.arange(n_cells), np.arange(1, n_cells + 1)])
    return Mesh(x[:, None], cells, MeshKind.PLANAR)


def generate_rectangle(lx: float, ly: float, nx: int, ny: int) -> Mesh:
    if lx <= 0 or ly <= 0:
        raise MeshError("rectangle sides must be positive")
    if nx < 1 or ny < 1:
        raise MeshError("nx and ny must be >= 1")
    xs = np.linspace(0.0, lx, nx + 1)
    ys = np.linspace(0.0, ly, ny + 1)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    verts = np.column_stack([X.ravel(), Y.ravel()])

    def vid(i: int, j: int) -> int:
        return i * (ny + 1) + j

    cells = []
    for i in range(nx):
        for j in range(ny):
            v00, v10 = vid(i, j), vid(i + 1, j)
            v01, v11 = vid(i, j + 1), vid(i + 1, j + 1)
            cells.append((v00, v10, v11))
            cells.append((v00, v11, v01))
    return Mesh(verts, np.array(cells), MeshKind.PLANAR)


def _quadrisect_triangles(verts: np.ndarray,
                          cells: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split every triangle into four via edge midpoints."""
    verts = [tuple(v) for v in verts]
    coords = np.array(verts)
    midpoint: dict[tuple[int, int], int] = {}

    def mid(a: int, b: int) -> int:
        key = (min(a, b), max(a, b))
        if key not in midpoint:
            verts.append(tuple((coords[a] + coords[b]) / 2.0))
            midpoint[key] = len(verts) - 1
        return midpoint[key]

    new_cells = []
    for t0, t1, t2 in cells:
        a, b, c = mid(t0, t1), mid(t1, t2), mid(t2, t0)
        new_cells.extend([(t0, a, c), (t1, b, a), (t2, c, b), (a, b, c)])
    return np.array(verts), np.array(new_cells)


def _boundary_vertex_ids(cells: np.ndarray) -> np.ndarray:
    count: dict[tuple[int, int], int] = {}
    for tri in cells:
        for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
            key = (min(int(a), int(b)), max(int(a), int(b)))
            count[key] = count.get(key, 0) + 1
    ids = {v for e, c in count.items() if c == 1 for v in e}
    return np.array(sorted(ids), dtype=np.intp)


def generate_disk(radius: float, refinement: int) -> Mesh:
    """Triangulated disk: hexagonal fan, quadrisected with boundary snapping."""
    if radius <= 0:
        raise MeshError("radius must be positive")
    if refinement < 0:
        raise MeshError("refinement must be non-negative")
    angles = np.arange(6) * (math.pi / 3.0)
    verts = np.vstack([[0.0, 0.0],
                       np.column_stack([np.cos(angles), np.sin(angles)])])
    verts *= radius
    cells = np.array([(0, 1 + i, 1 + (i + 1) % 6) for i in range(6)])
    for _ in range(refinement):
        verts, cells = _quadrisect_triangles(verts, cells)
        bnd = _boundary_vertex_ids(cells)
        norms = np.linalg.norm(verts[bnd], axis=1)
        verts[bnd] *= (radius / norms)[:, None]
    return Mesh(verts, cells, MeshKind.PLANAR)


_PHI = (1.0 + math.sqrt(5.0)) / 2.0

_ICOSA_VERTS = np.array([
    (-1, _PHI, 0), (1, _PHI, 0), (-1, -_PHI, 0), (1, -_PHI, 0),
    (0, -1, _PHI), (0, 1, _PHI), (0, -1, -_PHI), (0, 1, -_PHI),
    (_PHI, 0, -1), (_PHI, 0, 1), (-_PHI, 0, -1), (-_PHI, 0, 1),
], dtype=float)

_ICOSA_FACES = np.array([
    (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
    (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
    (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
    (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
])


def generate_icosphere(refinement: int) -> Mesh:
    """Closed triangulated unit sphere via icosahedron subdivision."""
    if refinement < 0:
        raise MeshError("refinement must be non-negative")
    verts = _ICOSA_VERTS / np.linalg.norm(_ICOSA_VERTS, axis=1)[:, None]
    cells = _ICOSA_FACES.copy()
    for _ in range(refinement):
        verts, cells = _quadrisect_triangles(verts, cells)
        verts /= np.linalg.norm(verts, axis=1)[:, None]
    return Mesh(verts, cells, MeshKind.SURFACE)


def generate_ball(refinement: int) -> Mesh:
    """Tetrahedral unit ball: fan from the origin to an icosphere boundary."""
    if refinement < 0:
        raise MeshError("refinement must be non-negative")
    surface = generate_icosphere(refinement + 1)
    verts = np.vstack([surface.vertices, [[0.0, 0.0, 0.0]]])
    center = surface.n_vertices
    cells = np.column_stack([
        np.full(surface.n_cells, center),
        surface.cells[:, 0], surface.cells[:, 2], surface.cells[:, 1],
    ])
    return Mesh(verts, cells, MeshKind.VOLUMETRIC)


def generate_tube(length: float, radius: float, closed_ends: bool,
                  refinement: int) -> Mesh:
    """Cylinder surface along the z-axis, optionally with hemispherical caps."""
    if length <= 0 or radius <= 0:
        raise MeshError("length and radius must be positive")
    if refinement < 0:
        raise MeshError("refinement must be non-negative")
    n_theta = 8 * 2 ** refinement
    dz_target = 2.0 * math.pi * radius / n_theta
    n_z = max(1, round(length / dz_target))
    theta = np.arange(n_theta) * (2.0 * math.pi / n_theta)
    circle = np.column_stack([np.cos(theta), np.sin(theta)])

    # rings listed from bottom to top as (radial scale, z)
    rings: list[tuple[float, float]] = []
    n_phi = max(2, n_theta // 4)
    if closed_ends:
        # poles themselves are added as single vertices below
        for i in range(n_phi - 1, 0, -1):
            phi = (math.pi / 2.0) * i / n_phi
            rings.append((math.cos(phi), -length / 2.0 - radius * math.sin(phi)))
    for j in range(n_z + 1):
        rings.append((1.0, -length / 2.0 + length * j / n_z))
    if closed_ends:
        for i in range(1, n_phi):
            phi = (math.pi / 2.0) * i / n_phi
            rings.append((math.cos(phi), length / 2.0 + radius * math.sin(phi)))

    verts = []
    for scale, z in rings:
        ring = np.column_stack([radius * scale * circle,
                                np.full(n_theta, z)])
        verts.append(ring)
    verts = np.vstack(verts)
    n_rings = len(rings)

    cells = []
    for j in range(n_rings - 1):
        lo, hi = j * n_theta, (j + 1) * n_theta
        for i in range(n_theta):
            i1 = (i + 1) % n_theta
            cells.append((lo + i, lo + i1, hi + i1))
            cells.append((lo + i, hi + i1, hi + i))
    if closed_ends:
        # collapse the degenerate polar rings into single pole vertices
        verts = np.vstack([verts,
                           [[0.0, 0.0, -length / 2.0 - radius],
                            [0.0, 0.0, length / 2.0 + radius]]])
        south, north = len(verts) - 2, len(verts) - 1
        for i in range(n_theta):
            i1 = (i + 1) % n_theta
            cells.append((south, i1, i))
            top = (n_rings - 1) * n_theta
            cells.append((north, top + i, top + i1))
    return Mesh(verts, np.array(cells), MeshKind.SURFACE)


# ---------------------------------------------------------------------------
# deformations

VertexMap = Callable[[np.ndarray], np.ndarray]


def map_vertices(mesh: Mesh, vertex_map: VertexMap) -> Mesh:
    """Apply a smooth injective coordinate map, keeping connectivity."""
    mapped = np.array([np.asarray(vertex_map(v), dtype=float)
                       for v in mesh.vertices])
    if mapped.shape != mesh.vertices.shape:
        raise MeshError("vertex map must preserve the embedding dimension")
    order = np.lexsort(mapped.T[::-1])
    sorted_pts = mapped[order]
    close = np.all(np.abs(np.diff(sorted_pts, axis=0)) < COINCIDENCE_TOL,
                   axis=1)
    if close.any():
        i = int(np.nonzero(close)[0][0])
        raise MeshError("vertex map is not injective: vertices "
                        f"{int(order[i])} and {int(order[i + 1])} coincide")
    measures = simplex_measures(mapped, mesh.cells)
    bad = np.nonzero(measures <= DEGENERACY_RTOL * measures.mean())[0]
    if bad.size:
        raise MeshError(f"vertex map degenerates cells {bad.tolist()[:10]}")
    return Mesh(mapped, mesh.cells.copy(), mesh.kind)


def scale_map(sx: float, sy: float = 1.0, sz: float = 1.0) -> VertexMap:
    def _map(v: np.ndarray) -> np.ndarray:
        factors = np.array([sx, sy, sz])[: len(v)]
        return v * factors
    return _map


def ellipse_map(semimajor: float = 2.0, semiminor: float = 1.0) -> VertexMap:
    """Stretch the unit disk into an ellipse (default 2:1 axes)."""
    return scale_map(semimajor, semiminor)


def dumbbell_map(pinch: float = 0.4, width: float = 0.45) -> VertexMap:
    """Pinch the radius at the equator (z = 0) by the given factor."""
    def _map(v: np.ndarray) -> np.ndarray:
        x, y, z = v
        factor = 1.0 - (1.0 - pinch) * math.exp(-((z / width) ** 2))
        return np.array([x * factor, y * factor, z])
    return _map


def fish_map() -> VertexMap:
    """Smooth deformation of the unit sphere into a fish-like surface."""
    def _map(v: np.ndarray) -> np.ndarray:
        x, y, z = v
        return np.array([1.6 * x,
                         y * (1.0 - 0.35 * x),
                         z * (0.9 - 0.25 * x)])
    return _map


DEFORMATION_PRESETS: dict[str, Callable[[], VertexMap]] = {
    "ellipse": ellipse_map,
    "dumbbell": dumbbell_map,
    "fish": fish_map,
}
