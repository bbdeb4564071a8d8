"""
Watertight triangle meshes, halfspace clipping, and liquid-height solving.

The liquid body inside a container is the intersection of the container's
interior with the halfspace below a plane.  Conventions used throughout:

* A plane is a unit ``normal`` (the upward surface normal, pointing out of
  the liquid) plus a scalar ``height``: the signed offset of the plane
  along the normal measured from the mesh's bounding-box center.  Liquid
  occupies the non-positive side, ``(x - o) . normal <= 0`` with
  ``o = bbox_center + height * normal``.
* Meshes are closed, consistently outward-oriented triangle soups; every
  directed edge must appear exactly once together with its reverse.
* Volumes come from the divergence theorem.  For clipped volumes the
  flux reference point is placed on the clipping plane, so the cap faces
  contribute zero flux and are never constructed in the height-solving
  hot path; only clipped wall triangles are summed.  The cut
  cross-section area (the exact derivative of clipped volume with respect
  to height) falls out of the same pass via Green's theorem on the cut
  chords.

File interchange uses an ASCII subset: ``v x y z`` vertex lines and
``f i j k`` one-based triangle lines; see :func:`load_mesh`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    MeshFormatError,
    NoConvergence,
    NonStarShapedCutLoop,
    NotWatertight,
    OpenCutLoop,
    VolumeOutOfRange,
)

#: Vertices closer to the plane than this fraction of the bbox diagonal are
#: classified as on-plane, avoiding sliver geometry at vertex crossings.
ONPLANE_SNAP_FRACTION = 1e-9

#: Triangles with area below this fraction of diag^2 are rejected as degenerate.
DEGENERATE_AREA_FRACTION = 1e-12

#: Newton falls back to bisection when the cut area (dV/dh) drops below
#: this fraction of diag^2.
AREA_FLOOR_FRACTION = 1e-12


def unit_vector(v) -> np.ndarray:
    """Normalize a nonzero 3-vector."""
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise ValueError("cannot normalize a zero vector")
    return v / n


@dataclass(frozen=True, eq=False)
class TriMesh:
    """Watertight triangle mesh with consistent outward orientation.

    Validation rejects out-of-range indices, non-finite vertices,
    degenerate triangles (area <= 1e-12 * diag^2), duplicated directed
    edges (non-manifold or inconsistently wound), and boundary edges.
    An empty mesh is valid.
    """

    vertices: np.ndarray
    triangles: np.ndarray

    def __post_init__(self):
        verts = np.asarray(self.vertices, dtype=float).reshape(-1, 3)
        tris = np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "triangles", tris)
        if not np.isfinite(verts).all():
            raise ValueError("mesh vertices must be finite")
        if tris.size == 0:
            return
        if tris.min() < 0 or tris.max() >= len(verts):
            raise ValueError("triangle indices out of range")
        corners = verts[tris]
        areas = 0.5 * np.linalg.norm(
            np.cross(corners[:, 1] - corners[:, 0], corners[:, 2] - corners[:, 0]),
            axis=-1,
        )
        if (areas <= DEGENERATE_AREA_FRACTION * self.bbox_diag**2).any():
            raise ValueError("mesh contains degenerate (near-zero-area) triangles")
        self._check_watertight(tris, len(verts))

    @staticmethod
    def _check_watertight(tris, nverts):
        edges = tris[:, [0, 1, 1, 2, 2, 0]].reshape(-1, 2)
        key_fwd = edges[:, 0] * nverts + edges[:, 1]
        if np.unique(key_fwd).size != key_fwd.size:
            raise NotWatertight(
                "a directed edge appears more than once (non-manifold or "
                "inconsistently oriented triangles)"
            )
        key_rev = edges[:, 1] * nverts + edges[:, 0]
        if not np.array_equal(np.sort(key_fwd), np.sort(key_rev)):
            raise NotWatertight("mesh has boundary edges (not closed)")

    @cached_property
    def bbox_min(self) -> np.ndarray:
        return self.vertices.min(axis=0) if len(self.vertices) else np.zeros(3)

    @cached_property
    def bbox_max(self) -> np.ndarray:
        return self.vertices.max(axis=0) if len(self.vertices) else np.zeros(3)

    @cached_property
    def bbox_center(self) -> np.ndarray:
        return 0.5 * (self.bbox_min + self.bbox_max)

    @cached_property
    def bbox_diag(self) -> float:
        return float(np.linalg.norm(self.bbox_max - self.bbox_min))

    def __len__(self) -> int:
        return len(self.triangles)


@dataclass(frozen=True, eq=False)
class LiquidPlane:
    """Liquid surface: upward unit normal plus signed height offset along it,
    measured from the container mesh's bounding-box center."""

    normal: np.ndarray
    height: float

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=float).reshape(3)
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "height", float(self.height))
        if abs(np.linalg.norm(n) - 1.0) > 1e-12:
            raise ValueError("plane normal must be a unit vector (within 1e-12)")
        if not np.isfinite(self.height):
            raise ValueError("plane height must be finite")


@dataclass(frozen=True)
class ClipResult:
    """Clipped volume, cut cross-section area, and trivial-case flags."""

    volume: float
    cut_area: float
    empty: bool
    full: bool


def mesh_volume(mesh: TriMesh) -> float:
    """Interior volume by the divergence theorem: sum of signed tetrahedra
    det(v0, v1, v2)/6 anchored at the origin.  Positive for outward
    orientation; exact for polyhedra."""
    if len(mesh) == 0:
        return 0.0
    c = mesh.vertices[mesh.triangles]
    return float(
        np.einsum("ij,ij->i", np.cross(c[:, 0], c[:, 1]), c[:, 2]).sum() / 6.0
    )


def _signed_heights(mesh, plane):
    """Per-vertex signed distance to the plane, snapped to zero inside the
    on-plane band."""
    o = mesh.bbox_center + plane.height * plane.normal
    s = (mesh.vertices - o) @ plane.normal
    snap = ONPLANE_SNAP_FRACTION * mesh.bbox_diag
    return np.where(np.abs(s) <= snap, 0.0, s), o


def clip_volume(mesh: TriMesh, plane: LiquidPlane) -> ClipResult:
    """Volume of the container interior below the plane, plus the cut area.

    Each triangle is clipped against the halfspace and its divergence flux
    is accumulated with the reference point on the plane, so the cap needs
    no explicit construction.  The cut area is assembled from the clip
    chords via Green's theorem; planes that contain whole mesh faces
    contribute no chords there (the height solver's bisection fallback
    covers those flat spots).

    Parameters
    ----------
    mesh : TriMesh
    plane : LiquidPlane

    Returns
    -------
    ClipResult
        ``volume`` in length^3, ``cut_area`` in length^2 (zero when the
        plane misses the mesh), and ``empty``/``full`` flags for planes
        below/above the whole mesh.
    """
    if len(mesh) == 0:
        return ClipResult(volume=0.0, cut_area=0.0, empty=True, full=True)
    s, o = _signed_heights(mesh, plane)
    n = plane.normal
    st = s[mesh.triangles]
    tri = mesh.vertices[mesh.triangles]
    npos = (st > 0.0).sum(axis=1)
    nneg = (st < 0.0).sum(axis=1)

    def flux(a, b, c):
        return np.einsum("ij,ij->i", np.cross(a - o, b - o), c - o).sum() / 6.0

    volume = 0.0
    area = 0.0
    kept = npos == 0
    if kept.any():
        volume += flux(tri[kept, 0], tri[kept, 1], tri[kept, 2])

    mixed = (npos > 0) & (nneg > 0)
    if mixed.any():
        tri_m = tri[mixed]
        st_m = st[mixed]
        for roll in range(3):
            order = np.roll(np.arange(3), -roll)
            a, b, c = tri_m[:, order[0]], tri_m[:, order[1]], tri_m[:, order[2]]
            sa, sb, sc = st_m[:, order[0]], st_m[:, order[1]], st_m[:, order[2]]
            # exactly one vertex strictly below, rolled to position a
            m1 = (sa < 0.0) & (sb >= 0.0) & (sc >= 0.0)
            if m1.any():
                ta = (sa[m1] / (sa[m1] - sb[m1]))[:, None]
                tc = (sc[m1] / (sc[m1] - sa[m1]))[:, None]
                i_ab = a[m1] + ta * (b[m1] - a[m1])
                i_ca = c[m1] + tc * (a[m1] - c[m1])
                volume += flux(a[m1], i_ab, i_ca)
                area += 0.5 * (np.cross(i_ca - o, i_ab - o) @ n).sum()
            # two vertices strictly below (a, b), one strictly above (c)
            m2 = (sa < 0.0) & (sb < 0.0) & (sc > 0.0)
            if m2.any():
                tb = (sb[m2] / (sb[m2] - sc[m2]))[:, None]
                tc = (sc[m2] / (sc[m2] - sa[m2]))[:, None]
                i_bc = b[m2] + tb * (c[m2] - b[m2])
                i_ca = c[m2] + tc * (a[m2] - c[m2])
                volume += flux(a[m2], b[m2], i_bc) + flux(a[m2], i_bc, i_ca)
                area += 0.5 * (np.cross(i_ca - o, i_bc - o) @ n).sum()

    empty = bool(nneg.sum() == 0)
    # snapped faces sit a snap-band off the plane geometrically, leaving
    # flux dust; an empty clip holds no volume by definition
    return ClipResult(
        volume=0.0 if empty else max(float(volume), 0.0),
        cut_area=max(float(area), 0.0),
        empty=empty,
        full=bool(npos.sum() == 0),
    )


@dataclass(frozen=True)
class HeightSearch:
    """Outcome of a height solve: the height, its volume residual, and the
    number of Newton-Bisect iterations spent."""

    height: float
    residual: float
    iterations: int


def height_search(
    mesh: TriMesh,
    normal,
    target_volume: float,
    h_prev: float | None = None,
    tol_rel: float = 1e-9,
    max_iter: int = 200,
) -> HeightSearch:
    """Solve clip_volume(height) == target_volume by safeguarded Newton.

    Newton steps use the cut area as the exact derivative dV/dh and fall
    back to bisection whenever the step would leave the bracket (the
    mesh's support interval along the normal) or the cut area degenerates.
    Iteration continues past the volume tolerance until the height stops
    moving in floating point, so round-trips are stable to the bracket's
    resolution.

    Parameters
    ----------
    mesh : TriMesh
    normal : array-like
        Upward unit surface normal.
    target_volume : float
        Desired liquid volume, within ``[0, mesh_volume(mesh)]``
        (:class:`VolumeOutOfRange` otherwise).
    h_prev : float, optional
        Initial guess, e.g. the previous step's height; the bracket
        midpoint when omitted or out of bracket.
    tol_rel : float
        Volume residual tolerance relative to the total mesh volume.
    max_iter : int
        Iteration budget; :class:`NoConvergence` past it (degenerate mesh).
    """
    n = np.asarray(normal, dtype=float).reshape(3)
    if abs(np.linalg.norm(n) - 1.0) > 1e-12:
        raise ValueError("normal must be a unit vector (within 1e-12)")
    total = mesh_volume(mesh)
    target = float(target_volume)
    if not np.isfinite(target) or target < 0.0 or target > total * (1.0 + 1e-12):
        raise VolumeOutOfRange(
            f"target volume {target} outside [0, {total}]"
        )
    support = (mesh.vertices - mesh.bbox_center) @ n
    h_lo, h_hi = float(support.min()), float(support.max())
    if target == 0.0:
        return HeightSearch(height=h_lo, residual=0.0, iterations=0)
    if target >= total:
        return HeightSearch(height=h_hi, residual=abs(total - target), iterations=0)

    vtol = tol_rel * total
    area_floor = AREA_FLOOR_FRACTION * mesh.bbox_diag**2
    lo, hi = h_lo, h_hi
    h = h_prev if (h_prev is not None and lo < h_prev < hi) else 0.5 * (lo + hi)
    h = float(h)
    f = np.nan
    for iteration in range(1, max_iter + 1):
        res = clip_volume(mesh, LiquidPlane(n, h))
        f = res.volume - target
        if f == 0.0:
            return HeightSearch(height=h, residual=0.0, iterations=iteration)
        if f < 0.0:
            lo = h
        else:
            hi = h
        if res.cut_area > area_floor:
            h_new = h - f / res.cut_area
            if h_new == h:
                # the Newton correction f/A estimates the remaining height
                # error; once it falls below fp resolution, h is done even
                # if the opposite bracket end never moved
                if abs(f) <= vtol:
                    return HeightSearch(height=h, residual=abs(f), iterations=iteration)
                raise NoConvergence(
                    f"height stagnated at {h} with residual {f}"
                )
            if not (lo < h_new < hi):
                h_new = 0.5 * (lo + hi)
        else:
            h_new = 0.5 * (lo + hi)
        if h_new == h:
            # bracket at floating-point resolution
            if abs(f) <= vtol:
                return HeightSearch(height=h, residual=abs(f), iterations=iteration)
            raise NoConvergence(
                f"height stagnated at {h} with residual {f} "
                "(flat or degenerate volume profile)"
            )
        h = h_new
    if abs(f) <= vtol:
        return HeightSearch(height=h, residual=abs(f), iterations=max_iter)
    raise NoConvergence(f"no convergence after {max_iter} iterations")


def solve_height(
    mesh: TriMesh,
    normal,
    target_volume: float,
    h_prev: float | None = None,
) -> float:
    """Height whose clipped volume equals ``target_volume``; see
    :func:`height_search` for the solver contract."""
    return height_search(mesh, normal, target_volume, h_prev).height


def liquid_geometry(mesh: TriMesh, normal, height: float) -> TriMesh:
    """Closed mesh of the liquid body below the plane.

    Wall triangles are clipped against the plane; cut edges are chained
    into closed loops and each loop is fan-triangulated from its centroid
    to cap the body.  Intersection points are computed once per mesh edge
    so the output is watertight by construction.  The centroid fan is
    valid for the star-shaped (in practice convex) cut loops produced by
    the containers in scope; a loop that fans inconsistently raises
    :class:`NonStarShapedCutLoop`, and a cut boundary that fails to close
    raises :class:`OpenCutLoop`.

    Returns an empty mesh when the plane lies below the container and the
    input mesh itself when it lies above.
    """
    plane = LiquidPlane(unit_vector(normal), height)
    if len(mesh) == 0:
        return mesh
    s, o = _signed_heights(mesh, plane)
    if (s >= 0.0).all():
        return TriMesh(np.zeros((0, 3)), np.zeros((0, 3), dtype=np.int64))
    if (s <= 0.0).all():
        return mesh

    verts = mesh.vertices
    node_index: dict = {}
    out_vertices: list[np.ndarray] = []

    def node(key):
        idx = node_index.get(key)
        if idx is None:
            if key[0] == "v":
                coords = verts[key[1]]
            else:
                _, i, j = key
                t = s[i] / (s[i] - s[j])
                coords = verts[i] + t * (verts[j] - verts[i])
            idx = len(out_vertices)
            out_vertices.append(coords)
            node_index[key] = idx
        return idx

    out_tris: list[tuple[int, int, int]] = []
    chords: list[tuple] = []

    for i0, i1, i2 in mesh.triangles:
        si = (s[i0], s[i1], s[i2])
        if si[0] >= 0.0 and si[1] >= 0.0 and si[2] >= 0.0:
            continue  # dropped (in-plane faces have no volume below)
        if si[0] <= 0.0 and si[1] <= 0.0 and si[2] <= 0.0:
            out_tris.append((node(("v", i0)), node(("v", i1)), node(("v", i2))))
            # an in-plane edge of a kept triangle is a cut chord unless its
            # kept neighbor contributes the reverse (cancelled below)
            for a, b in ((i0, i1), (i1, i2), (i2, i0)):
                if s[a] == 0.0 and s[b] == 0.0:
                    chords.append((("v", int(a)), ("v", int(b))))
            continue
        # mixed: walk the triangle boundary, keeping the below side
        poly: list[tuple] = []
        for a, b in ((i0, i1), (i1, i2), (i2, i0)):
            if s[a] <= 0.0:
                poly.append(("v", int(a)))
            if s[a] * s[b] < 0.0:
                poly.append(("e", int(min(a, b)), int(max(a, b))))
        ids = [node(k) for k in poly]
        for m in range(1, len(ids) - 1):
            out_tris.append((ids[0], ids[m], ids[m + 1]))
        for m in range(len(poly)):
            u, w = poly[m], poly[(m + 1) % len(poly)]
            if _on_plane(u, s) and _on_plane(w, s):
                chords.append((u, w))

    loops = _chain_loops(chords)
    nrm = plane.normal
    sliver = 1e-12 * mesh.bbox_diag**2
    for loop in loops:
        if len(loop) < 3:
            continue  # two-node loop bounds zero area
        coords = np.array([out_vertices[node(k)] for k in loop])
        # area centroid of the loop polygon: the node mean can land exactly
        # on a chord line (collinear chord subdivisions shift it), which
        # would degenerate the fan
        ref = coords[0]
        doubled = np.cross(coords[1:-1] - ref, coords[2:] - ref) @ nrm
        total = doubled.sum()
        if total <= 2.0 * sliver:
            raise NonStarShapedCutLoop(
                f"cut loop of {len(loop)} nodes encloses no usable area"
            )
        piece_centers = (ref + coords[1:-1] + coords[2:]) / 3.0
        centroid = (doubled[:, None] * piece_centers).sum(axis=0) / total
        signed = np.cross(coords - centroid, np.roll(coords, -1, axis=0) - centroid) @ nrm
        if (signed <= sliver).any():
            raise NonStarShapedCutLoop(
                f"cut loop of {len(loop)} nodes is not star-shaped around its centroid"
            )
        ids = [node(k) for k in loop]
        c_idx = len(out_vertices)
        out_vertices.append(centroid)
        for m in range(len(ids)):
            out_tris.append((c_idx, ids[m], ids[(m + 1) % len(ids)]))

    return TriMesh(np.array(out_vertices), np.array(out_tris, dtype=np.int64))


def _on_plane(key, s) -> bool:
    return key[0] == "e" or s[key[1]] == 0.0


def _chain_loops(chords):
    """Chain directed cut chords into closed loops, reversed so each loop runs
    counterclockwise around the upward normal (matching an outward cap)."""
    # interior in-plane edges appear twice with opposite directions; cancel them
    counted: dict = {}
    for u, w in chords:
        if counted.pop((w, u), None) is not None:
            continue
        if (u, w) in counted:
            raise OpenCutLoop(f"duplicate cut chord at {u}")
        counted[(u, w)] = True
    succ: dict = {}
    for u, w in counted:
        if w in succ:
            raise OpenCutLoop(f"cut boundary branches at node {w}")
        succ[w] = u  # reversed traversal
    loops = []
    visited = set()
    for start in succ:
        if start in visited:
            continue
        loop = [start]
        visited.add(start)
        cur = succ[start]
        while cur != start:
            if cur in visited or cur not in succ:
                raise OpenCutLoop("cut boundary failed to close into a loop")
            visited.add(cur)
            loop.append(cur)
            cur = succ[cur]
        loops.append(loop)
    return loops


# ---------------------------------------------------------------------------
# container fixtures


def _extrude_polygon(points2d, height, cap_tris, z0=0.0):
    """Watertight prism over a counterclockwise simple polygon.

    ``cap_tris`` triangulates the polygon using loop-vertex indices only,
    keeping the side walls and caps edge-compatible.
    """
    pts = np.asarray(points2d, dtype=float)
    npts = len(pts)
    bottom = np.column_stack([pts, np.full(npts, z0)])
    top = np.column_stack([pts, np.full(npts, z0 + height)])
    verts = np.vstack([bottom, top])
    tris = []
    for a, b, c in cap_tris:
        tris.append((c, b, a))  # bottom cap faces -z
        tris.append((npts + a, npts + b, npts + c))  # top cap faces +z
    for i in range(npts):
        j = (i + 1) % npts
        tris.append((i, j, npts + j))
        tris.append((i, npts + j, npts + i))
    return TriMesh(verts, np.array(tris, dtype=np.int64))


def _fan(n):
    return [(0, i, i + 1) for i in range(1, n - 1)]


def box_mesh(size=(1.0, 1.0, 1.0), origin=(0.0, 0.0, 0.0)) -> TriMesh:
    """Axis-aligned box spanning ``origin`` to ``origin + size`` (12 triangles)."""
    sx, sy, sz = (float(v) for v in size)
    ox, oy, oz = (float(v) for v in origin)
    if min(sx, sy, sz) <= 0.0:
        raise ValueError("box dimensions must be positive")
    square = [(ox, oy), (ox + sx, oy), (ox + sx, oy + sy), (ox, oy + sy)]
    return _extrude_polygon(square, sz, _fan(4), z0=oz)


def cylinder_mesh(radius=1.0, height=1.0, segments=48) -> TriMesh:
    """Regular prism approximating a cylinder along z, base at z = -height/2."""
    if radius <= 0.0 or height <= 0.0:
        raise ValueError("radius and height must be positive")
    if segments < 3:
        raise ValueError("need at least 3 segments")
    ang = 2.0 * np.pi * np.arange(segments) / segments
    ring = np.column_stack([radius * np.cos(ang), radius * np.sin(ang)])
    return _extrude_polygon(ring, height, _fan(segments), z0=-0.5 * height)


def l_prism_mesh(outer=(2.0, 2.0), notch=(1.0, 1.0), height=1.0) -> TriMesh:
    """L-shaped prism: the ``outer`` rectangle with a ``notch`` rectangle
    removed from its (+x, +y) corner, extruded along z from z = 0."""
    W, D = (float(v) for v in outer)
    w, d = (float(v) for v in notch)
    if not (0.0 < w < W and 0.0 < d < D):
        raise ValueError("notch must be strictly smaller than the outer rectangle")
    # counterclockwise, with a collinear vertex at (0, D-d) so the left wall
    # splits compatibly with the cap triangulation (no T-junctions)
    loop = [
        (0.0, 0.0), (W, 0.0), (W, D - d), (W - w, D - d),
        (W - w, D), (0.0, D), (0.0, D - d),
    ]
    caps = [(0, 1, 2), (0, 2, 3), (0, 3, 6), (6, 3, 4), (6, 4, 5)]
    return _extrude_polygon(loop, height, caps)


def icosphere_mesh(radius=1.0, subdivisions=3) -> TriMesh:
    """Geodesic sphere: subdivided icosahedron projected onto the sphere."""
    if radius <= 0.0:
        raise ValueError("radius must be positive")
    if subdivisions < 0:
        raise ValueError("subdivisions must be nonnegative")
    g = (1.0 + np.sqrt(5.0)) / 2.0
    verts = np.array(
        [
            (-1, g, 0), (1, g, 0), (-1, -g, 0), (1, -g, 0),
            (0, -1, g), (0, 1, g), (0, -1, -g), (0, 1, -g),
            (g, 0, -1), (g, 0, 1), (-g, 0, -1), (-g, 0, 1),
        ],
        dtype=float,
    )
    tris = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    verts = [v / np.linalg.norm(v) for v in verts]
    for _ in range(subdivisions):
        midpoint: dict = {}
        new_tris = []

        def mid(i, j):
            key = (min(i, j), max(i, j))
            idx = midpoint.get(key)
            if idx is None:
                m = verts[i] + verts[j]
                verts.append(m / np.linalg.norm(m))
                idx = len(verts) - 1
                midpoint[key] = idx
            return idx

        for a, b, c in tris:
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            new_tris += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        tris = new_tris
    return TriMesh(radius * np.array(verts), np.array(tris, dtype=np.int64))


# ---------------------------------------------------------------------------
# ASCII interchange


def load_mesh(path) -> TriMesh:
    """Read the ``v x y z`` / ``f i j k`` ASCII subset (1-based indices,
    triangles only).  Raises :class:`MeshFormatError` with the offending
    line number; watertightness is validated on construction."""
    verts = []
    tris = []
    with open(path, "r", encoding="ascii") as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            if fields[0] == "v":
                if len(fields) != 4:
                    raise MeshFormatError(f"line {ln}: vertex needs 3 coordinates", line=ln)
                try:
                    verts.append([float(v) for v in fields[1:]])
                except ValueError:
                    raise MeshFormatError(f"line {ln}: bad vertex coordinate", line=ln)
            elif fields[0] == "f":
                if len(fields) != 4:
                    raise MeshFormatError(f"line {ln}: faces must be triangles", line=ln)
                try:
                    idx = [int(v) for v in fields[1:]]
                except ValueError:
                    raise MeshFormatError(f"line {ln}: bad face index", line=ln)
                if min(idx) < 1:
                    raise MeshFormatError(f"line {ln}: face indices are 1-based", line=ln)
                tris.append([i - 1 for i in idx])
            else:
                raise MeshFormatError(f"line {ln}: unknown record '{fields[0]}'", line=ln)
    if tris and max(max(t) for t in tris) >= len(verts):
        raise MeshFormatError("face index past the last vertex")
    return TriMesh(np.array(verts, dtype=float).reshape(-1, 3),
                   np.array(tris, dtype=np.int64).reshape(-1, 3))


def save_mesh(mesh: TriMesh, path) -> None:
    """Write the ASCII interchange format with shortest round-trip decimals."""
    with open(path, "w", encoding="ascii") as fh:
        for x, y, z in mesh.vertices:
            fh.write(f"v {float(x)!r} {float(y)!r} {float(z)!r}\n")
        for a, b, c in mesh.triangles:
            fh.write(f"f {a + 1} {b + 1} {c + 1}\n")
