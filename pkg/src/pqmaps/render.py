"""Drawings of maps: Graphviz source and straight-line pictures.

The SVG and PNG drawings use a barycentric (Tutte) layout: boundary
vertices sit on a regular polygon in boundary order and every interior
vertex is the average of its neighbours.  Non-flat faces and interior
vertices are drawn in a highlight colour.
"""

from __future__ import annotations

import io
import warnings
from xml.sax.saxutils import escape

import numpy as np

from .curvature import PQParams, classify_flat
from .errors import PreconditionError
from .planar_map import PlanarMap

__all__ = ["tutte_layout", "render_dot", "render_svg", "render_png", "render", "HIGHLIGHT"]

HIGHLIGHT = "#d62728"
_PLAIN = "#333333"


def tutte_layout(m: PlanarMap) -> np.ndarray:
    """Vertex coordinates in ``[-1, 1]^2``; needs a boundary without repeated vertices."""
    if m.vertex_count == 1:
        return np.zeros((1, 2))
    walk = [m.origin(d) for d in m.boundary_path]
    if len(set(walk)) != len(walk) or len(walk) < 3:
        raise PreconditionError("layout needs a simple boundary of length at least 3")
    n = m.vertex_count
    pos = np.zeros((n, 2))
    angles = 2 * np.pi * np.arange(len(walk)) / len(walk)
    pos[walk, 0] = np.cos(angles)
    pos[walk, 1] = np.sin(angles)
    inner = [v for v in range(n) if v not in set(walk)]
    if inner:
        idx = {v: i for i, v in enumerate(inner)}
        A = np.zeros((len(inner), len(inner)))
        rhs = np.zeros((len(inner), 2))
        for v in inner:
            i = idx[v]
            for d in m.rotations[v]:
                w = m.head(d)
                A[i, i] += 1
                if w in idx:
                    A[i, idx[w]] -= 1
                else:
                    rhs[i] += pos[w]
        pos[inner] = np.linalg.solve(A, rhs)
    return pos


def _degenerate(pos: np.ndarray) -> bool:
    if len(pos) < 2:
        return False
    diff = pos[:, None, :] - pos[None, :, :]
    dist = np.sqrt((diff ** 2).sum(-1)) + np.eye(len(pos)) * 10
    return bool(dist.min() < 1e-9)


def _nonflat(m: PlanarMap, pq: PQParams | None):
    if pq is None:
        return frozenset(), frozenset()
    flat = classify_flat(m, pq)
    return flat.non_flat_faces, flat.non_flat_interior_vertices


def render_dot(m: PlanarMap, pq: PQParams | None = None) -> str:
    """Graphviz source: one line per vertex, one per edge, faces as comments."""
    faces, verts = _nonflat(m, pq)
    out = ["graph pqmap {", "  // layout delegated to graphviz"]
    for f, walk in enumerate(m.faces):
        tag = " nonflat" if f in faces else ""
        out.append(f"  // face {f} degree {len(walk)}{tag}: " + " ".join(str(m.origin(d)) for d in walk))
    for v in range(m.vertex_count):
        color = f', color="{HIGHLIGHT}"' if v in verts else ""
        out.append(f'  v{v} [label="{v}"{color}];')
    for e in range(m.edge_count):
        d = 2 * e
        fl, fr = m.face_of(d), m.face_of(d + 1)
        out.append(f'  v{m.origin(d)} -- v{m.head(d)} [label="e{e}", faces="{fl},{fr}"];')
    out.append("}")
    return "\n".join(out) + "\n"


def _scaled(pos: np.ndarray, size: float, margin: float) -> np.ndarray:
    return (pos + 1) / 2 * (size - 2 * margin) + margin


def render_svg(m: PlanarMap, pq: PQParams | None = None, size: int = 480) -> str:
    """Straight-line drawing; falls back to DOT when the layout is degenerate."""
    pos = tutte_layout(m)
    if _degenerate(pos):
        warnings.warn("degenerate layout; emitting DOT instead", RuntimeWarning, stacklevel=2)
        return render_dot(m, pq)
    faces, verts = _nonflat(m, pq)
    xy = _scaled(pos, size, 20)
    xy[:, 1] = size - xy[:, 1]
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">']
    for f in sorted(faces):
        pts = " ".join(f"{xy[v, 0]:.2f},{xy[v, 1]:.2f}" for v in m.face_vertices(f))
        out.append(f'<polygon class="nonflat-face" points="{pts}" fill="{HIGHLIGHT}" '
                   f'fill-opacity="0.15" stroke="{HIGHLIGHT}" stroke-width="3"/>')
    for e in range(m.edge_count):
        a, b = m.origin(2 * e), m.head(2 * e)
        out.append(f'<line x1="{xy[a, 0]:.2f}" y1="{xy[a, 1]:.2f}" x2="{xy[b, 0]:.2f}" '
                   f'y2="{xy[b, 1]:.2f}" stroke="{_PLAIN}" stroke-width="1"/>')
    for v in range(m.vertex_count):
        cls, color = ("nonflat-vertex", HIGHLIGHT) if v in verts else ("vertex", _PLAIN)
        out.append(f'<circle class="{cls}" cx="{xy[v, 0]:.2f}" cy="{xy[v, 1]:.2f}" r="3" fill="{color}">'
                   f"<title>{escape(str(v))}</title></circle>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_png(m: PlanarMap, pq: PQParams | None = None, size: int = 480) -> bytes:
    """Raster version of :func:`render_svg` drawn with matplotlib."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.patches import Polygon

    pos = tutte_layout(m)
    if _degenerate(pos):
        raise PreconditionError("degenerate layout; use DOT output")
    faces, verts = _nonflat(m, pq)
    fig, ax = plt.subplots(figsize=(size / 100, size / 100), dpi=100)
    for f in sorted(faces):
        ax.add_patch(Polygon(pos[m.face_vertices(f)], closed=True, facecolor=HIGHLIGHT, alpha=0.15,
                             edgecolor=HIGHLIGHT, linewidth=2.5))
    for e in range(m.edge_count):
        a, b = m.origin(2 * e), m.head(2 * e)
        ax.plot(pos[[a, b], 0], pos[[a, b], 1], color=_PLAIN, linewidth=0.8)
    colors = [HIGHLIGHT if v in verts else _PLAIN for v in range(m.vertex_count)]
    ax.scatter(pos[:, 0], pos[:, 1], s=8, c=colors, zorder=3)
    ax.set_aspect("equal")
    ax.axis("off")
    buf = io.BytesIO()
    fig.savefig(buf, format="png", metadata={"Software": None})
    plt.close(fig)
    return buf.getvalue()


def render(m: PlanarMap, fmt: str, pq: PQParams | None = None) -> bytes:
    if fmt == "dot":
        return render_dot(m, pq).encode()
    if fmt == "svg":
        return render_svg(m, pq).encode()
    if fmt == "png":
        return render_png(m, pq)
    raise PreconditionError(f"unknown format {fmt!r}")
