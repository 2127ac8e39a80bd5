"""Skeleton geometry of R&P rooms: edges, charts, fiber weights.

The skeleton (medial axis) of an R&P domain near a room junction splits
into three kinds of edges:

  G1  straight edges on the x-axis (passage centerlines and the central
      room segment), with vertical unit-Jacobian fibers;
  G2  diagonal bisector segments from the room's convex corners, with
      Jacobian 1/sqrt(2) fibers;
  G3  edges whose fibers end at a re-entrant corner of a passage mouth:
      the parabolic edges (equidistant from the corner and the far wall)
      and the mouth segments on the axis between two opposite corners.

Every edge carries an arclength parametrization, a fiber chart
(sigma, s) -> (x, y), the fiber Jacobian J = 1/|grad tau|, the coarea
weights alpha (fiber integral of J, always finite) and beta (fiber
integral of 1/J, logarithmically divergent on G3 edges where fibers run
into a corner), and the exact area of its fiber preimage.

All corner formulas live in a local chart with the re-entrant corner at
(0, delta/2), the mouth plane at u = 0, the room at u > 0 and the far
wall at v = h/2; room builders place four such charts per room and glue
them by reflection.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from .domain import RpDomain

_SQRT2 = math.sqrt(2.0)
_ASINH1 = math.asinh(1.0)


class EdgeGroup(Enum):
    G1_ROOM = "G1_room"
    G1_PASSAGE = "G1_passage"
    G2_DIAGONAL = "G2_diagonal"
    G3_PARABOLIC = "G3_parabolic"
    G3_SEGMENT = "G3_segment"


@dataclass(frozen=True)
class CornerGeometry:
    """Local data of one re-entrant corner: room height h, mouth height delta.

    Chart coordinates (u, v): corner A at (0, delta/2), far wall at
    v = h/2, room interior at u > 0.  delta = 0 degenerates to a solid
    wall end (the parabolic and mouth edges vanish).
    """

    room_height: float
    passage_height: float

    def __post_init__(self):
        if not (0.0 <= self.passage_height < self.room_height):
            raise ValueError("need 0 <= passage_height < room_height")

    @property
    def gap(self) -> float:
        """h - delta, the squeeze between corner and far wall."""
        return self.room_height - self.passage_height

    @property
    def corner(self) -> tuple[float, float]:
        return (0.0, self.passage_height / 2.0)


def parabola_point(geom: CornerGeometry, u0: float) -> float:
    """Height v0 of the skeleton parabola over abscissa u0.

    The parabola is the locus equidistant from the corner and the far
    wall: v0 = -u0^2/(h - delta) + (h + delta)/4.
    """
    h, d = geom.room_height, geom.passage_height
    return -u0 * u0 / (h - d) + 0.25 * (h + d)


def x_intercept(geom: CornerGeometry) -> float:
    """Abscissa where the parabola meets the axis: sqrt(h^2 - delta^2)/2."""
    h, d = geom.room_height, geom.passage_height
    return math.sqrt(h * h - d * d) / 2.0


def t_at_intercept(geom: CornerGeometry) -> float:
    """Slope parameter t0 = 2 u0/(h-delta) at the axis intercept."""
    h, d = geom.room_height, geom.passage_height
    return math.sqrt((h + d) / (h - d))


def arclength(geom: CornerGeometry, t0: float) -> float:
    """Arclength along the parabola from its apex junction (t0 = 1).

    sigma(t0) = (h-delta)/4 * (t0 sqrt(t0^2+1) + asinh(t0)
                               - sqrt(2) - asinh(1)),   t0 >= 1.
    """
    if t0 < 1.0 - 1e-12:
        raise ValueError(f"t0 must be >= 1, got {t0}")
    g = geom.gap
    val = 0.25 * g * (t0 * math.sqrt(t0 * t0 + 1.0) + math.asinh(t0)
                      - _SQRT2 - _ASINH1)
    return max(val, 0.0)


def edge_length(geom: CornerGeometry) -> float:
    """Length of the parabolic edge, junction to axis intercept.

    Closed form sqrt(2)/4 sqrt(h(h+delta)) - sqrt(2)/4 (h-delta)
    + (h-delta)/4 (asinh(sqrt((h+delta)/(h-delta))) - asinh(1)).
    """
    h, d = geom.room_height, geom.passage_height
    g = h - d
    return (0.25 * _SQRT2 * math.sqrt(h * (h + d)) - 0.25 * _SQRT2 * g
            + 0.25 * g * (math.asinh(math.sqrt((h + d) / g)) - _ASINH1))


def t_from_arclength(geom: CornerGeometry, sigma: float) -> float:
    """Invert the arclength map on the parabolic edge."""
    t_max = t_at_intercept(geom)
    total = arclength(geom, t_max)
    if not -1e-12 <= sigma <= total * (1.0 + 1e-12):
        raise ValueError(f"sigma {sigma} outside [0, {total}]")
    sigma = min(max(sigma, 0.0), total)
    if sigma == 0.0:
        return 1.0
    if sigma == total:
        return t_max
    return brentq(lambda t: arclength(geom, t) - sigma, 1.0, t_max, xtol=1e-15)


def tau_parabolic(geom: CornerGeometry, u: float, v: float) -> tuple[float, float]:
    """Chart coordinates (sigma, s) of a point in the corner-side region.

    t0 = (delta/2 - v)/u + sqrt(((delta/2 - v)/u)^2 + 1),
    s  = -(t0^2+1)(u - (h-delta) t0/2)/(2 t0),
    sigma = arclength(t0); s is positive on the corner side.
    """
    if u <= 0:
        raise ValueError("chart requires u > 0")
    h, d = geom.room_height, geom.passage_height
    w = (d / 2.0 - v) / u
    t0 = w + math.sqrt(w * w + 1.0)
    s = -(t0 * t0 + 1.0) * (u - 0.5 * (h - d) * t0) / (2.0 * t0)
    return arclength(geom, t0), s


def jacobian_inv(geom: CornerGeometry, u, v):
    """|grad tau| on the corner side of a parabolic edge (cartesian form).

    sqrt(2)(h-delta) ((delta-2v)^2+4u^2)^(1/4)
        / (sqrt((delta-2v)^2+4u^2) - delta + 2v)^(3/2);
    returns inf at the corner itself.
    """
    h, d = geom.room_height, geom.passage_height
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    q = (d - 2.0 * v) ** 2 + 4.0 * u * u
    den = np.sqrt(q) - d + 2.0 * v
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(q == 0.0, np.inf,
                       _SQRT2 * (h - d) * q**0.25
                       / np.where(den > 0.0, den, np.nan) ** 1.5)
        out = np.where((q > 0.0) & (den <= 0.0), np.inf, out)
    return out if out.ndim else float(out)


def jacobian_inv_polar(geom: CornerGeometry, r, theta):
    """Polar form of |grad tau| about the corner: u = r cos(theta),
    v = delta/2 - r sin(theta):  (h-delta)/(sqrt(2) r (1-sin(theta))^(3/2))."""
    g = geom.gap
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    with np.errstate(divide="ignore"):
        out = np.where(r == 0.0, np.inf,
                       g / (_SQRT2 * r * (1.0 - np.sin(theta)) ** 1.5))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class Frame:
    """Orientation-preserving-or-reflecting placement of a local chart."""

    x0: float = 0.0
    y0: float = 0.0
    sx: float = 1.0
    sy: float = 1.0

    def to_global(self, u, v):
        return self.x0 + self.sx * np.asarray(u, float), self.y0 + self.sy * np.asarray(v, float)

    def to_local(self, x, y):
        return self.sx * (np.asarray(x, float) - self.x0), self.sy * (np.asarray(y, float) - self.y0)


@dataclass(frozen=True)
class WeightValue:
    alpha: float
    beta: float
    beta_divergent: bool = False


def _gauss_panels(f, lo: float, hi: float, n_panels: int, order: int = 8) -> float:
    """Composite Gauss-Legendre quadrature of f over [lo, hi]."""
    nodes, wts = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, n_panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    pts = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * wts[None, :]).ravel()
    return float(np.dot(w, f(pts)))


class SkeletonEdge:
    """Base class: one skeleton edge with its fiber chart and weights."""

    group: EdgeGroup
    singular = False

    def __init__(self, edge_id: str, length: float):
        if length <= 0:
            raise ValueError(f"edge {edge_id}: length must be positive")
        self.edge_id = edge_id
        self.length = length

    def param(self, sigma):
        """Global coordinates of the skeleton point at arclength sigma."""
        raise NotImplementedError

    def fiber_halflength(self, sigma):
        raise NotImplementedError

    def fiber_point(self, sigma, s):
        """Global coordinates of the fiber point (sigma, s)."""
        raise NotImplementedError

    def jacobian(self, sigma, s):
        """J(sigma, s) = 1/|grad tau| along the fiber."""
        raise NotImplementedError

    def grad_tau_mag(self, sigma, s):
        return 1.0 / self.jacobian(sigma, s)

    def alpha(self, sigma, n_panels: int = 8) -> float:
        """Fiber measure weight: integral of J over the fiber."""
        l = self.fiber_halflength(sigma)
        return (_gauss_panels(lambda s: self.jacobian(sigma, s), -l, 0.0, n_panels)
                + _gauss_panels(lambda s: self.jacobian(sigma, s), 0.0, l, n_panels))

    def beta(self, sigma) -> float:
        """Fiber derivative weight: integral of 1/J over the fiber."""
        raise NotImplementedError

    @property
    def preimage_area(self) -> float:
        """Exact area of tau^{-1}(edge)."""
        raise NotImplementedError

    def alpha_mass(self) -> float:
        """Integral of alpha over the edge (equals preimage_area)."""
        return _gauss_panels(np.vectorize(self.alpha), 0.0, self.length, 16)

    def try_locate(self, x: float, y: float):
        """(sigma, s) if the point lies in this edge's fiber preimage, else None."""
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.edge_id} len={self.length:.6g}>"


class AxisEdge(SkeletonEdge):
    """G1 edge on the x-axis with vertical fibers of constant half-length."""

    def __init__(self, edge_id: str, x_start: float, length: float,
                 half_height: float, kind: str):
        super().__init__(edge_id, length)
        self.group = EdgeGroup.G1_ROOM if kind == "room" else EdgeGroup.G1_PASSAGE
        self.x_start = x_start
        self.half_height = half_height

    def param(self, sigma):
        sigma = np.asarray(sigma, float)
        return self.x_start + sigma, np.zeros_like(sigma)

    def fiber_halflength(self, sigma):
        return self.half_height

    def fiber_point(self, sigma, s):
        return self.x_start + np.asarray(sigma, float), np.asarray(s, float)

    def jacobian(self, sigma, s):
        return np.ones_like(np.asarray(s, float)) if np.ndim(s) else 1.0

    def alpha(self, sigma, n_panels: int = 8) -> float:
        return 2.0 * self.half_height

    def beta(self, sigma) -> float:
        return 2.0 * self.half_height

    def try_locate(self, x: float, y: float):
        sigma = x - self.x_start
        if 0.0 <= sigma <= self.length and abs(y) < self.half_height:
            return sigma, y
        return None

    @property
    def preimage_area(self) -> float:
        return self.length * 2.0 * self.half_height


class DiagonalEdge(SkeletonEdge):
    """G2 bisector edge from a convex room corner, in a corner frame.

    Local chart: corner of the room at (0, h/2); the edge runs along
    v = h/2 - u for 0 < u < (h-delta)/2.  Fibers: s > 0 vertical to the
    far wall, s < 0 horizontal to the mouth-plane wall; J = 1/sqrt(2),
    l(sigma) = sigma/sqrt(2), alpha = sigma, beta = 2 sigma.
    """

    group = EdgeGroup.G2_DIAGONAL

    def __init__(self, edge_id: str, geom: CornerGeometry, frame: Frame):
        super().__init__(edge_id, geom.gap / _SQRT2)
        self.geom = geom
        self.frame = frame

    def _local(self, sigma, s):
        sigma = np.asarray(sigma, float)
        s = np.asarray(s, float)
        h = self.geom.room_height
        u = np.where(s >= 0, sigma / _SQRT2, sigma / _SQRT2 + s)
        v = np.where(s >= 0, h / 2.0 - sigma / _SQRT2 + s, h / 2.0 - sigma / _SQRT2)
        return u, v

    def param(self, sigma):
        return self.frame.to_global(*self._local(sigma, 0.0))

    def fiber_halflength(self, sigma):
        return np.asarray(sigma, float) / _SQRT2

    def fiber_point(self, sigma, s):
        return self.frame.to_global(*self._local(sigma, s))

    def jacobian(self, sigma, s):
        s = np.asarray(s, float)
        return np.full_like(s, 1.0 / _SQRT2) if s.ndim else 1.0 / _SQRT2

    def alpha(self, sigma, n_panels: int = 8) -> float:
        return float(sigma)

    def beta(self, sigma) -> float:
        return 2.0 * float(sigma)

    def try_locate(self, x: float, y: float):
        u, v = self.frame.to_local(x, y)
        h, d = self.geom.room_height, self.geom.passage_height
        if not (0.0 < u < self.geom.gap / 2.0 and d / 2.0 < v < h / 2.0):
            return None
        sigma = _SQRT2 * (h / 2.0 - v) if v < h / 2.0 - u else _SQRT2 * u
        return sigma, u + v - h / 2.0

    @property
    def preimage_area(self) -> float:
        return self.geom.gap**2 / 4.0


class ParabolicEdge(SkeletonEdge):
    """G3 parabolic edge in a corner frame; beta diverges (fibers hit the corner)."""

    group = EdgeGroup.G3_PARABOLIC
    singular = True

    def __init__(self, edge_id: str, geom: CornerGeometry, frame: Frame):
        super().__init__(edge_id, edge_length(geom))
        self.geom = geom
        self.frame = frame

    def _point_on_parabola(self, sigma):
        t0 = t_from_arclength(self.geom, float(sigma))
        u0 = 0.5 * self.geom.gap * t0
        return t0, u0, parabola_point(self.geom, u0)

    def param(self, sigma):
        if np.ndim(sigma):
            pts = [self.param(s) for s in np.asarray(sigma, float)]
            xs, ys = zip(*pts)
            return np.array(xs), np.array(ys)
        _, u0, v0 = self._point_on_parabola(sigma)
        return self.frame.to_global(u0, v0)

    def fiber_halflength(self, sigma):
        t0, _, _ = self._point_on_parabola(sigma)
        return 0.25 * self.geom.gap * (1.0 + t0 * t0)

    def fiber_point(self, sigma, s):
        t0, u0, v0 = self._point_on_parabola(sigma)
        l = 0.25 * self.geom.gap * (1.0 + t0 * t0)
        s = np.asarray(s, float)
        au, av = self.geom.corner
        # corner side: straight ray towards the corner; wall side: vertical
        du, dv = (au - u0) / l, (av - v0) / l
        u = np.where(s >= 0, u0 + s * du, u0)
        v = np.where(s >= 0, v0 + s * dv, v0 - s)
        return self.frame.to_global(u, v)

    def jacobian(self, sigma, s):
        t0, u0, v0 = self._point_on_parabola(sigma)
        l = 0.25 * self.geom.gap * (1.0 + t0 * t0)
        s = np.asarray(s, float)
        sin_theta = (self.geom.passage_height / 2.0 - v0) / l
        corner = _SQRT2 * (1.0 - sin_theta) ** 1.5 * (l - s) / self.geom.gap
        wall = 1.0 / math.sqrt(1.0 + t0 * t0)
        out = np.where(s >= 0, corner, wall)
        return out if out.ndim else float(out)

    def beta(self, sigma) -> float:
        raise ValueError(
            f"edge {self.edge_id}: beta diverges on parabolic edges; "
            "use beta_truncated(sigma, eps)")

    def beta_truncated(self, sigma, eps: float, n_panels: int = 16) -> float:
        """Integral of 1/J over the fiber cut off at distance eps from the corner.

        The substitution s = l(1 - exp(-z)) renders the 1/(l-s) blow-up
        exactly integrable (the integrand is constant in z along the
        straight corner ray), so the truncated value is quadrature-exact.
        """
        if eps <= 0:
            raise ValueError("eps must be > 0")
        l = self.fiber_halflength(sigma)
        if eps >= l:
            raise ValueError(f"eps={eps} must be < fiber half-length {l}")
        f = lambda s: self.grad_tau_mag(sigma, s)
        wall = _gauss_panels(f, -l, 0.0, n_panels)
        g = lambda z: self.grad_tau_mag(sigma, l * (1.0 - np.exp(-z))) * l * np.exp(-z)
        corner = _gauss_panels(g, 0.0, math.log(l / eps), n_panels)
        return wall + corner

    def try_locate(self, x: float, y: float):
        u, v = self.frame.to_local(x, y)
        h, d = self.geom.room_height, self.geom.passage_height
        e = x_intercept(self.geom)
        if not (0.0 < u < e and 0.0 < v < h / 2.0):
            return None
        if u > self.geom.gap / 2.0 and v > parabola_point(self.geom, u):
            # wall side: vertical fiber
            sigma = arclength(self.geom, 2.0 * u / self.geom.gap)
            return sigma, -(v - parabola_point(self.geom, u))
        # corner side: the chart inversion lands outside [0, length] or
        # outside [0, l] for points of neighbouring regions
        try:
            sigma, s = tau_parabolic(self.geom, u, v)
        except ValueError:
            return None
        if not 0.0 <= sigma <= self.length:
            return None
        if not 0.0 <= s <= self.fiber_halflength(sigma):
            return None
        return sigma, s

    @property
    def preimage_area(self) -> float:
        h, d = self.geom.room_height, self.geom.passage_height
        g = h - d
        e = x_intercept(self.geom)
        return (e * (2.0 * h - d) - g * g) / 4.0


class MouthEdge(SkeletonEdge):
    """G3 mouth segment on the axis between two opposite re-entrant corners.

    Fibers run from the axis to the corners at (0, +-delta/2); both fiber
    ends are corners, so beta diverges at both.  J = (l - |s|) delta/(2 l^2)
    follows from the ray chart about either corner; alpha = delta/2.
    """

    group = EdgeGroup.G3_SEGMENT
    singular = True

    def __init__(self, edge_id: str, geom: CornerGeometry, frame: Frame):
        if geom.passage_height <= 0:
            raise ValueError("mouth edge needs a positive passage height")
        super().__init__(edge_id, x_intercept(geom))
        self.geom = geom
        self.frame = frame

    def param(self, sigma):
        return self.frame.to_global(np.asarray(sigma, float), 0.0)

    def fiber_halflength(self, sigma):
        d = self.geom.passage_height
        sigma = np.asarray(sigma, float)
        out = np.sqrt(sigma * sigma + d * d / 4.0)
        return out if out.ndim else float(out)

    def fiber_point(self, sigma, s):
        sigma = np.asarray(sigma, float)
        s = np.asarray(s, float)
        d = self.geom.passage_height
        l = np.sqrt(sigma * sigma + d * d / 4.0)
        # ray towards the corner on the sign(s) side
        u = sigma * (1.0 - np.abs(s) / l)
        v = np.sign(s) * (d / 2.0) * np.abs(s) / l
        return self.frame.to_global(u, v)

    def jacobian(self, sigma, s):
        d = self.geom.passage_height
        sigma = np.asarray(sigma, float)
        s = np.asarray(s, float)
        l = np.sqrt(sigma * sigma + d * d / 4.0)
        out = (l - np.abs(s)) * d / (2.0 * l * l)
        return out if out.ndim else float(out)

    def alpha(self, sigma, n_panels: int = 8) -> float:
        return self.geom.passage_height / 2.0

    def beta(self, sigma) -> float:
        raise ValueError(
            f"edge {self.edge_id}: beta diverges on mouth segments; "
            "use beta_truncated(sigma, eps)")

    def beta_truncated(self, sigma, eps: float, n_panels: int = 16) -> float:
        """Both fiber ends run into corners; truncate at distance eps from each."""
        if eps <= 0:
            raise ValueError("eps must be > 0")
        l = self.fiber_halflength(sigma)
        if eps >= l:
            raise ValueError(f"eps={eps} must be < fiber half-length {l}")
        g = lambda z: (self.grad_tau_mag(sigma, l * (1.0 - np.exp(-z)))
                       * l * np.exp(-z))
        return 2.0 * _gauss_panels(g, 0.0, math.log(l / eps), n_panels)

    def try_locate(self, x: float, y: float):
        u, v = self.frame.to_local(x, y)
        d = self.geom.passage_height
        e = x_intercept(self.geom)
        if not (0.0 < u < e and abs(v) < (d / 2.0) * (1.0 - u / e)):
            return None
        sigma = u * (d / 2.0) / (d / 2.0 - abs(v))
        if not 0.0 <= sigma <= self.length:
            return None
        l = self.fiber_halflength(sigma)
        dist_to_corner = math.hypot(u, abs(v) - d / 2.0)
        s = l - dist_to_corner
        return sigma, math.copysign(s, v) if v != 0.0 else s * 0.0

    @property
    def preimage_area(self) -> float:
        return x_intercept(self.geom) * self.geom.passage_height / 2.0


def weights(edge: SkeletonEdge, sigma: float,
            eps: float | None = None) -> WeightValue:
    """Coarea weights of one edge at arclength sigma.

    G1 and G2 edges return their closed forms; G3 edges return the
    quadrature alpha and, when eps is given, the eps-truncated beta with
    the divergence flag set.  Requesting an untruncated beta on a G3 edge
    raises.
    """
    if not 0.0 < sigma < edge.length:
        raise ValueError(f"sigma must be inside (0, {edge.length})")
    if edge.singular:
        if eps is None:
            raise ValueError(
                f"edge {edge.edge_id}: beta diverges; pass eps for the "
                "truncated value")
        return WeightValue(edge.alpha(sigma), edge.beta_truncated(sigma, eps),
                           beta_divergent=True)
    return WeightValue(edge.alpha(sigma), edge.beta(sigma))


def build_room_skeleton(room_height: float, delta_left: float,
                        delta_right: float, x_left: float = 0.0,
                        room_tag: str = "room") -> list[SkeletonEdge]:
    """Skeleton edges of one room with mouth heights delta_left/right.

    A zero delta denotes a solid wall end (first/last piece): its
    parabolic and mouth edges vanish and its diagonals reach the room
    centerline.  Rejects rooms whose two parabolic regions would overlap
    (cannot happen for axis-centered mouths, kept as a guard).
    """
    h = room_height
    for name, d in (("delta_left", delta_left), ("delta_right", delta_right)):
        if d < 0 or d >= h:
            raise ValueError(f"{name} must satisfy 0 <= delta < room height")
    geo_l = CornerGeometry(h, delta_left)
    geo_r = CornerGeometry(h, delta_right)
    reach_l = x_intercept(geo_l)
    reach_r = x_intercept(geo_r)
    if reach_l + reach_r > h * (1.0 + 1e-12):
        raise ValueError(
            f"parabolic regions overlap (extents {reach_l} + {reach_r} > {h}); "
            "skeleton topology is ambiguous for this configuration")

    edges: list[SkeletonEdge] = []
    for side, geo, x_mouth, sx in (("left", geo_l, x_left, 1.0),
                                   ("right", geo_r, x_left + h, -1.0)):
        for vert, sy in (("top", 1.0), ("bottom", -1.0)):
            frame = Frame(x0=x_mouth, y0=0.0, sx=sx, sy=sy)
            edges.append(DiagonalEdge(f"{room_tag}/{side}-{vert}/G2", geo, frame))
            if geo.passage_height > 0.0:
                edges.append(ParabolicEdge(f"{room_tag}/{side}-{vert}/G3par", geo, frame))
        if geo.passage_height > 0.0:
            frame = Frame(x0=x_mouth, y0=0.0, sx=sx, sy=1.0)
            edges.append(MouthEdge(f"{room_tag}/{side}/G3seg", geo, frame))
    centre_len = h - reach_l - reach_r
    if centre_len > 1e-14 * h:
        edges.append(AxisEdge(f"{room_tag}/centre/G1", x_left + reach_l,
                              centre_len, h / 2.0, kind="room"))
    return edges


def domain_skeleton(domain: RpDomain) -> list[SkeletonEdge]:
    """Skeleton edges of a whole (truncated) R&P domain.

    Rooms get their four corner charts (solid ends where no passage is
    adjacent); each passage contributes its centerline edge, shortened at
    a solid far end where two small diagonals close it off.
    """
    edges: list[SkeletonEdge] = []
    pieces = domain.pieces
    for p in pieces:
        if p.kind == "room":
            d_left = 2.0 * pieces[p.index - 2].half_height if p.index >= 2 else 0.0
            d_right = (2.0 * pieces[p.index].half_height
                       if p.index < len(pieces) else 0.0)
            edges.extend(build_room_skeleton(
                p.length, d_left, d_right, x_left=p.x_lo,
                room_tag=f"room{p.index}"))
        else:
            d = 2.0 * p.half_height
            open_right = p.index < len(pieces)
            length = p.length if open_right else p.length - d / 2.0
            edges.append(AxisEdge(f"passage{p.index}/G1", p.x_lo, length,
                                  p.half_height, kind="passage"))
            if not open_right:
                geo = CornerGeometry(d, 0.0)
                for vert, sy in (("top", 1.0), ("bottom", -1.0)):
                    frame = Frame(x0=p.x_hi, y0=0.0, sx=-1.0, sy=sy)
                    edges.append(DiagonalEdge(
                        f"passage{p.index}/end-{vert}/G2", geo, frame))
    return edges


def locate(edges: list[SkeletonEdge], x: float, y: float):
    """Find the edge and chart coordinates (edge, sigma, s) of a point.

    Raises ValueError when the point lies on no edge's fiber preimage
    (outside the domain or on a chart boundary of measure zero).
    """
    for e in edges:
        hit = e.try_locate(x, y)
        if hit is not None:
            return e, hit[0], hit[1]
    raise ValueError(f"point ({x}, {y}) is not inside any fiber chart")


def skeleton_to_json(edges: list[SkeletonEdge], n_samples: int = 33) -> str:
    """JSON dump: group, length, sampled polyline and weight samples per edge."""
    payload = []
    for e in edges:
        sig = np.linspace(0.0, e.length, n_samples)
        xs, ys = e.param(sig)
        inner = sig[1:-1]
        entry = {
            "id": e.edge_id,
            "group": e.group.value,
            "length": e.length,
            "singular": e.singular,
            "preimage_area": e.preimage_area,
            "polyline": [[float(x), float(y)] for x, y in zip(np.atleast_1d(xs),
                                                              np.atleast_1d(ys))],
            "alpha_samples": [float(e.alpha(s)) for s in inner],
        }
        if not e.singular:
            entry["beta_samples"] = [float(e.beta(s)) for s in inner]
        payload.append(entry)
    return json.dumps({"edges": payload}, indent=2)


def skeleton_polylines(edges: list[SkeletonEdge], n_samples: int = 33) -> str:
    """Whitespace table of edge polylines, blank-line separated per edge."""
    blocks = []
    for e in edges:
        sig = np.linspace(0.0, e.length, n_samples)
        xs, ys = e.param(sig)
        lines = [f"# {e.edge_id} {e.group.value}"]
        lines += [f"{x:.12g} {y:.12g}" for x, y in zip(np.atleast_1d(xs),
                                                       np.atleast_1d(ys))]
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"
