"""Weighted spaces and the Sturm-Liouville operator on the skeleton.

Functions on the skeleton live edge by edge: square-integrable against
alpha(sigma) d sigma on regular (G1/G2) edges and constant on singular
(G3) edges, whose fibers collapse onto re-entrant corners.  The operator
acts as -(1/alpha) d/dsigma (beta du/dsigma) on regular edges with the
weighted no-flux condition beta u' -> 0 at both ends, and as zero on
singular edges.

The lift F -> F o tau is an isometry from the weighted skeleton space
into L2 of the domain; its adjoint averages over fibers with weight
J = 1/|grad tau|.  Both are implemented against the fiber charts of
``skeleton.SkeletonEdge``.

Discretization is vertex-centered finite volume: beta is sampled at cell
faces (so the no-flux condition is natural and a vanishing endpoint
weight, as on G2 edges, needs no special casing) and the alpha mass is
integrated per cell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .domain import RpDomain
from .skeleton import (SkeletonEdge, _gauss_panels, domain_skeleton, locate)


# ---------------------------------------------------------------------------
# skeleton functions and inner products

@dataclass
class SkeletonFunction:
    """Per-edge data: sampled values on regular edges, scalars on singular ones.

    Sampled edges carry a uniform grid of n+1 nodes over [0, length]; an
    exact callable may be attached for quadrature-grade evaluation.
    """

    edges: list[SkeletonEdge]
    values: dict[str, np.ndarray] = field(default_factory=dict)
    scalars: dict[str, float] = field(default_factory=dict)
    callables: dict[str, object] = field(default_factory=dict)

    @classmethod
    def from_callable(cls, edges, fn, n: int = 256):
        """Sample fn(sigma) on regular edges; singular edges get fn(L/2)."""
        out = cls(edges=list(edges))
        for e in edges:
            if e.singular:
                out.scalars[e.edge_id] = float(fn(e.length / 2.0))
            else:
                grid = np.linspace(0.0, e.length, n + 1)
                out.values[e.edge_id] = np.asarray(fn(grid), dtype=float)
                out.callables[e.edge_id] = fn
        return out

    @classmethod
    def constant(cls, edges, c: float, n: int = 256):
        return cls.from_callable(edges, lambda s: np.full_like(np.asarray(s, float), c), n)

    def grid(self, edge: SkeletonEdge) -> np.ndarray:
        return np.linspace(0.0, edge.length, len(self.values[edge.edge_id]))

    def evaluate(self, edge: SkeletonEdge, sigma):
        if edge.singular:
            return np.full_like(np.asarray(sigma, float), self.scalars[edge.edge_id])
        fn = self.callables.get(edge.edge_id)
        if fn is not None:
            return np.asarray(fn(sigma), dtype=float)
        return np.interp(sigma, self.grid(edge), self.values[edge.edge_id])


def _edge_quad(edge: SkeletonEdge, integrand, n_panels: int = 32) -> float:
    return _gauss_panels(integrand, 0.0, edge.length, n_panels)


def l2_inner(f: SkeletonFunction, g: SkeletonFunction) -> float:
    """Weighted inner product: sum_e int f g alpha dsigma.

    Singular edges contribute (scalar product) * (alpha mass of the edge).
    """
    if [e.edge_id for e in f.edges] != [e.edge_id for e in g.edges]:
        raise ValueError("skeleton functions live on different edge sets")
    total = 0.0
    alpha_vec = {}
    for e in f.edges:
        if e.singular:
            total += f.scalars[e.edge_id] * g.scalars[e.edge_id] * e.preimage_area
        else:
            av = alpha_vec.setdefault(e.edge_id, np.vectorize(e.alpha))
            total += _edge_quad(
                e, lambda s: f.evaluate(e, s) * g.evaluate(e, s) * av(s))
    return total


def h1_inner(f: SkeletonFunction, g: SkeletonFunction,
             f_prime=None, g_prime=None) -> float:
    """l2_inner plus the derivative form sum over regular edges of
    int f' g' beta dsigma.  Derivatives default to grid differences."""
    total = l2_inner(f, g)
    for e in f.edges:
        if e.singular:
            continue
        if f_prime is not None and g_prime is not None:
            fp = lambda s: np.asarray(f_prime(s), float)
            gp = lambda s: np.asarray(g_prime(s), float)
        else:
            grid_f, vals_f = f.grid(e), f.values[e.edge_id]
            grid_g, vals_g = g.grid(e), g.values[e.edge_id]
            df = np.gradient(vals_f, grid_f)
            dg = np.gradient(vals_g, grid_g)
            fp = lambda s: np.interp(s, grid_f, df)
            gp = lambda s: np.interp(s, grid_g, dg)
        bv = np.vectorize(e.beta)
        total += _edge_quad(e, lambda s: fp(s) * gp(s) * bv(s))
    return total


# ---------------------------------------------------------------------------
# weighted Sturm-Liouville systems

@dataclass(frozen=True)
class WeightedSlSystem:
    """Finite-volume discretization of -(1/alpha)(beta u')' on one edge.

    Nodes sigma_i = i L/n; K holds the flux form with beta at the n cell
    faces, mass holds the per-cell alpha integrals.  The generalized
    problem K u = lam * diag(mass) u is symmetric with nonnegative
    spectrum and the constant vector in its kernel.
    """

    edge: SkeletonEdge
    n: int
    grid: np.ndarray
    face_beta: np.ndarray
    mass: np.ndarray

    def stiffness_tridiag(self) -> tuple[np.ndarray, np.ndarray]:
        h = self.grid[1] - self.grid[0]
        off = -self.face_beta / h
        diag = np.zeros(self.n + 1)
        diag[:-1] += self.face_beta / h
        diag[1:] += self.face_beta / h
        return diag, off


def assemble_sl(edge: SkeletonEdge, n: int) -> WeightedSlSystem:
    """Discretize one regular edge with n cells (n >= 8)."""
    if edge.singular:
        raise ValueError(
            f"edge {edge.edge_id}: the operator is zero on singular edges")
    if n < 8:
        raise ValueError("n must be >= 8")
    grid = np.linspace(0.0, edge.length, n + 1)
    h = grid[1] - grid[0]
    faces = 0.5 * (grid[:-1] + grid[1:])
    face_beta = np.array([edge.beta(s) for s in faces])
    # per-cell alpha mass by 2-point Gauss (exact for the linear weights)
    gauss = np.array([-1.0, 1.0]) / math.sqrt(3.0)
    cell_edges = np.concatenate([[grid[0]], faces, [grid[-1]]])
    mass = np.zeros(n + 1)
    alpha = np.vectorize(edge.alpha)
    for i in range(n + 1):
        lo, hi = cell_edges[i], cell_edges[i + 1]
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        mass[i] = half * alpha(mid + half * gauss).sum()
    return WeightedSlSystem(edge=edge, n=n, grid=grid,
                            face_beta=face_beta, mass=mass)


def sl_eigenvalues(system: WeightedSlSystem, count: int) -> np.ndarray:
    """Lowest eigenvalues of the weighted problem, sorted ascending.

    The no-flux stiffness annihilates constants by construction, so zero
    is a structural eigenvalue; when the numerical estimate of the lowest
    eigenvalue lies within roundoff of the operator norm it is replaced
    by the exact value.
    """
    if count < 1 or count > system.n + 1:
        raise ValueError(f"count must be in [1, {system.n + 1}]")
    diag, off = system.stiffness_tridiag()
    d = 1.0 / np.sqrt(system.mass)
    sym_diag = diag * d * d
    sym_off = off * d[:-1] * d[1:]
    vals = eigh_tridiagonal(sym_diag, sym_off,
                            select="i", select_range=(0, count - 1),
                            eigvals_only=True)
    vals = np.sort(vals)
    norm_est = float(np.abs(sym_diag).max() + 2.0 * np.abs(sym_off).max())
    if abs(vals[0]) <= 64.0 * np.finfo(float).eps * norm_est:
        vals[0] = 0.0
    return vals


def sl_convergence_order(edge: SkeletonEdge, index: int, exact: float,
                         grids=(64, 128, 256)) -> float:
    """Observed convergence order of one eigenvalue against its limit."""
    errs = []
    for n in grids:
        lam = sl_eigenvalues(assemble_sl(edge, n), index + 1)[index]
        errs.append(abs(lam - exact))
    rates = [math.log(errs[i] / errs[i + 1]) / math.log(grids[i + 1] / grids[i])
             for i in range(len(errs) - 1)]
    return float(np.mean(rates))


def richardson_pair(edge: SkeletonEdge, count: int,
                    grids=(512, 1024, 2048)) -> tuple[np.ndarray, np.ndarray]:
    """Two successive order-2 Richardson extrapolants of the low spectrum."""
    lams = [sl_eigenvalues(assemble_sl(edge, n), count) for n in grids]
    ext1 = lams[1] + (lams[1] - lams[0]) / 3.0
    ext2 = lams[2] + (lams[2] - lams[1]) / 3.0
    return ext1, ext2


# ---------------------------------------------------------------------------
# lift and fiber averaging

def lift(f: SkeletonFunction):
    """The composition F o tau as a callable on domain points."""
    edges = f.edges

    def evaluate(x: float, y: float) -> float:
        e, sigma, _ = locate(edges, x, y)
        return float(f.evaluate(e, sigma))

    return evaluate


def fiber_average(edge: SkeletonEdge, g, sigma: float,
                  n_panels: int = 16) -> float:
    """Adjoint of the lift on one edge:
    (1/alpha) int_{-l}^{l} g(x(sigma,s)) J(sigma,s) ds."""
    l = edge.fiber_halflength(sigma)

    def integrand(s):
        xs, ys = edge.fiber_point(sigma, s)
        vals = np.array([g(float(x), float(y)) for x, y in
                         zip(np.atleast_1d(xs), np.atleast_1d(ys))])
        return vals * edge.jacobian(sigma, s)

    total = (_gauss_panels(integrand, -l, 0.0, n_panels)
             + _gauss_panels(integrand, 0.0, l, n_panels))
    return total / edge.alpha(sigma)


def fiber_average_singular(edge: SkeletonEdge, g, n_sigma: int = 24,
                           n_panels: int = 8) -> float:
    """Mean value of g over the fiber preimage of a singular edge.

    Computed as (1/|preimage|) int_e dsigma int g J ds, which is the
    constant value the adjoint assigns on singular edges.
    """
    def per_sigma(sig_arr):
        out = []
        for sig in np.atleast_1d(sig_arr):
            l = edge.fiber_halflength(sig)
            f = lambda s: np.array(
                [g(float(x), float(y)) for x, y in
                 zip(*map(np.atleast_1d, edge.fiber_point(sig, s)))]
            ) * edge.jacobian(sig, s)
            out.append(_gauss_panels(f, -l, 0.0, n_panels)
                       + _gauss_panels(f, 0.0, l, n_panels))
        return np.array(out)

    total = _gauss_panels(per_sigma, 0.0, edge.length, n_sigma)
    return total / edge.preimage_area


def isometry_defects(edge: SkeletonEdge, fn, fn_prime,
                     n_panels: int = 8, order: int = 16) -> tuple[float, float]:
    """L2 and H1 defects of the lift on one regular edge.

    l2 defect: | int int |fn|^2 J ds dsigma - int |fn|^2 alpha dsigma |;
    h1 defect: | int int |fn'|^2 |grad tau| ds dsigma
                 - int |fn'|^2 beta dsigma |.
    """
    if edge.singular:
        raise ValueError("isometry defects are defined on regular edges")

    def l2_2d(sig_arr):
        out = []
        for sig in np.atleast_1d(sig_arr):
            l = edge.fiber_halflength(sig)
            f = lambda s: edge.jacobian(sig, s)
            fiber = (_gauss_panels(f, -l, 0.0, n_panels, order)
                     + _gauss_panels(f, 0.0, l, n_panels, order))
            out.append(fn(sig) ** 2 * fiber)
        return np.array(out)

    def h1_2d(sig_arr):
        out = []
        for sig in np.atleast_1d(sig_arr):
            l = edge.fiber_halflength(sig)
            f = lambda s: edge.grad_tau_mag(sig, s)
            fiber = (_gauss_panels(f, -l, 0.0, n_panels, order)
                     + _gauss_panels(f, 0.0, l, n_panels, order))
            out.append(fn_prime(sig) ** 2 * fiber)
        return np.array(out)

    alpha = np.vectorize(edge.alpha)
    beta = np.vectorize(edge.beta)
    l2_a = _gauss_panels(l2_2d, 0.0, edge.length, n_panels, order)
    l2_b = _gauss_panels(lambda s: np.asarray(fn(s), float) ** 2 * alpha(s),
                         0.0, edge.length, n_panels, order)
    h1_a = _gauss_panels(h1_2d, 0.0, edge.length, n_panels, order)
    h1_b = _gauss_panels(lambda s: np.asarray(fn_prime(s), float) ** 2 * beta(s),
                         0.0, edge.length, n_panels, order)
    return abs(l2_a - l2_b), abs(h1_a - h1_b)


# ---------------------------------------------------------------------------
# zero modes and singular-edge resolvent blocks

@dataclass(frozen=True)
class ZeroMode:
    """Normalized indicator of one edge's fiber preimage.

    Constant on its own decoupled component, zero elsewhere: its
    piecewise-H1 Rayleigh quotient vanishes identically and distinct
    modes are orthonormal because their supports are disjoint.
    """

    edge: SkeletonEdge

    @property
    def area(self) -> float:
        return self.edge.preimage_area

    @property
    def amplitude(self) -> float:
        return 1.0 / math.sqrt(self.area)

    def inner(self, other: "ZeroMode") -> float:
        if self.edge.edge_id != other.edge.edge_id:
            return 0.0  # disjoint supports
        return self.area / self.area

    def rayleigh_quotient(self) -> float:
        # gradient of a constant on the component is identically zero
        return 0.0

    def __call__(self, x: float, y: float) -> float:
        hit = self.edge.try_locate(x, y)
        return self.amplitude if hit is not None else 0.0


def zero_modes(domain: RpDomain, n: int) -> list[ZeroMode]:
    """n orthonormal zero-energy modes on distinct fiber preimages."""
    edges = domain_skeleton(domain)
    if n > len(edges):
        raise ValueError(f"domain skeleton has only {len(edges)} edges")
    return [ZeroMode(e) for e in edges[:n]]


def resolvent_on_singular_edge(edge: SkeletonEdge, value: float) -> float:
    """Action of (H + I)^{-1} on the constant `value` of a singular edge.

    The operator vanishes on singular edges, so the block is the 1x1
    identity and the constant is returned unchanged.
    """
    if not edge.singular:
        raise ValueError("this block applies to singular edges only")
    return value


def t1_roundtrip_defect(edge: SkeletonEdge, fn, fn_prime,
                        n: int = 256, n_panels: int = 8) -> float:
    """Diagnostic for the first-order lift: roundtrip on lifted functions.

    For g in the range of the lift (g = fn o tau on this edge's
    preimage), the adjoint with respect to the first-order inner products
    solves (K + M) w = rhs, where the rhs pairs g against the lifted hat
    functions through the fiber integrals of J and |grad tau|.  The lift
    being an isometry between the weighted edge space and H1 of the
    preimage forces the roundtrip w back to fn; the returned value is
    max |w - fn| on the grid.  No compactness conclusion is drawn from
    this report.
    """
    sys = assemble_sl(edge, n)
    grid = sys.grid
    faces = 0.5 * (grid[:-1] + grid[1:])

    def fiber(fvals, weight):
        # weight "J" integrates values of g, weight "inv" integrates
        # tangential derivative data against |grad tau|
        out = np.zeros(len(fvals))
        for i, sig in enumerate(fvals):
            l = edge.fiber_halflength(sig)
            if weight == "J":
                f = lambda s: edge.jacobian(sig, s)
            else:
                f = lambda s: edge.grad_tau_mag(sig, s)
            out[i] = (_gauss_panels(f, -l, 0.0, n_panels)
                      + _gauss_panels(f, 0.0, l, n_panels))
        return out

    inner = grid.copy()
    inner[0] = min(1e-12 * edge.length, edge.length / 2)
    inner[-1] = edge.length - inner[0]
    alpha_2d = fiber(inner, "J")        # per-node alpha by fiber quadrature
    beta_2d = fiber(faces, "inv")       # per-face beta by fiber quadrature

    g0 = np.asarray(fn(grid), float) * alpha_2d * _cell_widths(sys)
    flux = beta_2d * np.asarray(fn_prime(faces), float)
    rhs = g0.copy()
    rhs[:-1] -= flux
    rhs[1:] += flux

    diag, off = sys.stiffness_tridiag()
    A = np.diag(diag + sys.mass) + np.diag(off, 1) + np.diag(off, -1)
    w = np.linalg.solve(A, rhs)
    return float(np.max(np.abs(w - np.asarray(fn(grid), float))))


def _cell_widths(sys: WeightedSlSystem) -> np.ndarray:
    h = sys.grid[1] - sys.grid[0]
    w = np.full(sys.n + 1, h)
    w[0] = w[-1] = h / 2.0
    return w
