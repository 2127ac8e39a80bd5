"""Independent finite-difference eigenvalue oracle on grid-exact truncations.

The geometry is rasterized without stair-stepping: every piece boundary
must land on a grid line, so the discrete domain is the continuum domain
exactly and the only error is the O(spacing^2) consistency error of the
5-point stencil.

Neumann uses cell-centered unknowns (the graph Laplacian of the active
cell adjacency, no-flux across true boundary faces by construction);
Dirichlet uses vertex-centered unknowns on nodes strictly inside the
domain with value 0 outside.  Both converge at second order on
rectangles, so Richardson extrapolation over grid doublings gives
continuum estimates with an error bar.

The R&P chain is symmetric about the x-axis; ``fd_eigenvalues`` can
split into even/odd reflection parities to halve the solve size (the
merged spectrum is identical, which the tests check).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .bracketing import assemble_bounds
from .domain import RpDomain


@dataclass(frozen=True)
class GridDomain:
    """Cell-exact raster of a truncated domain.

    active[r, c] flags the cell spanning
    [c*dx, (c+1)*dx] x [(r - rows/2)*dx, (r + 1 - rows/2)*dx]; the row
    count is even and the x-axis is the horizontal mid-line.
    """

    n_per_unit: int
    active: np.ndarray

    @property
    def spacing(self) -> float:
        return 1.0 / self.n_per_unit

    @property
    def cell_count(self) -> int:
        return int(self.active.sum())


@dataclass(frozen=True)
class FdSpectrum:
    bc: str
    eigenvalues: np.ndarray
    grid_n: int
    max_residual: float

    def count_below(self, lam: float) -> int:
        return int((self.eigenvalues < lam).sum())


def _exact_int(value: float, n: int, what: str) -> int:
    scaled = value * n
    nearest = round(scaled)
    if abs(scaled - nearest) > 1e-9 * max(1.0, abs(scaled)):
        raise ValueError(
            f"{what} = {value} is not a multiple of 1/{n}; "
            "choose a finer or compatible n_per_unit")
    return int(nearest)


def rasterize(domain: RpDomain, M: int, n_per_unit: int) -> GridDomain:
    """Exact cell set of the first 2M pieces at spacing 1/n_per_unit.

    Every x-boundary and half-height must be a multiple of the spacing
    (half-heights must give an even cell count so the x-axis stays a
    grid line); otherwise an error names the offending coordinate.
    """
    if 2 * M > domain.n_pieces:
        raise ValueError(f"domain has only {domain.n_pieces} pieces")
    n = n_per_unit
    pieces = domain.pieces[: 2 * M]
    cols_hi = _exact_int(pieces[-1].x_hi, n, f"piece {pieces[-1].index} x_hi")
    half_rows = max(_exact_int(p.half_height, n, f"piece {p.index} half_height")
                    for p in pieces)
    active = np.zeros((2 * half_rows, cols_hi), dtype=bool)
    for p in pieces:
        c0 = _exact_int(p.x_lo, n, f"piece {p.index} x_lo")
        c1 = _exact_int(p.x_hi, n, f"piece {p.index} x_hi")
        hr = _exact_int(p.half_height, n, f"piece {p.index} half_height")
        active[half_rows - hr: half_rows + hr, c0:c1] = True
    return GridDomain(n_per_unit=n, active=active)


def _neumann_matrix(active: np.ndarray, dx: float) -> sp.csc_matrix:
    idx = -np.ones(active.shape, dtype=np.int64)
    rr, cc = np.nonzero(active)
    idx[rr, cc] = np.arange(len(rr))
    n = len(rr)
    pairs = []
    m = active[:-1, :] & active[1:, :]
    pairs.append((idx[:-1, :][m], idx[1:, :][m]))
    m = active[:, :-1] & active[:, 1:]
    pairs.append((idx[:, :-1][m], idx[:, 1:][m]))
    rows = np.concatenate([p[0] for p in pairs] + [p[1] for p in pairs])
    cols = np.concatenate([p[1] for p in pairs] + [p[0] for p in pairs])
    diag = np.zeros(n)
    np.add.at(diag, rows, 1.0)
    L = sp.coo_matrix(
        (np.concatenate([-np.ones(len(rows)), diag]),
         (np.concatenate([rows, np.arange(n)]),
          np.concatenate([cols, np.arange(n)]))),
        shape=(n, n)).tocsc()
    return L / dx**2


def _dirichlet_matrix(active: np.ndarray, dx: float) -> sp.csc_matrix:
    # interior node (between 4 cells) iff all 4 incident cells are active
    interior = (active[:-1, :-1] & active[:-1, 1:]
                & active[1:, :-1] & active[1:, 1:])
    idx = -np.ones(interior.shape, dtype=np.int64)
    rr, cc = np.nonzero(interior)
    idx[rr, cc] = np.arange(len(rr))
    n = len(rr)
    pairs = []
    m = interior[:-1, :] & interior[1:, :]
    pairs.append((idx[:-1, :][m], idx[1:, :][m]))
    m = interior[:, :-1] & interior[:, 1:]
    pairs.append((idx[:, :-1][m], idx[:, 1:][m]))
    rows = np.concatenate([p[0] for p in pairs] + [p[1] for p in pairs])
    cols = np.concatenate([p[1] for p in pairs] + [p[0] for p in pairs])
    diag = np.full(n, 4.0)
    L = sp.coo_matrix(
        (np.concatenate([-np.ones(len(rows)), diag]),
         (np.concatenate([rows, np.arange(n)]),
          np.concatenate([cols, np.arange(n)]))),
        shape=(n, n)).tocsc()
    return L / dx**2


def _half_matrices(grid: GridDomain, bc: str) -> list[sp.csc_matrix]:
    """Even/odd reflection-parity blocks on the upper half grid."""
    act = grid.active
    half = act.shape[0] // 2
    top = act[half:, :]
    if not np.array_equal(top, act[:half, :][::-1, :]):
        raise ValueError("parity split requires a y-symmetric cell set")
    dx = grid.spacing
    out = []
    if bc == "neumann":
        base = _neumann_matrix(top, dx)
        idx = -np.ones(top.shape, dtype=np.int64)
        rr, cc = np.nonzero(top)
        idx[rr, cc] = np.arange(len(rr))
        bottom_row = idx[0, :][idx[0, :] >= 0]
        even = base.tolil()
        odd = base.tolil()
        for i in bottom_row:
            odd[i, i] += 2.0 / dx**2  # mirror cell enters with opposite sign
        out = [even.tocsc(), odd.tocsc()]
    else:
        # nodes strictly above the axis, plus the axis line for even parity
        interior = (act[:-1, :-1] & act[:-1, 1:] & act[1:, :-1] & act[1:, 1:])
        upper = interior[half - 1:, :]  # row 0 = the y=0 node line
        for parity in ("even", "odd"):
            rows_mask = upper.copy()
            if parity == "odd":
                rows_mask[0, :] = False  # axis nodes vanish
            idx = -np.ones(rows_mask.shape, dtype=np.int64)
            rr, cc = np.nonzero(rows_mask)
            idx[rr, cc] = np.arange(len(rr))
            n = len(rr)
            pairs = []
            m = rows_mask[:-1, :] & rows_mask[1:, :]
            vert_w = np.ones(int(m.sum()))
            if parity == "even":
                # an axis node couples to its north neighbour with weight 2
                # (mirrored south copy); the symmetrized similarity form
                # carries sqrt(2) on both triangles
                axis_pairs = np.zeros(m.shape, dtype=bool)
                axis_pairs[0, :] = m[0, :]
                vert_w[axis_pairs[m]] = math.sqrt(2.0)
            pairs.append((idx[:-1, :][m], idx[1:, :][m], vert_w))
            m = rows_mask[:, :-1] & rows_mask[:, 1:]
            pairs.append((idx[:, :-1][m], idx[:, 1:][m], np.ones(int(m.sum()))))
            rows_i = np.concatenate([p[0] for p in pairs] + [p[1] for p in pairs])
            cols_i = np.concatenate([p[1] for p in pairs] + [p[0] for p in pairs])
            vals = -np.concatenate([p[2] for p in pairs] * 2)
            diag = np.full(n, 4.0)
            L = sp.coo_matrix(
                (np.concatenate([vals, diag]),
                 (np.concatenate([rows_i, np.arange(n)]),
                  np.concatenate([cols_i, np.arange(n)]))),
                shape=(n, n)).tocsc()
            out.append(L / dx**2)
    return out


def _solve_lowest(L: sp.csc_matrix, count: int) -> tuple[np.ndarray, float]:
    n = L.shape[0]
    count = min(count, n - 1) if n > 1 else 1
    if n <= 400:
        dense = L.toarray()
        vals, vecs = np.linalg.eigh(dense)
        vals, vecs = vals[:count], vecs[:, :count]
        res = np.linalg.norm(dense @ vecs - vecs * vals, axis=0)
        return vals, float(res.max())
    vals, vecs = spla.eigsh(L, k=count, sigma=-10.0, which="LM")
    order = np.argsort(vals)
    vals, vecs = vals[order], vecs[:, order]
    res = np.linalg.norm(L @ vecs - vecs * vals, axis=0)
    return vals, float(res.max())


def fd_eigenvalues(grid: GridDomain, bc: str, count: int,
                   symmetry: bool = False) -> FdSpectrum:
    """Lowest `count` eigenvalues of the 5-point Laplacian on the raster."""
    if bc not in ("neumann", "dirichlet"):
        raise ValueError(f"bc must be 'neumann' or 'dirichlet', got {bc!r}")
    if symmetry:
        blocks = _half_matrices(grid, bc)
        vals_list, residual = [], 0.0
        for L in blocks:
            v, r = _solve_lowest(L, count)
            vals_list.append(v)
            residual = max(residual, r)
        vals = np.sort(np.concatenate(vals_list))[:count]
    else:
        L = (_neumann_matrix(grid.active, grid.spacing) if bc == "neumann"
             else _dirichlet_matrix(grid.active, grid.spacing))
        vals, residual = _solve_lowest(L, count)
        vals = np.sort(vals)[:count]
    return FdSpectrum(bc=bc, eigenvalues=vals, grid_n=grid.n_per_unit,
                      max_residual=residual)


def richardson_eigenvalues(domain: RpDomain, M: int, bc: str, count: int,
                           grids, symmetry: bool = True
                           ) -> tuple[np.ndarray, np.ndarray]:
    """Extrapolated eigenvalues and error bars over doubling grids.

    With three grids the bar is the difference of the last two
    extrapolants; with two it is the size of the final correction.
    """
    grids = sorted(grids)
    spectra = [fd_eigenvalues(rasterize(domain, M, n), bc, count, symmetry)
               for n in grids]
    vals = [s.eigenvalues for s in spectra]
    exts = [vals[i + 1] + (vals[i + 1] - vals[i]) / 3.0
            for i in range(len(vals) - 1)]
    if len(exts) >= 2:
        bars = np.abs(exts[-1] - exts[-2])
    else:
        bars = np.abs(vals[-1] - vals[-2]) / 3.0
    return exts[-1], bars


def sandwich_check(domain: RpDomain, M: int, lambdas, grids=(64, 128, 256),
                   count: int = 20, symmetry: bool = True) -> dict:
    """Bracketing sandwich and interlacing against extrapolated FD spectra.

    For each lambda: bracket_lower <= N_FD <= bracket_upper for both
    boundary conditions, plus the shifted comparison between the Neumann
    and Dirichlet FD spectra.  Unresolvable lambdas (lam*spacing^2 > 0.1)
    are skipped with a warning entry.
    """
    fine = max(grids)
    lam_max_resolvable = 0.1 * fine * fine
    neu, neu_bar = richardson_eigenvalues(domain, M, "neumann", count, grids, symmetry)
    dir_, dir_bar = richardson_eigenvalues(domain, M, "dirichlet", count, grids, symmetry)
    # counts are only complete below the last computed eigenvalue
    lam_max_counted = min(neu[-1], dir_[-1])

    rows, skipped = [], []
    for lam in lambdas:
        if lam > lam_max_resolvable or lam >= lam_max_counted:
            skipped.append(lam)
            continue
        for bc, vals in (("neumann", neu), ("dirichlet", dir_)):
            rep = assemble_bounds(domain, bc, M, lam, scope="omega_2M")
            n_fd = int((vals < lam).sum())
            rows.append({
                "lam": float(lam), "bc": bc, "fd_count": n_fd,
                "lower": rep.lower_count, "upper": rep.upper_count,
                "ok": bool(rep.lower_count <= n_fd <= rep.upper_count),
            })
    interlacing = [
        {"n": i + 1, "neumann_next": float(neu[i + 1]), "dirichlet": float(dir_[i]),
         "ok": bool(neu[i + 1] <= dir_[i] + (neu_bar[i + 1] + dir_bar[i]))}
        for i in range(min(len(neu) - 1, len(dir_)))
    ]
    return {
        "rows": rows,
        "skipped": [float(s) for s in skipped],
        "interlacing": interlacing,
        "neumann": neu.tolist(), "neumann_bars": neu_bar.tolist(),
        "dirichlet": dir_.tolist(), "dirichlet_bars": dir_bar.tolist(),
        "all_ok": bool(all(r["ok"] for r in rows)
                       and all(i["ok"] for i in interlacing)),
    }
