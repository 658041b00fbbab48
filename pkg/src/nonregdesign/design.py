"""Optimal designs for non-regular polynomial regression.

A design is a finitely supported probability measure on [-A, A], restricted
to the balanced class (mean-zero support).  Its information in direction u
is the weighted power sum

    J_xi(u) = J_tilde * sum_i w_i |f(x_i)' u|^alpha,      f(x) = (1, x, ..., x^p),

and the design criterion is the direction-free value J_xi = inf_{|u|=1} J_xi(u),
a concave function of the weights.  The optimizer is a Kelley cutting-plane
scheme on the weight simplex over a candidate grid: each master step solves a
small LP (max t s.t. every accumulated cut exceeds t), and each separation
step finds the worst direction of the current design by a dense hemisphere
scan with a derivative-free polish.  At alpha = 2 the same machinery
maximizes the minimum eigenvalue of the moment matrix, i.e. E-optimality,
which serves as the regular comparator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize as _nm_minimize
from scipy.stats import norm as _norm
from scipy.stats import qmc as _qmc

from .hellinger import InfoMethod, InfoResult
from .lp import Domain, LinearProgram, LpStatus, Sense, solve_lp

_WEIGHT_TOL = 1e-10
_BALANCE_TOL = 1e-8
_DISTINCT_TOL = 1e-12


@dataclass(frozen=True)
class Design:
    """Finitely supported balanced design on [-A, A].

    Balance (sum w_i x_i = 0) is the class the optimizer searches over;
    pass require_balance=False to carry an unbalanced measure, e.g. as
    input to symmetrize.
    """

    points: tuple[tuple[float, float], ...]
    A: float
    max_support: int

    def __init__(self, points, A, max_support=None, *, require_balance=True) -> None:
        pts = tuple((float(x), float(w)) for x, w in points)
        A = float(A)
        if A <= 0.0:
            raise ValueError(f"A must be positive, got {A}")
        if not pts:
            raise ValueError("design needs at least one support point")
        xs = np.array([x for x, _ in pts])
        ws = np.array([w for _, w in pts])
        if np.any(np.abs(xs) > A + 1e-12):
            raise ValueError(f"support points must lie in [-{A}, {A}]")
        if np.any(ws < 0.0):
            raise ValueError("weights must be non-negative")
        if abs(float(ws.sum()) - 1.0) > _WEIGHT_TOL:
            raise ValueError(f"weights sum to {ws.sum()!r}, not 1")
        if require_balance and abs(float(ws @ xs)) > _BALANCE_TOL:
            raise ValueError(f"design not balanced: sum w_i x_i = {ws @ xs!r}")
        if len(pts) > 1:
            gaps = np.diff(np.sort(xs))
            if np.any(gaps <= _DISTINCT_TOL):
                raise ValueError("support points must be distinct")
        if max_support is None:
            max_support = len(pts)
        if len(pts) > max_support:
            raise ValueError(f"support size {len(pts)} exceeds {max_support}")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "max_support", int(max_support))

    @property
    def xs(self) -> np.ndarray:
        return np.array([x for x, _ in self.points])

    @property
    def ws(self) -> np.ndarray:
        return np.array([w for _, w in self.points])

    def as_json_dict(self) -> dict:
        return {
            "A": self.A,
            "points": [{"x": x, "w": w} for x, w in self.points],
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "Design":
        try:
            a = payload["A"]
            pts = [(p["x"], p["w"]) for p in payload["points"]]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed design payload: {exc}") from exc
        return cls(pts, a)


@dataclass(frozen=True)
class SphereSearchConfig:
    """Hemisphere grid + polish settings for the nonsmooth sphere minimum.

    The directional objective has kinks wherever f(x_i)'u = 0, so a dense
    coarse grid guards against missed kink minima before the local polish.
    """

    angular_step_deg: float = 0.05  # d = 2
    hemisphere_points: int = 20_000  # d >= 3
    polish_iters: int = 200
    tol: float = 1e-10

    def __post_init__(self) -> None:
        if self.angular_step_deg <= 0.0 or self.hemisphere_points < 8:
            raise ValueError("grid resolution out of range")
        if self.tol <= 0.0:
            raise ValueError("tolerance must be positive")


@dataclass(frozen=True)
class CuttingPlaneConfig:
    gap_tol: float = 1e-5  # relative
    max_cuts: int = 500
    drop_slack_factor: float = 10.0
    drop_patience: int = 5
    sphere: SphereSearchConfig = field(default_factory=SphereSearchConfig)

    def __post_init__(self) -> None:
        if self.gap_tol <= 0.0 or self.max_cuts < 4:
            raise ValueError("bad cutting-plane configuration")


@dataclass(frozen=True)
class DesignSolution:
    design: Design
    info: float
    worst_direction: tuple[float, ...]
    cuts_used: int
    gap: float


def regressor_matrix(xs: np.ndarray, degree: int) -> np.ndarray:
    """Rows f(x_i)' = (1, x_i, ..., x_i^degree)."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    return np.vander(xs, degree + 1, increasing=True)


def _check_unit(u: np.ndarray) -> np.ndarray:
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if abs(np.linalg.norm(u) - 1.0) > 1e-9:
        raise ValueError(f"direction must be a unit vector, got norm {np.linalg.norm(u)}")
    return u


def design_info_directional(
    design: Design, u, alpha: float, j_tilde: float, degree: int
) -> float:
    """J_tilde * sum_i w_i |f(x_i)'u|^alpha."""
    u = _check_unit(u)
    if not 0.0 < alpha <= 2.0:
        raise ValueError(f"alpha must lie in (0, 2], got {alpha}")
    f = regressor_matrix(design.xs, degree)
    if f.shape[1] != u.shape[0]:
        raise ValueError(f"direction has dimension {u.shape[0]}, expected {f.shape[1]}")
    return float(j_tilde * (design.ws @ np.abs(f @ u) ** alpha))


def _directional_batch(
    f: np.ndarray, ws: np.ndarray, us: np.ndarray, alpha: float, j_tilde: float
) -> np.ndarray:
    return j_tilde * (np.abs(us @ f.T) ** alpha @ ws)


def sphere_grid(d: int, config: SphereSearchConfig) -> np.ndarray:
    """Quasi-uniform unit vectors covering one hemisphere."""
    if d == 2:
        n = max(8, int(round(180.0 / config.angular_step_deg)))
        angles = np.arange(n) * (math.pi / n)
        return np.stack([np.cos(angles), np.sin(angles)], axis=1)
    n = config.hemisphere_points
    if d == 3:
        # golden-angle spiral on the upper hemisphere
        i = np.arange(n)
        z = (i + 0.5) / n
        phi = i * (math.pi * (3.0 - math.sqrt(5.0)))
        r = np.sqrt(np.clip(1.0 - z * z, 0.0, 1.0))
        return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)
    # d >= 4: low-discrepancy normals, normalized, canonical hemisphere
    m = int(math.ceil(math.log2(n + 2)))
    raw = _qmc.Sobol(d, scramble=False).random_base2(m)
    g = _norm.ppf(np.clip(raw, 1e-12, 1.0 - 1e-12))
    norms = np.linalg.norm(g, axis=1)
    g = (g[norms > 1e-9] / norms[norms > 1e-9, None])[:n]
    flip = np.sign(g[:, 0])
    flip[flip == 0.0] = 1.0
    return g * flip[:, None]


def _canonical_sign(u: np.ndarray) -> np.ndarray:
    for v in u:
        if v != 0.0:
            return u if v > 0.0 else -u
    return u


def _argmin_lex(values: np.ndarray, us: np.ndarray) -> int:
    """Index of the minimum; exact ties resolved by lexicographic direction."""
    best = float(np.min(values))
    idx = np.flatnonzero(values == best)
    if idx.size == 1:
        return int(idx[0])
    order = np.lexsort(us[idx].T[::-1])
    return int(idx[order[0]])


def min_over_sphere(
    objective,
    d: int,
    config: SphereSearchConfig | None = None,
    batch_objective=None,
    extra_candidates=None,
) -> tuple[np.ndarray, float]:
    """Minimize a (possibly nonsmooth) even function over the unit sphere.

    Coarse hemisphere scan, then a Nelder-Mead polish started from the best
    grid point and its four nearest grid neighbours.  Callers that know where
    the objective kinks (e.g. the exact null directions of a piecewise-linear
    criterion) can pass them as ``extra_candidates``; they are evaluated along
    with the grid.  The returned value is never above any grid evaluation.
    """
    if not 2 <= d <= 6:
        raise ValueError(f"sphere dimension {d} outside supported range 2..6")
    config = config or SphereSearchConfig()
    us = sphere_grid(d, config)
    if extra_candidates is not None and len(extra_candidates):
        extra = np.atleast_2d(np.asarray(extra_candidates, dtype=float))
        extra = extra / np.linalg.norm(extra, axis=1, keepdims=True)
        us = np.concatenate([us, extra], axis=0)
    if batch_objective is not None:
        vals = np.asarray(batch_objective(us), dtype=float)
    else:
        vals = np.array([objective(u) for u in us], dtype=float)
    i_best = _argmin_lex(vals, us)

    dist = np.linalg.norm(us - us[i_best], axis=1)
    starts = list(np.argsort(dist, kind="stable")[:5])

    def g(v: np.ndarray) -> float:
        nv = np.linalg.norm(v)
        if nv < 1e-8:
            return np.inf
        return float(objective(v / nv))

    best_u = us[i_best]
    best_val = float(vals[i_best])
    for i in starts:
        res = _nm_minimize(
            g,
            us[i],
            method="Nelder-Mead",
            options={
                "maxiter": config.polish_iters,
                "xatol": config.tol,
                "fatol": config.tol,
            },
        )
        if np.isfinite(res.fun) and res.fun < best_val:
            nv = np.linalg.norm(res.x)
            if nv >= 1e-8:
                best_val = float(res.fun)
                best_u = res.x / nv
    return _canonical_sign(best_u), best_val


def _moment_matrix(design: Design, degree: int) -> np.ndarray:
    f = regressor_matrix(design.xs, degree)
    return f.T @ (design.ws[:, None] * f)


def _kink_candidates(f: np.ndarray, alpha: float) -> np.ndarray | None:
    """Exact null directions of the regressor rows, where |f'u|^alpha kinks.

    For alpha <= 1 the directional objective is non-differentiable on the
    hyperplanes f(x_i)'u = 0 and its sphere minima sit on their pairwise
    intersections; grid-plus-polish alone lands within grid resolution of
    those points but not on them.  Returns unit candidates for d in {2, 3},
    None otherwise (higher d needs (d-1)-fold intersections, out of scope).
    """
    if alpha > 1.0:
        return None
    d = f.shape[1]
    if d == 2:
        cand = np.stack([-f[:, 1], f[:, 0]], axis=1)
    elif d == 3:
        i, j = np.triu_indices(f.shape[0], k=1)
        if i.size == 0:
            return None
        cand = np.cross(f[i], f[j])
    else:
        return None
    norms = np.linalg.norm(cand, axis=1)
    scale = np.linalg.norm(f, axis=1)
    if d == 3:
        keep = norms > 1e-12 * np.maximum(scale[i] * scale[j], 1.0)
    else:
        keep = norms > 1e-12 * np.maximum(scale, 1.0)
    if not np.any(keep):
        return None
    return cand[keep] / norms[keep, None]


def design_info(
    design: Design,
    alpha: float,
    j_tilde: float,
    degree: int,
    config: SphereSearchConfig | None = None,
) -> InfoResult:
    """Direction-free design information inf_u J_xi(u) with its minimizer.

    A design whose support cannot identify all degree+1 coefficients has a
    direction annihilating every support point; its information is exactly 0
    and the result carries the degeneracy flag.
    """
    if not 0.0 < alpha <= 2.0:
        raise ValueError(f"alpha must lie in (0, 2], got {alpha}")
    if j_tilde <= 0.0:
        raise ValueError("j_tilde must be positive")
    d = degree + 1
    m = _moment_matrix(design, degree)
    eigvals, eigvecs = np.linalg.eigh(m)
    if eigvals[0] <= 1e-13 * max(1.0, eigvals[-1]):
        u0 = _canonical_sign(eigvecs[:, 0])
        return InfoResult(
            alpha=alpha,
            J=0.0,
            direction=tuple(u0),
            method=InfoMethod.SPHERE_SEARCH,
            degenerate=True,
        )
    f = regressor_matrix(design.xs, degree)
    ws = design.ws

    def objective(u):
        return float(j_tilde * (ws @ np.abs(f @ u) ** alpha))

    def batch(us):
        return _directional_batch(f, ws, us, alpha, j_tilde)

    u_star, value = min_over_sphere(
        objective, d, config, batch_objective=batch,
        extra_candidates=_kink_candidates(f, alpha),
    )
    return InfoResult(
        alpha=alpha,
        J=value,
        direction=tuple(u_star),
        method=InfoMethod.SPHERE_SEARCH,
        degenerate=False,
    )


def direction_free_info_psi(
    design: Design,
    d_psi,
    alpha: float,
    j_tilde: float,
    degree: int,
    config: SphereSearchConfig | None = None,
) -> float:
    """inf_u J_xi(u) / ||D_psi u||^alpha, skipping near-null D_psi directions."""
    d_psi = np.atleast_2d(np.asarray(d_psi, dtype=float))
    d = degree + 1
    if d_psi.shape[1] != d:
        raise ValueError(f"d_psi has {d_psi.shape[1]} columns, expected {d}")
    if np.linalg.matrix_rank(d_psi) < d_psi.shape[0]:
        raise ValueError("d_psi must have full row rank")
    f = regressor_matrix(design.xs, degree)
    ws = design.ws

    def objective(u):
        du = np.linalg.norm(d_psi @ u)
        if du < 1e-9:
            return np.inf
        return float(j_tilde * (ws @ np.abs(f @ u) ** alpha)) / du**alpha

    def batch(us):
        du = np.linalg.norm(us @ d_psi.T, axis=1)
        num = _directional_batch(f, ws, us, alpha, j_tilde)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(du < 1e-9, np.inf, num / du**alpha)
        return out

    _, value = min_over_sphere(
        objective, d, config, batch_objective=batch,
        extra_candidates=_kink_candidates(f, alpha),
    )
    if not np.isfinite(value):
        raise ValueError("every direction was skipped; d_psi is numerically zero")
    return value


def _merge_points(points: list[tuple[float, float]]) -> list[tuple[float, float]]:
    pts = sorted(points)
    merged: list[tuple[float, float]] = []
    for x, w in pts:
        if merged and abs(x - merged[-1][0]) <= _DISTINCT_TOL:
            merged[-1] = (merged[-1][0], merged[-1][1] + w)
        else:
            merged.append((x, w))
    return merged


def symmetrize(design: Design) -> Design:
    """Half-mixture of the design with its reflection x -> -x.

    Accepts unbalanced input and always returns a balanced (symmetric)
    design.  Never decreases the design information, so symmetric designs
    form a complete class for this problem.
    """
    half = [(x, 0.5 * w) for x, w in design.points]
    half += [(-x, 0.5 * w) for x, w in design.points]
    merged = _merge_points(half)
    return Design(merged, design.A, max_support=max(design.max_support, len(merged)))


def uniform_design(A: float, k: int) -> Design:
    """k equally spaced, equally weighted points on [-A, A] inclusive."""
    if k < 2:
        raise ValueError("uniform design needs at least 2 points")
    xs = np.linspace(-A, A, k)
    return Design([(float(x), 1.0 / k) for x in xs], A)


def default_grid(A: float, size: int = 101) -> np.ndarray:
    """Equally spaced candidate grid on [-A, A]; odd size keeps 0 on it."""
    if size < 3 or size > 201:
        raise ValueError("grid size must lie in [3, 201]")
    if size % 2 == 0:
        size += 1
    return np.linspace(-A, A, size)


def _validate_grid(grid: np.ndarray) -> tuple[np.ndarray, float]:
    grid = np.unique(np.asarray(grid, dtype=float))
    if grid.size > 201:
        raise ValueError(f"candidate grid size {grid.size} exceeds 201")
    a = float(np.max(np.abs(grid)))
    if a <= 0.0:
        raise ValueError("grid must span a nondegenerate interval")
    if not (np.any(np.abs(grid - a) < 1e-12) and np.any(np.abs(grid + a) < 1e-12)):
        raise ValueError("grid must include both endpoints -A and A")
    if not np.any(np.abs(grid) < 1e-12):
        raise ValueError("grid must include 0")
    return grid, a


def _seed_directions(d: int) -> list[np.ndarray]:
    dirs = [np.eye(d)[i] for i in range(d)]
    ones = np.ones(d) / math.sqrt(d)
    dirs.append(ones)
    for i in range(1, d):
        v = np.ones(d)
        v[i] = -1.0
        dirs.append(v / np.linalg.norm(v))
    return dirs


def _design_from_weights(
    xs: np.ndarray, ws: np.ndarray, a: float, weight_floor: float = 1e-12
) -> Design:
    keep = ws > weight_floor
    xs_k = xs[keep]
    ws_k = ws[keep]
    ws_k = ws_k / ws_k.sum()
    return Design(list(zip(xs_k, ws_k)), a, max_support=max(len(xs_k), 1))


def _solve_master(
    phi: np.ndarray, xs_vars: np.ndarray, balance: bool, strict: bool = True
) -> tuple[np.ndarray, float] | None:
    """max t s.t. phi_u . w >= t per cut, w in the (balanced) simplex."""
    n_cuts, g = phi.shape
    n = g + 1  # weights + t
    rows = []
    rhs = []
    senses = []
    for k in range(n_cuts):
        rows.append(np.concatenate([phi[k], [-1.0]]))
        rhs.append(0.0)
        senses.append(Sense.GE)
    rows.append(np.concatenate([np.ones(g), [0.0]]))
    rhs.append(1.0)
    senses.append(Sense.EQ)
    if balance:
        rows.append(np.concatenate([xs_vars, [0.0]]))
        rhs.append(0.0)
        senses.append(Sense.EQ)
    domains = [Domain.NON_NEGATIVE] * g + [Domain.FREE]
    c = np.zeros(n)
    c[-1] = 1.0
    lp = LinearProgram(c, np.array(rows), np.array(rhs), senses, domains, maximize=True)
    sol = solve_lp(lp)
    if sol.status is not LpStatus.OPTIMAL:
        if strict:
            raise AssertionError(f"master LP returned {sol.status}")
        return None
    return sol.x[:g], float(sol.x[g])


def _solve_tiebreak(
    phi: np.ndarray, xs_vars: np.ndarray, balance: bool, t_target: float
) -> np.ndarray | None:
    """Among weight vectors with all cuts >= t_target, maximize spread.

    Vertex solutions concentrate weight on extreme support, realising the
    smaller-support preference among near-ties.
    """
    n_cuts, g = phi.shape
    rows = [phi[k] for k in range(n_cuts)]
    rhs = [t_target] * n_cuts
    senses: list[Sense] = [Sense.GE] * n_cuts
    rows.append(np.ones(g))
    rhs.append(1.0)
    senses.append(Sense.EQ)
    if balance:
        rows.append(xs_vars)
        rhs.append(0.0)
        senses.append(Sense.EQ)
    lp = LinearProgram(
        xs_vars**2, np.array(rows), np.array(rhs), senses, maximize=True
    )
    sol = solve_lp(lp)
    if sol.status is not LpStatus.OPTIMAL:
        return None
    return sol.x


def optimize_design_cutting_plane(
    grid,
    alpha: float,
    j_tilde: float,
    degree: int,
    symmetric_only: bool = False,
    config: CuttingPlaneConfig | None = None,
) -> DesignSolution:
    """Maximize the design information over weights on a candidate grid.

    Kelley's method on the weight simplex: the master LP maximizes the worst
    accumulated cut, the separation oracle is the sphere minimizer at the
    incumbent design.  Cuts slack for several consecutive iterations are
    dropped to keep the LPs small.  With ``symmetric_only`` the variables
    are weights on {0} and +-x pairs, making balance automatic.
    """
    config = config or CuttingPlaneConfig()
    if not 0.0 < alpha <= 2.0:
        raise ValueError(f"alpha must lie in (0, 2], got {alpha}")
    if j_tilde <= 0.0:
        raise ValueError("j_tilde must be positive")
    grid, a = _validate_grid(np.asarray(grid, dtype=float))
    d = degree + 1

    if symmetric_only:
        pos = grid[grid > 1e-15]
        var_xs = np.concatenate([[0.0], pos])
        f_pos = regressor_matrix(var_xs, degree)
        f_neg = regressor_matrix(-var_xs, degree)

        def cut_row(u: np.ndarray) -> np.ndarray:
            return (
                0.5
                * j_tilde
                * (np.abs(f_pos @ u) ** alpha + np.abs(f_neg @ u) ** alpha)
            )

        def to_design(w: np.ndarray) -> Design:
            pts: list[tuple[float, float]] = []
            for x, wt in zip(var_xs, w):
                if x == 0.0:
                    pts.append((0.0, wt))
                else:
                    pts.append((x, 0.5 * wt))
                    pts.append((-x, 0.5 * wt))
            xs_full = np.array([p[0] for p in pts])
            ws_full = np.array([p[1] for p in pts])
            return _design_from_weights(xs_full, ws_full, a)

        balance = False
    else:
        var_xs = grid
        f_grid = regressor_matrix(var_xs, degree)

        def cut_row(u: np.ndarray) -> np.ndarray:
            return j_tilde * np.abs(f_grid @ u) ** alpha

        def to_design(w: np.ndarray) -> Design:
            return _design_from_weights(var_xs, w, a)

        balance = True

    cuts: list[np.ndarray] = [np.asarray(u, float) for u in _seed_directions(d)]
    phi_rows: list[np.ndarray] = [cut_row(u) for u in cuts]
    slack_runs: list[int] = [0 for _ in cuts]

    best: tuple[float, Design, np.ndarray, np.ndarray] | None = None
    t_upper = math.inf
    gap_abs = math.inf
    while True:
        phi = np.array(phi_rows)
        w, t_upper = _solve_master(phi, var_xs, balance)
        incumbent = to_design(w)
        res = design_info(incumbent, alpha, j_tilde, degree, config.sphere)
        val = res.J
        u_star = np.asarray(res.direction, dtype=float)
        if best is None or val > best[0]:
            best = (val, incumbent, u_star, w)
        tol_abs = config.gap_tol * max(1.0, abs(t_upper))
        gap_abs = max(t_upper - best[0], 0.0)
        if gap_abs <= tol_abs or len(cuts) >= config.max_cuts:
            break
        # cut management: age out persistently slack cuts
        slack = phi @ w - t_upper
        thresh = config.drop_slack_factor * tol_abs
        for k in range(len(cuts)):
            slack_runs[k] = slack_runs[k] + 1 if slack[k] > thresh else 0
        if len(cuts) > d + 1:
            keep = [
                k
                for k in range(len(cuts))
                if slack_runs[k] < config.drop_patience or k >= len(cuts) - (d + 1)
            ]
            if len(keep) < len(cuts):
                cuts = [cuts[k] for k in keep]
                phi_rows = [phi_rows[k] for k in keep]
                slack_runs = [slack_runs[k] for k in keep]
        # separation: add the worst direction of the incumbent
        if any(abs(float(u_star @ u)) > 1.0 - 1e-12 for u in cuts):
            break  # direction already cut: grid resolution limit reached
        cuts.append(u_star)
        phi_rows.append(cut_row(u_star))
        slack_runs.append(0)

    val, incumbent, u_star, w_inc = best
    # Tie-break: the optimum can be a large flat face (piecewise-linear
    # criterion), so maximize the spread sum w_i x_i^2 over designs whose
    # *verified* information stays within tolerance — itself a small
    # cutting-plane loop, since the cut polytope overestimates that face.
    tol_abs = config.gap_tol * max(1.0, abs(t_upper))
    t_target = val - 1e-9 * max(1.0, abs(val))
    tie_phi = list(phi_rows)
    tie_cuts = list(cuts)
    for _ in range(50):
        w_tie = _solve_tiebreak(np.array(tie_phi), var_xs, balance, t_target)
        if w_tie is None:
            break
        cand = to_design(w_tie)
        res = design_info(cand, alpha, j_tilde, degree, config.sphere)
        if res.J >= val - tol_abs:
            incumbent = cand
            val = res.J
            u_star = np.asarray(res.direction, dtype=float)
            w_inc = w_tie
            break
        u_new = np.asarray(res.direction, dtype=float)
        if any(abs(float(u_new @ u)) > 1.0 - 1e-12 for u in tie_cuts):
            break
        tie_cuts.append(u_new)
        tie_phi.append(cut_row(u_new))
    # Condense: drop near-zero weights and re-solve the master on the kept
    # support (the accumulated cuts pin the active directions), accepting the
    # smaller design only if its re-verified information is within tolerance.
    for floor in (1e-6, 1e-4, 1e-3):
        keep = w_inc > floor
        if int(keep.sum()) < d or bool(keep.all()):
            continue
        restricted = _solve_master(
            np.array(tie_phi)[:, keep], var_xs[keep], balance, strict=False
        )
        if restricted is None:
            continue
        w_full = np.zeros_like(w_inc)
        w_full[keep] = restricted[0]
        cand = to_design(w_full)
        if len(cand.points) >= len(incumbent.points):
            continue
        res = design_info(cand, alpha, j_tilde, degree, config.sphere)
        if res.J >= val - tol_abs:
            incumbent = cand
            val = res.J
            u_star = np.asarray(res.direction, dtype=float)
            w_inc = w_full
    gap_abs = max(t_upper - val, 0.0)
    return DesignSolution(
        design=incumbent,
        info=val,
        worst_direction=tuple(u_star),
        cuts_used=len(cuts),
        gap=gap_abs,
    )


def _three_point_inner(a: float, alpha: float, config: SphereSearchConfig):
    """f(pi) = inf_u [ pi |u_1|^alpha + (1-pi)/2 (|f(A)'u|^alpha + |f(-A)'u|^alpha) ]."""
    rows = regressor_matrix(np.array([0.0, a, -a]), 2)
    f_a, f_ma = rows[1], rows[2]
    kinks = _kink_candidates(rows, alpha)

    def f_of_pi(pi: float) -> float:
        def objective(u):
            return float(
                pi * abs(u[0]) ** alpha
                + 0.5
                * (1.0 - pi)
                * (abs(f_a @ u) ** alpha + abs(f_ma @ u) ** alpha)
            )

        def batch(us):
            return (
                pi * np.abs(us[:, 0]) ** alpha
                + 0.5
                * (1.0 - pi)
                * (np.abs(us @ f_a) ** alpha + np.abs(us @ f_ma) ** alpha)
            )

        _, value = min_over_sphere(
            objective, 3, config, batch_objective=batch, extra_candidates=kinks
        )
        return value

    return f_of_pi


def pi_curve(
    a: float,
    alphas,
    config: SphereSearchConfig | None = None,
    pi_tol: float = 1e-5,
) -> list[tuple[float, float, float]]:
    """Optimal weight at zero for the symmetric three-point quadratic design.

    For each alpha, maximizes the concave map pi -> f(pi) (a pointwise min
    of functions affine in pi) by ternary search; exact ties resolve toward
    the smaller pi.  Returns (alpha, pi, f(pi)) rows.
    """
    if a <= 0.0:
        raise ValueError("A must be positive")
    config = config or SphereSearchConfig()
    out = []
    for alpha in np.atleast_1d(np.asarray(alphas, dtype=float)):
        if not 0.0 < alpha <= 2.0:
            raise ValueError(f"alpha must lie in (0, 2], got {alpha}")
        f_of_pi = _three_point_inner(a, float(alpha), config)
        lo, hi = 0.0, 1.0
        while hi - lo > pi_tol:
            m1 = lo + (hi - lo) / 3.0
            m2 = hi - (hi - lo) / 3.0
            if f_of_pi(m1) < f_of_pi(m2):
                lo = m1
            else:
                hi = m2  # ties move the upper end: smaller pi wins
        pi_star = 0.5 * (lo + hi)
        out.append((float(alpha), float(pi_star), float(f_of_pi(pi_star))))
    return out


def e_optimal_design(
    a: float,
    degree: int,
    config: CuttingPlaneConfig | None = None,
    grid_size: int = 101,
) -> DesignSolution:
    """Maximize lambda_min of the moment matrix (the regular comparator).

    E-optimality is exactly the alpha = 2 case of the information criterion,
    so this reuses the cutting-plane solver in symmetric mode.
    """
    if degree not in (1, 2):
        raise ValueError(f"degree must be 1 or 2, got {degree}")
    grid = default_grid(a, grid_size)
    return optimize_design_cutting_plane(
        grid, alpha=2.0, j_tilde=1.0, degree=degree, symmetric_only=True, config=config
    )
