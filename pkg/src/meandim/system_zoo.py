"""Computable dynamical systems, metrics and potentials.

Every system is a concrete, finitary presentation: points are nested
tuples of real coordinates, maps and metrics are plain callables, and
sampling is seeded.  Shift-type systems store truncated words, so each
carries a horizon (number of valid orbit points) and a truncation
tolerance; downstream quantities are only claimed up to that tolerance.

Systems built here:

* ``make_finite_system``  -- explicit metric matrix + index map (the exact
  test substrate: every pressure quantity on it is enumerable).
* ``make_full_shift``     -- words over {0..m-1}, first-disagreement metric.
* ``make_grid_shift``     -- words over a uniform grid in [0,1]^D with the
  weighted sup metric d(x,y) = max_k 2^-k * ||x_k - y_k||_inf.
* ``make_product``        -- max metric, summed potential.
* ``make_iterate``        -- k-fold map with the k-step summed potential.
"""

from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Callable, Optional, Sequence

import numpy as np

FINITE_HORIZON = 10**9  # finite systems never truncate


class MetricError(ValueError):
    """Raised when a distance matrix fails the metric axioms."""


class HorizonExceededError(RuntimeError):
    """Raised when an orbit request would cross a system's horizon."""


@dataclass(frozen=True)
class Point:
    """A phase-space point: a (possibly nested) tuple of coordinates.

    Finite systems use ``(index,)``; shift systems use a tuple of letters
    (each letter an int or a D-tuple of floats); product systems pair the
    two factor codes.
    """

    code: tuple

    def __len__(self):
        return len(self.code)


def flat_coords(code):
    """All scalar coordinates of a nested code tuple, left to right."""
    out = []
    stack = [code]
    while stack:
        c = stack.pop()
        if isinstance(c, tuple):
            stack.extend(reversed(c))
        else:
            out.append(float(c))
    return out


@dataclass(frozen=True, eq=False)
class System:
    """A computable dynamical system (X, T, d) with sampling.

    ``horizon`` counts the valid orbit points x, Tx, ..., T^(horizon-1) x;
    ``trunc_tol`` bounds the metric error introduced by word truncation.
    ``pairwise_dist``, when present, returns the full distance matrix of a
    point list in one vectorized call; the generic fallback is the scalar
    ``dist``.
    """

    name: str
    dim_hint: int
    apply: Callable[[Point], Point]
    dist: Callable[[Point, Point], float]
    sample: Callable[[int, int], list]
    horizon: int
    trunc_tol: float
    lip_map: Optional[float] = None
    pairwise_dist: Optional[Callable[[Sequence[Point]], np.ndarray]] = None
    points: Optional[tuple] = None  # full point list when the space is finite


@dataclass(frozen=True, eq=False)
class Potential:
    """A real observable with an honest Lipschitz constant and sup bound.

    ``lip`` must be a valid upper bound: the finite-level sandwich checks
    use gamma(eps) = lip * eps as the modulus of continuity, which is only
    sound if lip really dominates |f(x)-f(y)| / d(x,y).
    """

    eval: Callable[[Point], float]
    lip: float
    sup_norm: float
    name: str


# ---------------------------------------------------------------------------
# finite systems
# ---------------------------------------------------------------------------


def check_metric_matrix(dm: np.ndarray):
    """Validate symmetry, zero diagonal and triangle inequality (1e-12).

    Raises MetricError naming the violating entry or triple.
    """
    dm = np.asarray(dm, dtype=float)
    n = dm.shape[0]
    if dm.ndim != 2 or dm.shape[1] != n:
        raise MetricError("distance matrix must be square")
    if np.any(dm < 0):
        i, j = np.argwhere(dm < 0)[0]
        raise MetricError(f"negative distance at ({i},{j})")
    if np.any(np.diag(dm) != 0):
        i = int(np.argwhere(np.diag(dm) != 0)[0])
        raise MetricError(f"nonzero diagonal at ({i},{i})")
    if not np.array_equal(dm, dm.T):
        i, j = np.argwhere(dm != dm.T)[0]
        raise MetricError(f"asymmetry at ({i},{j})")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if dm[i, j] > dm[i, k] + dm[k, j] + 1e-12:
                    raise MetricError(
                        f"triangle violation at triple ({i},{j},{k}): "
                        f"{dm[i, j]} > {dm[i, k]} + {dm[k, j]}"
                    )


def make_finite_system(dist_matrix, map_table, name="finite") -> System:
    """Finite system from an explicit metric matrix and an index map.

    Points are the matrix indices.  ``sample`` returns all points (the
    space is the sample).  lip_map is computed exactly as the max of
    d(Tx,Ty)/d(x,y) over distinct pairs (0 for a single point).
    """
    dm = np.asarray(dist_matrix, dtype=float)
    check_metric_matrix(dm)
    n = dm.shape[0]
    table = [int(t) for t in map_table]
    if len(table) != n or any(not (0 <= t < n) for t in table):
        raise ValueError("map_table must map indices {0..n-1} into themselves")

    pts = tuple(Point((i,)) for i in range(n))
    tarr = np.array(table, dtype=int)

    lip = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            if dm[i, j] > 0:
                lip = max(lip, dm[table[i], table[j]] / dm[i, j])

    def apply(p: Point) -> Point:
        return pts[table[p.code[0]]]

    def dist(p: Point, q: Point) -> float:
        return float(dm[p.code[0], q.code[0]])

    def sample(count: int, seed: int) -> list:
        return list(pts)

    def pairwise(points: Sequence[Point]) -> np.ndarray:
        idx = np.array([p.code[0] for p in points], dtype=int)
        return dm[np.ix_(idx, idx)]

    return System(
        name=name,
        dim_hint=0,
        apply=apply,
        dist=dist,
        sample=sample,
        horizon=FINITE_HORIZON,
        trunc_tol=0.0,
        lip_map=lip,
        pairwise_dist=pairwise,
        points=pts,
    )


def metric_closure(mat: np.ndarray) -> np.ndarray:
    """Shortest-path (min-plus) closure: repairs triangle violations."""
    dm = np.asarray(mat, dtype=float).copy()
    n = dm.shape[0]
    dm = np.minimum(dm, dm.T)
    np.fill_diagonal(dm, 0.0)
    for k in range(n):
        dm = np.minimum(dm, dm[:, k : k + 1] + dm[k : k + 1, :])
    return dm


def random_finite_system(size: int, seed: int, low=0.5, high=2.0) -> System:
    """Seeded random finite metric space (closure-repaired) with a random map."""
    rng = np.random.default_rng(seed)
    raw = rng.uniform(low, high, size=(size, size))
    raw = (raw + raw.T) / 2.0
    np.fill_diagonal(raw, 0.0)
    dm = metric_closure(raw)
    table = rng.integers(0, size, size=size)
    return make_finite_system(dm, table, name=f"finite{size}[seed={seed}]")


# ---------------------------------------------------------------------------
# shift systems
# ---------------------------------------------------------------------------


def _shift_apply(p: Point) -> Point:
    if len(p.code) < 2:
        raise HorizonExceededError("word too short to shift")
    return Point(p.code[1:])


def _first_disagreement(a: np.ndarray, b: np.ndarray):
    # a, b: (N, L) equal-letter comparison; returns (N, N) first index
    # of disagreement and a mask of pairs that never disagree.
    neq = a[:, None, :] != b[None, :, :]
    any_neq = neq.any(axis=2)
    first = neq.argmax(axis=2)
    return first, ~any_neq


def make_full_shift(m: int, L: int) -> System:
    """Full shift on m letters seen through words of length L.

    d(x,y) = 2^-k with k the first index of disagreement (0 if equal on
    all letters); the map drops the first letter, so horizon = L orbit
    points and trunc_tol = 2^-L.
    """
    if m < 2 or L < 2:
        raise ValueError("need m >= 2 and L >= 2")

    def dist(p: Point, q: Point) -> float:
        la, lb = p.code, q.code
        for k in range(min(len(la), len(lb))):
            if la[k] != lb[k]:
                return 2.0 ** (-k)
        return 0.0

    def sample(count: int, seed: int) -> list:
        rng = np.random.default_rng(seed)
        w = rng.integers(0, m, size=(count, L))
        return [Point(tuple(int(a) for a in row)) for row in w]

    def pairwise(points: Sequence[Point]) -> np.ndarray:
        arr = np.array([p.code for p in points], dtype=np.int64)
        first, equal = _first_disagreement(arr, arr)
        out = 2.0 ** (-first.astype(float))
        out[equal] = 0.0
        return out

    return System(
        name=f"shift{m}",
        dim_hint=0,
        apply=_shift_apply,
        dist=dist,
        sample=sample,
        horizon=L,
        trunc_tol=2.0 ** (-L),
        lip_map=2.0,
        pairwise_dist=pairwise,
    )


def grid_alphabet(D: int, m: int) -> list:
    """Uniform grid {0, 1/(m-1), ..., 1}^D as letter tuples."""
    axis = [i / (m - 1) for i in range(m)]
    return [tuple(combo) for combo in iproduct(axis, repeat=D)]


def make_grid_shift(D: int, m: int, L: int) -> System:
    """Shift over the uniform grid alphabet in [0,1]^D.

    d(x,y) = max_k 2^-k * ||x_k - y_k||_inf; a desk-scale stand-in for
    the positive-dimension shifts the theory is aimed at.
    """
    if D < 1 or m < 2 or L < 2:
        raise ValueError("need D >= 1, m >= 2, L >= 2")
    alphabet = grid_alphabet(D, m)

    def dist(p: Point, q: Point) -> float:
        best = 0.0
        for k in range(min(len(p.code), len(q.code))):
            a, b = p.code[k], q.code[k]
            cheb = max(abs(a[t] - b[t]) for t in range(D))
            best = max(best, 2.0 ** (-k) * cheb)
        return best

    def sample(count: int, seed: int) -> list:
        rng = np.random.default_rng(seed)
        idx = rng.integers(0, len(alphabet), size=(count, L))
        return [Point(tuple(alphabet[i] for i in row)) for row in idx]

    def pairwise(points: Sequence[Point]) -> np.ndarray:
        arr = np.array([p.code for p in points], dtype=float)  # (N, L', D)
        n_letters = arr.shape[1]
        out = np.zeros((arr.shape[0], arr.shape[0]))
        for k in range(n_letters):
            cheb = np.max(
                np.abs(arr[:, None, k, :] - arr[None, :, k, :]), axis=2
            )
            np.maximum(out, 2.0 ** (-k) * cheb, out=out)
        return out

    return System(
        name=f"grid{D}x{m}",
        dim_hint=D,
        apply=_shift_apply,
        dist=dist,
        sample=sample,
        horizon=L,
        trunc_tol=2.0 ** (-L),
        lip_map=2.0,
        pairwise_dist=pairwise,
    )


def enumerate_words(m: int, L: int) -> list:
    """All m^L full-shift words of length L (deterministic order)."""
    return [Point(w) for w in iproduct(range(m), repeat=L)]


def enumerate_grid_words(D: int, m: int, L: int) -> list:
    """All (m^D)^L grid-shift words of length L."""
    return [Point(w) for w in iproduct(grid_alphabet(D, m), repeat=L)]


# ---------------------------------------------------------------------------
# combinations
# ---------------------------------------------------------------------------


def make_product(s1: System, s2: System, f1: Potential, f2: Potential):
    """Product system with the max metric and the summed potential."""

    def apply(p: Point) -> Point:
        a = s1.apply(Point(p.code[0]))
        b = s2.apply(Point(p.code[1]))
        return Point((a.code, b.code))

    def dist(p: Point, q: Point) -> float:
        return max(
            s1.dist(Point(p.code[0]), Point(q.code[0])),
            s2.dist(Point(p.code[1]), Point(q.code[1])),
        )

    def sample(count: int, seed: int) -> list:
        a = s1.sample(count, seed)
        b = s2.sample(count, seed + 1)
        k = min(len(a), len(b))
        return [Point((a[i].code, b[i].code)) for i in range(k)]

    pairwise = None
    if s1.pairwise_dist is not None and s2.pairwise_dist is not None:

        def pairwise(points):
            p1 = [Point(p.code[0]) for p in points]
            p2 = [Point(p.code[1]) for p in points]
            return np.maximum(s1.pairwise_dist(p1), s2.pairwise_dist(p2))

    lip = None
    if s1.lip_map is not None and s2.lip_map is not None:
        lip = max(s1.lip_map, s2.lip_map)

    points = None
    if s1.points is not None and s2.points is not None:
        points = tuple(
            Point((a.code, b.code)) for a in s1.points for b in s2.points
        )

    system = System(
        name=f"({s1.name})x({s2.name})",
        dim_hint=s1.dim_hint + s2.dim_hint,
        apply=apply,
        dist=dist,
        sample=sample,
        horizon=min(s1.horizon, s2.horizon),
        trunc_tol=max(s1.trunc_tol, s2.trunc_tol),
        lip_map=lip,
        pairwise_dist=pairwise,
        points=points,
    )

    def ev(p: Point) -> float:
        return f1.eval(Point(p.code[0])) + f2.eval(Point(p.code[1]))

    potential = Potential(
        eval=ev,
        lip=f1.lip + f2.lip,
        sup_norm=f1.sup_norm + f2.sup_norm,
        name=f"{f1.name}+{f2.name}",
    )
    return system, potential


def make_iterate(s: System, f: Potential, k: int):
    """The k-fold system (same metric, map T^k) with the k-step sum of f."""
    if k < 2:
        raise ValueError("need k >= 2")

    def apply(p: Point) -> Point:
        for _ in range(k):
            p = s.apply(p)
        return p

    def ev(p: Point) -> float:
        total = f.eval(p)
        for _ in range(k - 1):
            p = s.apply(p)
            total += f.eval(p)
        return total

    # an orbit of n iterate steps plus the k-1 extra map steps inside the
    # summed potential reaches base step n*k - 1, hence horizon // k
    horizon = s.horizon // k

    lip_pot = None
    if s.lip_map is not None:
        lip_pot = f.lip * sum(max(s.lip_map, 1.0) ** j for j in range(k))
    else:
        lip_pot = float("inf")  # unknown map constant: no honest bound

    system = System(
        name=f"{s.name}^{k}",
        dim_hint=s.dim_hint,
        apply=apply,
        dist=s.dist,
        sample=s.sample,
        horizon=horizon,
        trunc_tol=s.trunc_tol,
        lip_map=None if s.lip_map is None else s.lip_map**k,
        pairwise_dist=s.pairwise_dist,
        points=s.points,
    )
    potential = Potential(
        eval=ev, lip=lip_pot, sup_norm=k * f.sup_norm, name=f"sum{k}[{f.name}]"
    )
    return system, potential


# ---------------------------------------------------------------------------
# potentials
# ---------------------------------------------------------------------------


def gamma(f: Potential, eps: float) -> float:
    """Continuity modulus bound sup{|f(x)-f(y)| : d(x,y) < eps} <= lip*eps.

    An honest upper bound for Lipschitz potentials; the sandwich checks
    depend on it being an upper bound, never an estimate.
    """
    return f.lip * eps


def constant_potential(c: float, name=None) -> Potential:
    return Potential(
        eval=lambda p: float(c),
        lip=0.0,
        sup_norm=abs(float(c)),
        name=name or f"const({c})",
    )


def zero_potential() -> Potential:
    return constant_potential(0.0, name="zero")


def first_coord(p: Point) -> float:
    """First scalar coordinate of a point (drill through nesting)."""
    c = p.code[0]
    while isinstance(c, tuple):
        c = c[0]
    return float(c)


def first_coord_potential(system: System, scale=1.0, offset=0.0) -> Potential:
    """offset + scale * (first coordinate of the leading letter).

    The Lipschitz constant depends on the system's letter geometry:
    full-shift letters are integers at distance >= 1 apart while the
    word metric caps at 1, so lip = |scale| * (max letter value); grid
    letters move inside [0,1] under the sup metric, so lip = |scale|.
    """
    name = system.name
    if name.startswith("shift"):
        m = int(name.removeprefix("shift"))
        lip = abs(scale) * (m - 1)
        sup = abs(offset) + abs(scale) * (m - 1)
    elif name.startswith("grid"):
        lip = abs(scale)
        sup = abs(offset) + abs(scale)
    else:
        raise ValueError("first_coord_potential targets shift/grid systems")
    return Potential(
        eval=lambda p: offset + scale * first_coord(p),
        lip=lip,
        sup_norm=sup,
        name=f"letter0(scale={scale},offset={offset})",
    )


def table_potential(system: System, values, name="table") -> Potential:
    """Finite-system potential from per-index values; exact lip constant."""
    if system.points is None:
        raise ValueError("table_potential needs a finite system")
    vals = np.asarray(values, dtype=float)
    n = len(system.points)
    if vals.shape != (n,):
        raise ValueError("one value per point required")
    lip = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            d = system.dist(system.points[i], system.points[j])
            if d > 0:
                lip = max(lip, abs(vals[i] - vals[j]) / d)
    return Potential(
        eval=lambda p: float(vals[p.code[0]]),
        lip=lip,
        sup_norm=float(np.max(np.abs(vals))) if n else 0.0,
        name=name,
    )


def random_table_potential(system: System, seed: int, low=-1.0, high=1.0) -> Potential:
    rng = np.random.default_rng(seed)
    vals = rng.uniform(low, high, size=len(system.points))
    return table_potential(system, vals, name=f"table[seed={seed}]")


def scaled_potential(f: Potential, a: float) -> Potential:
    """a * f with the transported Lipschitz/sup data."""
    return Potential(
        eval=lambda p: a * f.eval(p),
        lip=abs(a) * f.lip,
        sup_norm=abs(a) * f.sup_norm,
        name=f"{a}*{f.name}",
    )


def shifted_potential(f: Potential, c: float) -> Potential:
    """f + c."""
    return Potential(
        eval=lambda p: f.eval(p) + c,
        lip=f.lip,
        sup_norm=f.sup_norm + abs(c),
        name=f"{f.name}+{c}",
    )


def sum_potentials(f: Potential, g: Potential) -> Potential:
    return Potential(
        eval=lambda p: f.eval(p) + g.eval(p),
        lip=f.lip + g.lip,
        sup_norm=f.sup_norm + g.sup_norm,
        name=f"{f.name}+{g.name}",
    )


def abs_potential(f: Potential) -> Potential:
    return Potential(
        eval=lambda p: abs(f.eval(p)),
        lip=f.lip,
        sup_norm=f.sup_norm,
        name=f"|{f.name}|",
    )
