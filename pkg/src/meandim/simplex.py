"""Exact two-phase simplex over rationals, sized for desk-scale games.

The variational max-min reduces to a tiny matrix-game LP; solving it in
Fraction arithmetic (Bland's rule, so no cycling) makes the optimality
certificate exact -- the reported duality gap is literally zero rather
than a solver tolerance.
"""

from dataclasses import dataclass
from fractions import Fraction


def _to_fraction_matrix(rows):
    return [[Fraction(v) for v in row] for row in rows]


def solve_lp(c, a_ub, b_ub, a_eq, b_eq):
    """Maximize c.x subject to a_ub x <= b_ub, a_eq x = b_eq, x >= 0.

    All data may be ints, floats or Fractions; arithmetic is exact.
    Returns (value, x) as Fractions.  Raises ValueError on infeasible or
    unbounded problems.
    """
    c = [Fraction(v) for v in c]
    a_ub = _to_fraction_matrix(a_ub)
    b_ub = [Fraction(v) for v in b_ub]
    a_eq = _to_fraction_matrix(a_eq)
    b_eq = [Fraction(v) for v in b_eq]
    n = len(c)

    rows = [(list(r), rhs, "ub") for r, rhs in zip(a_ub, b_ub)]
    rows += [(list(r), rhs, "eq") for r, rhs in zip(a_eq, b_eq)]
    # normalize to rhs >= 0
    norm = []
    for coeffs, rhs, kind in rows:
        if rhs < 0:
            coeffs = [-v for v in coeffs]
            rhs = -rhs
            kind = {"ub": "ge", "ge": "ub", "eq": "eq"}[kind]
        norm.append((coeffs, rhs, kind))

    m = len(norm)
    n_slack = sum(1 for _, _, k in norm if k in ("ub", "ge"))
    n_art = sum(1 for _, _, k in norm if k in ("ge", "eq"))
    width = n + n_slack + n_art
    T = [[Fraction(0)] * (width + 1) for _ in range(m)]
    basis = [0] * m
    art_cols = []
    s_at, a_at = n, n + n_slack
    for r, (coeffs, rhs, kind) in enumerate(norm):
        for j, v in enumerate(coeffs):
            T[r][j] = v
        T[r][width] = rhs
        if kind == "ub":
            T[r][s_at] = Fraction(1)
            basis[r] = s_at
            s_at += 1
        elif kind == "ge":
            T[r][s_at] = Fraction(-1)
            s_at += 1
            T[r][a_at] = Fraction(1)
            basis[r] = a_at
            art_cols.append(a_at)
            a_at += 1
        else:
            T[r][a_at] = Fraction(1)
            basis[r] = a_at
            art_cols.append(a_at)
            a_at += 1

    def pivot(r, col):
        piv = T[r][col]
        T[r] = [v / piv for v in T[r]]
        for rr in range(m):
            if rr != r and T[rr][col] != 0:
                f = T[rr][col]
                T[rr] = [a - f * b for a, b in zip(T[rr], T[r])]
        basis[r] = col

    def run(obj):
        # obj: full-width objective (maximize); returns when optimal
        while True:
            z = [Fraction(0)] * (width + 1)
            for r in range(m):
                cb = obj[basis[r]]
                if cb != 0:
                    for j in range(width + 1):
                        z[j] += cb * T[r][j]
            entering = -1
            for j in range(width):
                if z[j] - obj[j] < 0:  # improving column (Bland: first)
                    entering = j
                    break
            if entering < 0:
                return z[width]
            leaving, best = -1, None
            for r in range(m):
                if T[r][entering] > 0:
                    ratio = T[r][width] / T[r][entering]
                    if best is None or ratio < best or (
                        ratio == best and basis[r] < basis[leaving]
                    ):
                        best, leaving = ratio, r
            if leaving < 0:
                raise ValueError("LP is unbounded")
            pivot(leaving, entering)

    art_set = set(art_cols)
    if art_cols:
        obj1 = [Fraction(0)] * (width + 1)
        for j in art_cols:
            obj1[j] = Fraction(-1)
        val1 = run(obj1)
        if val1 != 0:
            raise ValueError("LP is infeasible")
        # drive leftover artificials out of the basis where possible
        for r in range(m):
            if basis[r] in art_set:
                for j in range(width):
                    if j not in art_set and T[r][j] != 0:
                        pivot(r, j)
                        break

    obj2 = [Fraction(0)] * (width + 1)
    for j in range(n):
        obj2[j] = c[j]
    # forbid re-entering artificial columns
    for j in art_set:
        for r in range(m):
            if basis[r] != j:
                T[r][j] = Fraction(0)
        obj2[j] = Fraction(-10**12)
    value = run(obj2)
    x = [Fraction(0)] * n
    for r in range(m):
        if basis[r] < n:
            x[basis[r]] = T[r][width]
    return value, x


@dataclass(frozen=True)
class GameSolution:
    """Exact solution of max_p min_j sum_i p_i A[j, i] over the simplex."""

    value: Fraction
    p: tuple  # row-player weights (Fractions, sum 1)
    q: tuple  # column-player (member) weights from the dual
    dual_value: Fraction
    gap: Fraction
    slack_residual: Fraction  # worst complementary-slackness violation


def solve_matrix_game(matrix) -> GameSolution:
    """Solve the max-min weight game exactly and certify it by duality.

    matrix[j][i]: value of member j at support point i.  The primal
    optimizes weights p over support points; the dual weights q over
    members certify optimality (gap is exact and must be 0).
    """
    A = _to_fraction_matrix(matrix)
    m = len(A)
    if m == 0:
        raise ValueError("empty game matrix")
    n = len(A[0])

    # primal: max t, p in simplex, sum_i A[j,i] p_i >= t for all j
    c = [Fraction(0)] * n + [Fraction(1), Fraction(-1)]
    a_ub = [[-A[j][i] for i in range(n)] + [Fraction(1), Fraction(-1)] for j in range(m)]
    b_ub = [Fraction(0)] * m
    a_eq = [[Fraction(1)] * n + [Fraction(0), Fraction(0)]]
    b_eq = [Fraction(1)]
    value, x = solve_lp(c, a_ub, b_ub, a_eq, b_eq)
    p = tuple(x[:n])

    # dual: min u, q in simplex, sum_j q_j A[j,i] <= u for all i
    cd = [Fraction(0)] * m + [Fraction(-1), Fraction(1)]
    ad_ub = [[A[j][i] for j in range(m)] + [Fraction(-1), Fraction(1)] for i in range(n)]
    bd_ub = [Fraction(0)] * n
    ad_eq = [[Fraction(1)] * m + [Fraction(0), Fraction(0)]]
    bd_eq = [Fraction(1)]
    neg_u, y = solve_lp(cd, ad_ub, bd_ub, ad_eq, bd_eq)
    q = tuple(y[:m])
    dual_value = -neg_u

    worst = Fraction(0)
    for i in range(n):
        if p[i] > 0:
            col = sum(q[j] * A[j][i] for j in range(m))
            worst = max(worst, abs(col - dual_value))
    for j in range(m):
        if q[j] > 0:
            row = sum(p[i] * A[j][i] for i in range(n))
            worst = max(worst, abs(row - value))

    return GameSolution(
        value=value,
        p=p,
        q=q,
        dual_value=dual_value,
        gap=abs(value - dual_value),
        slack_residual=worst,
    )
