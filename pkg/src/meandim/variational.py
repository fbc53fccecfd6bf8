"""The dual side: dictionaries, the measure functional, max-min, roots.

A dictionary member is built from a source potential h as
g = (estimated upper proxy of h) - h; by the additive-constant identity
the proxy of -g is then zero up to estimator noise, and the member ships
with that certificate.  Over a finite dictionary and finitely supported
measures,

    measure_dimension(D, mu) = min_{g in D} integral of g d(mu)

over-estimates the true measure functional (a finite dictionary shrinks
the inf), which the sandwich checks control: with the singleton
dictionary {g_f} the max-min value equals the proxy of f exactly, and
any dictionary containing g_f keeps the value at or below it.

The max-min over weights on a fixed support is a matrix game, solved
exactly in rational arithmetic (see simplex); the reported duality gap
is exact, not a tolerance.
"""

from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

from .mmdim import MmdimEstimate, estimate_mmdim
from .orbit_engine import OrbitTable
from .simplex import GameSolution, solve_matrix_game
from .system_zoo import Potential, shifted_potential, sum_potentials, zero_potential


class MemberRejectedError(ValueError):
    """Dictionary-membership certificate exceeded the tolerance."""


class BracketError(RuntimeError):
    """Root bracketing failed (no sign change or negative zero-proxy)."""


@dataclass(frozen=True)
class FinMeasure:
    """Finitely supported probability measure on sample indices."""

    support: tuple
    weights: tuple

    def __post_init__(self):
        if len(self.support) != len(self.weights):
            raise ValueError("support/weights length mismatch")
        if len(set(self.support)) != len(self.support):
            raise ValueError("support indices must be distinct")
        if any(w < -1e-15 for w in self.weights):
            raise ValueError("negative weight")
        if abs(sum(self.weights) - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1 (tol 1e-12)")

    def integrate(self, f: Potential, t: OrbitTable) -> float:
        return float(
            sum(w * f.eval(t.points[i]) for i, w in zip(self.support, self.weights))
        )


@dataclass(frozen=True)
class DictMember:
    """A dictionary element with its numeric membership certificate."""

    g: Potential
    source: Potential
    m_hat: float
    certificate: MmdimEstimate
    tau: float


@dataclass(frozen=True)
class Dictionary:
    members: tuple

    def __post_init__(self):
        if not self.members:
            raise ValueError("dictionary must be nonempty")


def make_dict_member(t: OrbitTable, f: Potential, eps_list, n_range,
                     tau_a: float = 0.05, log_pressure=None) -> DictMember:
    """Build g = m_hat - f with its near-zero certificate.

    The certificate estimates the proxy of -g = f - m_hat, which by the
    additive-constant identity equals proxy(f) - m_hat = 0 up to float
    accumulation; members beyond tau_a are rejected with diagnostics.
    """
    est = estimate_mmdim(t, f, eps_list, n_range, log_pressure=log_pressure)
    m_hat = est.upper_proxy
    g = Potential(
        eval=lambda p, _m=m_hat, _f=f: _m - _f.eval(p),
        lip=f.lip,
        sup_norm=abs(m_hat) + f.sup_norm,
        name=f"gap[{f.name}]",
    )
    neg_g = shifted_potential(f, -m_hat)  # -g = f - m_hat
    cert_backend = None
    if log_pressure is not None:
        cert_backend = lambda n, eps: log_pressure(n, eps) - n * m_hat * math.log(1 / eps)
    cert = estimate_mmdim(t, neg_g, eps_list, n_range, log_pressure=cert_backend)
    if abs(cert.upper_proxy) > tau_a:
        raise MemberRejectedError(
            f"certificate proxy {cert.upper_proxy} exceeds tau_a={tau_a} "
            f"for source {f.name!r} (diagnostics: {cert.diagnostics})"
        )
    return DictMember(g=g, source=f, m_hat=m_hat, certificate=cert, tau=tau_a)


def measure_dimension(dictionary: Dictionary, mu: FinMeasure, t: OrbitTable) -> float:
    """min over members of the mu-average of g (upper bound on the true
    measure functional: the finite dictionary shrinks the infimum)."""
    return min(mu.integrate(m.g, t) for m in dictionary.members)


def _game_matrix(dictionary: Dictionary, f: Potential, t: OrbitTable, support):
    pts = [t.points[i] for i in support]
    return [
        [m.g.eval(p) + f.eval(p) for p in pts] for m in dictionary.members
    ]


@dataclass(frozen=True)
class MaxminResult:
    value: float
    measure: FinMeasure
    gap: float
    dual_weights: tuple
    slack_residual: float
    solution: GameSolution


def maxmin_variational(dictionary: Dictionary, f: Potential, t: OrbitTable,
                       support) -> MaxminResult:
    """Exact max over weights on ``support`` of the min member average.

    Monotone: never increases when the dictionary grows, never decreases
    when the support grows.  The duality gap and complementary-slackness
    residual come from the exact rational solve and must be ~0.
    """
    support = list(support)
    if not support:
        raise ValueError("empty support")
    A = _game_matrix(dictionary, f, t, support)
    sol = solve_matrix_game(A)
    mu = FinMeasure(tuple(support), tuple(float(w) for w in sol.p))
    return MaxminResult(
        value=float(sol.value),
        measure=mu,
        gap=float(sol.gap),
        dual_weights=tuple(float(w) for w in sol.q),
        slack_residual=float(sol.slack_residual),
        solution=sol,
    )


def grid_check_maxmin(dictionary: Dictionary, f: Potential, t: OrbitTable,
                      support, resolution: int = 200) -> float:
    """Dense-grid max-min over the support weights (oracle cross-check).

    Always at or below the exact LP value; within (member spread) *
    (len(support) / resolution) of it.
    """
    from .oracle import simplex_grid_maxmin

    rows = _game_matrix(dictionary, f, t, list(support))
    return simplex_grid_maxmin(rows, resolution)


def equilibrium_candidates(dictionary: Dictionary, f: Potential, t: OrbitTable,
                           support, tol: float = 1e-9) -> list:
    """All vertex optimizers within tol, plus the solver optimum.

    The uniform measure is included when it achieves the value (it does
    whenever the objective is member-constant, e.g. singleton
    dictionaries).  Midpoints of returned measures are verified to stay
    within tol of the value -- the finite-level convexity sanity check.
    """
    support = list(support)
    res = maxmin_variational(dictionary, f, t, support)
    A = [[Fraction(v) for v in row] for row in _game_matrix(dictionary, f, t, support)]
    value = res.solution.value
    ftol = Fraction(tol)
    k = len(support)

    def objective(weights):
        return min(sum(w * row[i] for i, w in enumerate(weights)) for row in A)

    out = [res.measure]
    seen = {tuple(round(w, 12) for w in res.measure.weights)}
    uniform = [Fraction(1, k)] * k
    if objective(uniform) >= value - ftol:
        key = tuple(round(1.0 / k, 12) for _ in range(k))
        if key not in seen:
            out.append(FinMeasure(tuple(support), tuple(1.0 / k for _ in range(k))))
            seen.add(key)
    for i in range(k):
        vertex = [Fraction(0)] * k
        vertex[i] = Fraction(1)
        if objective(vertex) >= value - ftol:
            key = tuple(round(float(v), 12) for v in vertex)
            if key not in seen:
                out.append(
                    FinMeasure(tuple(support), tuple(float(v) for v in vertex))
                )
                seen.add(key)

    for a in range(len(out)):
        for b in range(a + 1, len(out)):
            mid = [
                (Fraction(out[a].weights[i]) + Fraction(out[b].weights[i])) / 2
                for i in range(k)
            ]
            if objective(mid) < value - ftol:
                raise AssertionError("midpoint of candidates left the optimal set")
    return out


def tangent_check(mu: FinMeasure, f: Potential, perturbations, t: OrbitTable,
                  eps_list, n_range, mdim_of=None, budget: float = None) -> dict:
    """Increment bound per perturbation g:

        integral g d(mu)  <=  M(f + g) - M(f) + eta

    where M is the mean-dimension functional and eta the estimator-error
    budget.  By default M is the estimate's upper proxy and eta sums the
    two estimates' residual budgets; passing ``mdim_of`` (e.g. the
    dictionary max-min value functional, under which the bound is exact
    for equilibrium measures) overrides both, with eta = ``budget`` or 0.
    """
    if mdim_of is None:
        def mdim_of(h):
            return estimate_mmdim(t, h, eps_list, n_range)

        base = mdim_of(f)
        m_f, budget_f = base.upper_proxy, base.error_budget

        def evaluate(h):
            est = mdim_of(h)
            return est.upper_proxy, est.error_budget

    else:
        m_f, budget_f = float(mdim_of(f)), 0.0

        def evaluate(h):
            return float(mdim_of(h)), 0.0

    rows = []
    for g in perturbations:
        m_fg, budget_fg = evaluate(sum_potentials(f, g))
        eta = budget if budget is not None else budget_f + budget_fg
        integral = mu.integrate(g, t)
        margin = m_fg - m_f - integral
        rows.append(
            {
                "perturbation": g.name,
                "integral": integral,
                "m_f": m_f,
                "m_f_plus_g": m_fg,
                "margin": margin,
                "eta": eta,
                "ok": bool(margin >= -eta - 1e-12),
            }
        )
    return {"margins": rows, "ok": all(r["ok"] for r in rows)}


def bowen_root(t: OrbitTable, f: Potential, eps_list, n_range,
               tol: float = 1e-10, backend_family=None, trace=None) -> float:
    """Root of s -> proxy(-s f) by bisection, for strictly positive f.

    The map decreases in s (every n-step sum of -s f does), the bracket
    is [0, proxy(0)/min f + 1], and the returned s0 satisfies
    |proxy(-s0 f)| <= tol.  ``backend_family(s)`` may supply an exact
    log-pressure backend per scale s; ``trace`` (a list) collects the
    bracket at each iteration.
    """
    from .system_zoo import scaled_potential

    min_f = min(f.eval(p) for p in t.points)
    if min_f <= 0.0:
        raise ValueError("bowen_root needs min sampled f > 0")

    def proxy(s: float) -> float:
        backend = backend_family(s) if backend_family is not None else None
        pot = scaled_potential(f, -s) if backend is None else f
        return estimate_mmdim(t, pot, eps_list, n_range, log_pressure=backend).upper_proxy

    m0 = proxy(0.0)
    if m0 < -tol:
        raise BracketError(f"proxy at s=0 is negative ({m0}); counts cannot do that")
    if abs(m0) <= tol:
        return 0.0
    hi = m0 / min_f + 1.0
    lo = 0.0
    phi_hi = proxy(hi)
    if phi_hi > tol:
        raise BracketError(f"no sign change: proxy({hi}) = {phi_hi} > tol")
    for _ in range(200):
        mid = (lo + hi) / 2.0
        val = proxy(mid)
        if trace is not None:
            trace.append({"lo": lo, "hi": hi, "mid": mid, "proxy": val})
        if abs(val) <= tol:
            return mid
        if val > 0.0:
            lo = mid
        else:
            hi = mid
    raise BracketError("bisection did not reach tolerance in 200 iterations")


def bowen_root_consistency(mu: FinMeasure, f: Potential, s0: float,
                           dictionary: Dictionary, t: OrbitTable,
                           budget: float) -> dict:
    """Residual of s0 against measure_dimension(mu) / integral(f d mu)."""
    integral = mu.integrate(f, t)
    if integral == 0.0:
        raise ValueError("integral of f under mu is zero")
    value = measure_dimension(dictionary, mu, t)
    residual = abs(s0 - value / integral)
    return {
        "s0": s0,
        "ratio": value / integral,
        "residual": residual,
        "budget": budget,
        "ok": bool(residual <= budget + 1e-12),
    }
