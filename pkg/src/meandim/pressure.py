"""Weighted pressure sums over separated/spanning sets under Bowen metrics.

The central quantity is the log of  sum_x (1/eps)^(S_n f(x))  over a
witness set.  A maximal (n,eps)-separated subset of the sample is built
greedily in descending S_n f order; the same witness, being maximal,
covers the sample within radius eps, so one construction yields both a
lower bound on the sample-restricted sup over separated sets and an
upper bound on the inf over spanning sets.  The sup/inf themselves are
not constructive, so every value carries its bound kind, and small
instances are certified against the exhaustive oracle module.

All sums are in natural-log space with max-shift; eps is restricted to
(0,1) so log(1/eps) > 0.
"""

from dataclasses import dataclass
import math

import numpy as np

from .numerics import logsumexp
from .orbit_engine import OrbitTable
from .system_zoo import Potential, gamma


@dataclass(frozen=True)
class PressureValue:
    """A log-space weighted count with the witness that produced it.

    kind is one of 'separated_lower', 'spanning_upper', 'exact'; the
    first two tag which side of the sup/inf the value bounds.
    """

    log_value: float
    n: int
    eps: float
    kind: str
    witness: tuple

    def recompute(self, t: OrbitTable, f: Potential) -> float:
        """Re-derive log_value from the stored witness (auditing hook)."""
        s = t.birkhoff(f)[list(self.witness), self.n]
        return logsumexp(s * math.log(1.0 / self.eps))


def _check_eps(eps: float):
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0,1), got {eps}")


def greedy_witness(t: OrbitTable, f: Potential, n: int, eps: float) -> list:
    """Maximal (n,eps)-separated subset, greedy by descending S_n f.

    Ties break by sample index (stable sort), so the witness is
    deterministic.  Maximality makes the witness an eps-cover of the
    sample as well.
    """
    _check_eps(eps)
    if t.size == 0:
        raise ValueError("empty sample")
    t.ensure_potential(f)
    weights = t.birkhoff(f)[:, n]
    order = np.argsort(-weights, kind="stable")
    dn = t.bowen_matrix(n)
    alive = np.ones(t.size, dtype=bool)
    kept = []
    for idx in order:
        if alive[idx]:
            kept.append(int(idx))
            alive &= dn[idx] >= eps
    # canonical index order: the log-sum then matches the oracle's
    # summation order bitwise when the sets coincide
    return sorted(kept)


def greedy_separated(t: OrbitTable, f: Potential, n: int, eps: float) -> PressureValue:
    """Lower bound on the exact sample-restricted separated-sup pressure."""
    kept = greedy_witness(t, f, n, eps)
    s = t.birkhoff(f)[kept, n]
    return PressureValue(
        log_value=logsumexp(s * math.log(1.0 / eps)),
        n=n,
        eps=eps,
        kind="separated_lower",
        witness=tuple(kept),
    )


def spanning_from_separated(t: OrbitTable, f: Potential, n: int, eps: float) -> PressureValue:
    """Upper bound on the exact sample-restricted spanning-inf pressure.

    Reuses the maximal separated witness, which covers the sample at
    radius eps; only the bound interpretation differs from
    greedy_separated.
    """
    p = greedy_separated(t, f, n, eps)
    return PressureValue(
        log_value=p.log_value, n=n, eps=eps, kind="spanning_upper", witness=p.witness
    )


def witness_is_separated(t: OrbitTable, witness, n: int, eps: float) -> bool:
    dn = t.bowen_matrix(n)
    w = list(witness)
    for a in range(len(w)):
        for b in range(a + 1, len(w)):
            if dn[w[a], w[b]] < eps:
                return False
    return True


def witness_spans(t: OrbitTable, witness, n: int, eps: float) -> bool:
    dn = t.bowen_matrix(n)
    w = list(witness)
    if not w:
        return t.size == 0
    return bool(np.all(dn[:, w].min(axis=1) < eps))


def _log_weighted(t, f, witness, n, log_inv_eps, gamma_shift=0.0, extra=0.0):
    s = t.birkhoff(f)[list(witness), n]
    return logsumexp((s - gamma_shift) * log_inv_eps) + extra


def check_sandwich(t: OrbitTable, f: Potential, n: int, eps: float, oracle=None) -> dict:
    """Finite-level sandwich checks between separated and spanning sums.

    (a) spanning-inf <= separated-sup at the same eps.  Asserted on exact
        values when an oracle pair is supplied; on greedy bounds the two
        sides share a witness, so the report records equality.
    (b) With E covering the sample at eps/2 and F (n,eps)-separated:
            log sum_E (2/eps)^(S_n f)
            >= log sum_F (1/eps)^(S_n f - n*gamma(eps)) - n*||f||*log 2,
        where gamma(eps) = lip(f) * eps.  This holds for every valid
        (E, F) pair, so a failure indicts the witnesses, not the bound.

    ``oracle``: optional pair of ExactPressure values (at eps and eps/2)
    from the oracle module; exact witnesses are then used for both
    checks.

    Returns a report dict; report['ok'] is the conjunction.
    """
    _check_eps(eps)
    _check_eps(eps / 2.0)
    log_inv = math.log(1.0 / eps)
    report = {"n": n, "eps": eps, "checks": {}}

    if oracle is not None:
        at_eps, at_half = oracle
        q_le_p = at_eps.exact_log_q <= at_eps.exact_log_p + 1e-9
        report["checks"]["spanning_le_separated"] = {
            "ok": bool(q_le_p),
            "log_q": at_eps.exact_log_q,
            "log_p": at_eps.exact_log_p,
        }
        e_witness = at_half.argmin_spanning
        f_witness = at_eps.argmax_separated
    else:
        sep = greedy_separated(t, f, n, eps)
        span = spanning_from_separated(t, f, n, eps)
        report["checks"]["spanning_le_separated"] = {
            "ok": bool(span.log_value <= sep.log_value + 1e-9),
            "log_q": span.log_value,
            "log_p": sep.log_value,
            "note": "shared witness: bounds coincide",
        }
        e_witness = greedy_witness(t, f, n, eps / 2.0)
        f_witness = sep.witness

    if not witness_spans(t, e_witness, n, eps / 2.0):
        raise AssertionError("E witness does not cover the sample at eps/2")
    if not witness_is_separated(t, f_witness, n, eps):
        raise AssertionError("F witness is not (n,eps)-separated")

    modulus = gamma(f, eps)
    lhs = _log_weighted(t, f, e_witness, n, math.log(2.0 / eps))
    rhs = _log_weighted(
        t, f, f_witness, n, log_inv, gamma_shift=n * modulus
    ) - n * f.sup_norm * math.log(2.0)
    ok_b = lhs >= rhs - 1e-9
    report["checks"]["cover_dominates_separated"] = {
        "ok": bool(ok_b),
        "lhs": lhs,
        "rhs": rhs,
        "gamma": modulus,
        "e_witness": list(map(int, e_witness)),
        "f_witness": list(map(int, f_witness)),
    }
    report["ok"] = all(c["ok"] for c in report["checks"].values())
    return report
