"""Batch front door: estimate | verify | variational | bowen.

One JSON config in, deterministic CSV/JSON out.  No flag overrides any
config value except the output directory, so an emitted table is fully
reproducible from its config.  Exit codes: 0 success, 2 config error,
3 assertion failure inside verify.
"""

import argparse
import csv
import hashlib
import json
import math
import os
import sys

import numpy as np

from . import system_zoo as zoo
from .config import ConfigError, build_potential, build_sample, build_system, load_config
from .mmdim import check_properties, estimate_mmdim
from .oracle import exact_pressure
from .orbit_engine import build_table
from .pressure import check_sandwich, greedy_separated, spanning_from_separated
from .variational import (
    Dictionary,
    bowen_root,
    bowen_root_consistency,
    equilibrium_candidates,
    make_dict_member,
    maxmin_variational,
    measure_dimension,
    tangent_check,
)

CSV_HEADER_COMMENT = "# meandim runs.csv schema v1"
CSV_FIELDS = [
    "system",
    "potential",
    "n",
    "eps",
    "log_P_lower",
    "log_Q_upper",
    "v",
    "ratio",
    "witness_size",
    "witness_hash",
]


def _witness_hash(witness) -> str:
    blob = ",".join(str(i) for i in witness).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def _write_json(path: str, payload: dict):
    with open(path, "w") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _prepare(cfg: dict):
    system = build_system(cfg["system"])
    potential = build_potential(cfg.get("potential", {"kind": "constant", "params": {"value": 0.0}}), system)
    pts = build_sample(cfg, system)
    n_max = max(int(v) for v in cfg["n_range"])
    table = build_table(system, pts, n_max, [potential])
    return system, potential, table


def cmd_estimate(cfg: dict, out: str) -> int:
    system, potential, table = _prepare(cfg)
    eps_list = [float(e) for e in cfg["eps_list"]]
    n_range = [int(n) for n in cfg["n_range"]]
    est = estimate_mmdim(table, potential, eps_list, n_range)

    os.makedirs(out, exist_ok=True)
    rows = []
    for eps, v, ratio in zip(est.eps_list, est.v_lower, est.ratios):
        for n in sorted(set(n_range)):
            lower = greedy_separated(table, potential, n, eps)
            upper = spanning_from_separated(table, potential, n, eps)
            rows.append(
                {
                    "system": system.name,
                    "potential": potential.name,
                    "n": n,
                    "eps": repr(eps),
                    "log_P_lower": repr(lower.log_value),
                    "log_Q_upper": repr(upper.log_value),
                    "v": repr(v),
                    "ratio": repr(ratio),
                    "witness_size": len(lower.witness),
                    "witness_hash": _witness_hash(lower.witness),
                }
            )
    with open(os.path.join(out, "runs.csv"), "w", newline="") as fh:
        fh.write(CSV_HEADER_COMMENT + "\n")
        writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
        writer.writeheader()
        writer.writerows(rows)

    _write_json(
        os.path.join(out, "summary.json"),
        {
            "system": system.name,
            "potential": potential.name,
            "eps_list": list(est.eps_list),
            "n_range": sorted(set(n_range)),
            "v": list(est.v_lower),
            "ratios": list(est.ratios),
            "slope": est.slope,
            "upper_proxy": est.upper_proxy,
            "lower_proxy": est.lower_proxy,
            "diagnostics": est.diagnostics,
        },
    )
    return 0


def cmd_verify(cfg: dict, out: str) -> int:
    system, potential, table = _prepare(cfg)
    vcfg = cfg.get("verify", {})
    seed = int(vcfg.get("seed", 0))
    draws = int(vcfg.get("draws", 20))
    n = int(vcfg.get("n", 2))
    eps = float(vcfg.get("eps", 0.35))
    rng = np.random.default_rng(seed)

    results = []
    oracle_ok = table.size <= 16
    for i in range(draws):
        if system.points is not None:
            f = zoo.random_table_potential(system, seed=seed + 1000 + i)
            g_extra = zoo.random_table_potential(system, seed=seed + 2000 + i, low=0.0)
            g = zoo.table_potential(
                system,
                [f.eval(p) + g_extra.eval(p) for p in system.points],
                name=f"g{i}",
            )
        else:
            f = potential
            g = zoo.shifted_potential(potential, abs(float(rng.uniform(0, 1))))
        c = float(rng.uniform(-2, 2))
        p = float(rng.uniform(0, 1))
        oracle_pair = None
        if oracle_ok:
            oracle_pair = (
                exact_pressure(table, f, n, eps),
                exact_pressure(table, f, n, eps / 2.0),
            )
        sandwich = check_sandwich(table, f, n, eps, oracle=oracle_pair)
        props = check_properties(table, f, g, c, p, eps, n)
        results.append(
            {
                "draw": i,
                "sandwich_ok": sandwich["ok"],
                "properties_ok": props["ok"],
                "sandwich": sandwich,
                "properties": props,
            }
        )

    ok = all(r["sandwich_ok"] and r["properties_ok"] for r in results)
    os.makedirs(out, exist_ok=True)
    failures = [
        r for r in results if not (r["sandwich_ok"] and r["properties_ok"])
    ]
    _write_json(
        os.path.join(out, "report.json"),
        {
            "command": "verify",
            "ok": ok,
            "draws": draws,
            "failures": failures,
            "results": [
                {k: r[k] for k in ("draw", "sandwich_ok", "properties_ok")}
                for r in results
            ],
        },
    )
    return 0 if ok else 3


def cmd_variational(cfg: dict, out: str) -> int:
    system, potential, table = _prepare(cfg)
    eps_list = [float(e) for e in cfg["eps_list"]]
    n_range = [int(n) for n in cfg["n_range"]]
    tol = cfg.get("tolerances", {})
    tau_a = float(tol.get("tau_a", cfg.get("dictionary", {}).get("tau_a", 0.05)))

    sources = [potential]
    for spec in cfg.get("dictionary", {}).get("sources", []):
        sources.append(build_potential(spec, system))
    for f in sources:
        table.ensure_potential(f)

    members, certificates = [], []
    for f in sources:
        member = make_dict_member(table, f, eps_list, n_range, tau_a=tau_a)
        members.append(member)
        certificates.append(
            {
                "source": f.name,
                "m_hat": member.m_hat,
                "certificate_proxy": member.certificate.upper_proxy,
                "tau_a": tau_a,
            }
        )

    support = list(range(table.size))
    singleton = Dictionary((members[0],))
    res_singleton = maxmin_variational(singleton, potential, table, support)
    dictionary = Dictionary(tuple(members))
    res = maxmin_variational(dictionary, potential, table, support)
    m_hat = members[0].m_hat

    # convergence direction: value is non-increasing in dictionary growth,
    # non-decreasing in support growth
    dictionary_growth = [
        {
            "members": k,
            "value": maxmin_variational(
                Dictionary(tuple(members[:k])), potential, table, support
            ).value,
        }
        for k in range(1, len(members) + 1)
    ]
    support_growth = [
        {
            "support_size": k,
            "value": maxmin_variational(
                dictionary, potential, table, support[:k]
            ).value,
        }
        for k in range(1, len(support) + 1)
    ]

    candidates = equilibrium_candidates(dictionary, potential, table, support)
    perturbations = [m.source for m in members[1:]] or [zoo.constant_potential(0.25)]
    value_functional = lambda h: maxmin_variational(dictionary, h, table, support).value
    tangent = tangent_check(
        res.measure, potential, perturbations, table, eps_list, n_range,
        mdim_of=value_functional, budget=0.0,
    )

    # root of s -> proxy(-s f) belongs to this report when f is positive
    root_trace, s0 = [], None
    if min(potential.eval(p) for p in table.points) > 0.0:
        tol_bis = float(cfg.get("tolerances", {}).get("bisection_tol", 1e-10))
        s0 = bowen_root(
            table, potential, eps_list, n_range, tol=tol_bis, trace=root_trace
        )

    payload = {
        "command": "variational",
        "dictionary_certificates": certificates,
        "maxmin_value": res.value,
        "duality_gap": res.gap,
        "slack_residual": res.slack_residual,
        "optimizer_support": list(res.measure.support),
        "optimizer_weights": list(res.measure.weights),
        "bowen_root": {"s0": s0, "trace": root_trace},
        "sandwich": {
            "m_hat": m_hat,
            "singleton_value": res_singleton.value,
            "singleton_matches_m_hat": bool(abs(res_singleton.value - m_hat) <= 1e-9),
            "value_le_m_hat": bool(res.value <= m_hat + 1e-9),
        },
        "dictionary_growth": dictionary_growth,
        "support_growth": support_growth,
        "equilibrium_candidates": [
            {"support": list(c.support), "weights": list(c.weights)}
            for c in candidates
        ],
        "tangent_margins": tangent["margins"],
        "measure_dimension_of_optimizer": measure_dimension(
            dictionary, res.measure, table
        ),
    }
    os.makedirs(out, exist_ok=True)
    _write_json(os.path.join(out, "report.json"), payload)
    return 0


def cmd_bowen(cfg: dict, out: str) -> int:
    system, potential, table = _prepare(cfg)
    eps_list = [float(e) for e in cfg["eps_list"]]
    n_range = [int(n) for n in cfg["n_range"]]
    tol = float(cfg.get("bowen", {}).get("tol", cfg.get("tolerances", {}).get("bisection_tol", 1e-10)))

    trace = []
    s0 = bowen_root(table, potential, eps_list, n_range, tol=tol, trace=trace)

    zero = zoo.zero_potential()
    table.ensure_potential(zero)
    member_zero = make_dict_member(table, zero, eps_list, n_range)
    member_f = make_dict_member(table, potential, eps_list, n_range)
    dictionary = Dictionary((member_zero, member_f))
    from .system_zoo import scaled_potential

    root_pot = scaled_potential(potential, -s0)
    table.ensure_potential(root_pot)
    member_root = make_dict_member(table, root_pot, eps_list, n_range)
    res = maxmin_variational(Dictionary((member_root,)), root_pot, table, list(range(table.size)))
    consistency = bowen_root_consistency(
        res.measure, potential, s0, Dictionary((member_zero,)), table,
        budget=member_zero.certificate.error_budget + tol,
    )

    os.makedirs(out, exist_ok=True)
    _write_json(
        os.path.join(out, "report.json"),
        {
            "command": "bowen",
            "s0": s0,
            "tolerance": tol,
            "trace": trace,
            "consistency": consistency,
        },
    )
    return 0


COMMANDS = {
    "estimate": cmd_estimate,
    "verify": cmd_verify,
    "variational": cmd_variational,
    "bowen": cmd_bowen,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="meandim",
        description="pressure counting and mean-dimension estimation runs",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("config", help="path to the JSON run config")
        p.add_argument("--out", help="output directory (overrides config)")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config)
        out = args.out or cfg.get("out", "out")
        return COMMANDS[args.command](cfg, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
