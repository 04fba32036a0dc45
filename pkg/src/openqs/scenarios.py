"""Scenario runners behind the command line; each returns a table of rows."""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .collision import (
    CollisionParams,
    analytic_trajectory,
    b_coefficients,
    control_hamiltonian,
    initial_state,
    post_select_open,
    simulate,
)
from .config import ConfigError, Params, cold_theta, parse_channel, parse_hamiltonian, parse_state
from .fridge import FridgeParams, control_heat, cycle_report, fridge_pipeline_state, q_bar_zero
from .monitoring import information_curve
from .switch import PROBABILITY_FLOOR, Outcome, decompose
from .thermo import available_information, heat_to_control, trajectory_heat
from .verify import run_all, stacked_entropy


class NumericalError(RuntimeError):
    """A computed value came out non-finite or a decomposition failed."""




@dataclass
class Table:
    columns: list[str]
    units: dict[str, str]
    rows: list[tuple]
    n_inputs: int = 0
    failed: list[str] = field(default_factory=list)

    def check_finite(self) -> None:
        for i, row in enumerate(self.rows):
            for name, v in zip(self.columns[self.n_inputs:], row[self.n_inputs:]):
                if isinstance(v, float) and not math.isfinite(v):
                    raise NumericalError(f"row {i}: column {name} is {v}")


@dataclass(frozen=True)
class Context:
    seed: int = 0
    threads: int = 1


def pmap(fn: Callable, items: Sequence, threads: int) -> list:
    """Order-preserving map over independent grid cells."""
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (8 * threads))))


def _finite_or_none(x):
    return None if x is None else float(x)


def _info(ps) -> float | None:
    return available_information(ps.conditional_state) if ps.probability > PROBABILITY_FLOOR else None


# -- switch ----------------------------------------------------------------

def run_switch(p: Params, ctx: Context) -> Table:
    rng = np.random.default_rng(ctx.seed)
    theta = cold_theta(p)
    m = parse_channel("channel_m", p.text("channel_m", "identity"), theta_cold=theta, rng=rng)
    n_ch = parse_channel("channel_n", p.text("channel_n", "identity"), theta_cold=theta, rng=rng)
    rho = parse_state("rho_s", p.text("rho_s", "plus"))
    omega_s = p.float("omega_s", 1.0)
    h_s = parse_hamiltonian("h_s", p.text("h_s", "zero"), omega_s)
    tau, g = p.tau_and_g(0.2)
    omega = p.float("omega", 1.0)
    betas = p.grid("beta_e", "1")
    ns = p.int_grid("n", "0:50:1")
    crosscheck = p.flag("crosscheck")
    if not (m.dim == n_ch.dim == rho.shape[0] == h_s.shape[0]):
        raise ConfigError("channel_m", "channels, rho_s and h_s must share one dimension")
    dec = decompose(m, n_ch, rho)
    start = initial_state(m, n_ch, rho) if crosscheck else None

    def per_beta(beta):
        cp = CollisionParams(omega, g, tau, beta, max(ns), h_s=h_s)
        rows = []
        if crosscheck:
            traj = simulate(start, cp)
            exact = analytic_trajectory(dec, cp)
            dist = 0.5 * np.abs(np.linalg.eigvalsh(exact - traj.states)).sum(axis=1)
            ent = stacked_entropy(traj.states)
            heats = trajectory_heat(traj)
        for k in ns:
            ck = cp.with_n(k)
            plus = post_select_open(dec, ck, Outcome.PLUS)
            minus = post_select_open(dec, ck, Outcome.MINUS)
            row = (k, beta, plus.probability, minus.probability, heat_to_control(dec, ck),
                   _info(plus), _info(minus))
            if crosscheck:
                # beta_e * Q has no finite value at zero temperature
                sigma = None if math.isinf(beta) else float((ent[k] - ent[0]) - beta * heats[k])
                row += (float(dist[k]), sigma)
            rows.append(row)
        return rows

    cols = ["n", "beta_e", "p_plus", "p_minus", "heat_to_control", "info_plus", "info_minus"]
    if crosscheck:
        cols += ["oracle_trace_distance", "entropy_production"]
    rows = list(itertools.chain.from_iterable(pmap(per_beta, betas, ctx.threads)))
    units = {"n": "count", "beta_e": "1/energy", "heat_to_control": "energy",
             "info_plus": "nats", "info_minus": "nats", "entropy_production": "nats"}
    return Table(cols, units, rows, n_inputs=2)


# -- b coefficients ---------------------------------------------------------

def run_sweep_b(p: Params, ctx: Context) -> Table:
    gts = p.grid("g_tau", "0.2")
    betas = p.grid("beta_e", "0")
    omegas = p.grid("omega", "1")
    ns = p.int_grid("n", "0:100:1")
    rows = []
    for gt, beta, omega in itertools.product(gts, betas, omegas):
        cp = CollisionParams(omega, gt, 1.0, beta)
        for k in ns:
            b = b_coefficients(cp.with_n(k))
            rows.append((k, gt, beta, omega, b.f_e, b.b_def_plus, b.b_def_minus,
                         b.b_indef_plus, b.b_indef_minus, abs(b.b_indef_plus)))
    cols = ["n", "g_tau", "beta_e", "omega", "f_e", "b_def_plus", "b_def_minus",
            "b_indef_plus", "b_indef_minus", "abs_b_indef"]
    return Table(cols, {"n": "count", "beta_e": "1/energy", "omega": "energy"}, rows, n_inputs=4)


# -- monitoring switch ------------------------------------------------------

def run_monitoring_info(p: Params, ctx: Context) -> Table:
    eps = p.grid("eps", "0:1:0.01")
    ns = p.int_grid("n", "0, 1, 10, 100, 300")
    betas = p.grid("beta", "0.1, 10")
    outcomes = p.words("outcomes", "plus, minus")
    for o in outcomes:
        if o not in ("plus", "minus"):
            raise ConfigError("outcomes", f"unknown outcome {o!r}")
    tau, g = p.tau_and_g(0.2)
    omega, omega_s = p.float("omega", 1.0), p.float("omega_s", 1.0)

    def cell(e):
        return information_curve([e], ns, betas, outcomes, omega, omega_s, g, tau)

    rows = [(r["eps"], r["n"], r["beta"], r["outcome"], r["p_post"], r["info_nats"])
            for chunk in pmap(cell, eps, ctx.threads) for r in chunk]
    cols = ["eps", "n", "beta", "outcome", "p_post", "info_nats"]
    return Table(cols, {"n": "count", "beta": "1/energy", "info_nats": "nats"}, rows, n_inputs=4)


# -- refrigerator -----------------------------------------------------------

def _fridge_base(p: Params, beta_cold: float | None = None) -> FridgeParams:
    tau, g = p.tau_and_g(0.1)
    if beta_cold is None:
        beta_cold = p.float("beta_cold", 1.5)
    return FridgeParams(omega_s=p.float("omega_s", 1.0), omega=1.0,
                        beta_hot=p.float("beta_hot", 1.0), beta_cold=beta_cold, g=g, tau=tau)


def _ratio(a: float | None, b: float | None) -> float | None:
    if a is None or b is None or b == 0.0:
        return None
    return a / b


def run_fridge_cop(p: Params, ctx: Context) -> Table:
    base = _fridge_base(p).with_(omega=p.float("omega", 1.0))
    ns = p.int_grid("n", "0:300:1")
    betas = p.grid("beta_e", "0:1.5:0.01")
    cop0 = cycle_report(base.with_(n=0)).cop

    def cell(nb):
        k, beta = nb
        r = cycle_report(base.with_(n=k, beta_e=beta))
        return (k, beta, r.p_minus, _finite_or_none(r.avg_heat), r.work_erasure,
                _finite_or_none(r.cop), cop0, _ratio(r.cop, cop0))

    rows = pmap(cell, list(itertools.product(ns, betas)), ctx.threads)
    cols = ["n", "beta_e", "p_minus", "avg_heat", "work_erasure", "cop", "cop0", "cop_ratio"]
    units = {"n": "count", "beta_e": "1/energy", "avg_heat": "energy", "work_erasure": "energy"}
    return Table(cols, units, rows, n_inputs=2)


def run_fridge_cop_prime(p: Params, ctx: Context) -> Table:
    base = _fridge_base(p)
    base = base.with_(beta_e=base.beta_cold)
    ns = p.int_grid("n", "0:300:1")
    omegas = p.grid("omega", "0:2:0.01")

    def cell(nw):
        k, w = nw
        fp = base.with_(n=k, omega=w)
        r, r0 = cycle_report(fp), cycle_report(fp.with_(n=0))
        return (k, w, r.control_heat, _finite_or_none(r.cop_prime), _finite_or_none(r0.cop_prime),
                _ratio(r.cop_prime, r0.cop_prime))

    rows = pmap(cell, list(itertools.product(ns, omegas)), ctx.threads)
    cols = ["n", "omega", "control_heat", "cop_prime", "cop_prime0", "cop_prime_ratio"]
    return Table(cols, {"n": "count", "omega": "energy", "control_heat": "energy"}, rows, n_inputs=2)


def run_refrigeration_region(p: Params, ctx: Context) -> Table:
    bh = p.grid("beta_hot", "0:5:0.05")
    bc = p.grid("beta_cold", "0:5:0.05")
    omega_s = p.float("omega_s", 1.0)
    rows = []
    for h, c in itertools.product(bh, bc):
        q = float(q_bar_zero(h, c, omega_s))
        rows.append((h, c, q, int(q > 0 and c > h)))
    cols = ["beta_hot", "beta_cold", "q_bar_zero", "refrigerates"]
    return Table(cols, {"beta_hot": "1/energy", "beta_cold": "1/energy", "q_bar_zero": "energy"},
                 rows, n_inputs=2)


def run_control_heat(p: Params, ctx: Context) -> Table:
    ns = p.int_grid("n", "100")
    omegas = p.grid("omega", "0:2:0.02")
    bcs = p.grid("beta_cold", "1:5:0.04")
    crosscheck = p.flag("crosscheck")
    base = _fridge_base(p, beta_cold=max(bcs))

    def cell(cell_args):
        k, w, c = cell_args
        fp = base.with_(n=k, omega=w, beta_cold=c, beta_e=c)
        row = (k, w, c, control_heat(fp))
        if crosscheck:
            e0 = fridge_pipeline_state(fp.with_(n=0)).control()
            en = fridge_pipeline_state(fp).control()
            row += (float(np.trace((en - e0) @ control_hamiltonian(w)).real),)
        return row

    rows = pmap(cell, list(itertools.product(ns, omegas, bcs)), ctx.threads)
    cols = ["n", "omega", "beta_cold", "control_heat"] + (["control_heat_simulated"] if crosscheck else [])
    units = {"n": "count", "omega": "energy", "beta_cold": "1/energy", "control_heat": "energy",
             "control_heat_simulated": "energy"}
    return Table(cols, units, rows, n_inputs=3)


# -- self verification ------------------------------------------------------

def run_verify(p: Params, ctx: Context) -> Table:
    checks = run_all(seed=ctx.seed, pairs=p.int("pairs", 50), n_max=p.int("n_max", 50),
                     threads=ctx.threads)
    rows = [(c.name, c.value, c.bound, int(c.passed)) for c in checks]
    return Table(["check", "value", "bound", "passed"], {}, rows, n_inputs=1,
                 failed=[c.name for c in checks if not c.passed])


@dataclass(frozen=True)
class Scenario:
    name: str
    summary: str
    runner: Callable[[Params, Context], Table]


SCENARIOS: dict[str, Scenario] = {s.name: s for s in (
    Scenario("switch", "open-control switch of two channels: post-selection, heat, information",
             run_switch),
    Scenario("sweep_b", "definite and indefinite order weights against collision count", run_sweep_b),
    Scenario("monitoring_info", "available information after switching MUB monitorings",
             run_monitoring_info),
    Scenario("fridge_cop", "refrigerator COP over collisions and bath temperature", run_fridge_cop),
    Scenario("fridge_cop_prime", "refrigerator COP including control heat, over collisions and omega",
             run_fridge_cop_prime),
    Scenario("refrigeration_region", "closed-control cooling region over bath temperatures",
             run_refrigeration_region),
    Scenario("control_heat", "heat drawn by the control from the cold bath", run_control_heat),
    Scenario("verify", "closed forms against the brute-force simulator", run_verify),
)}


def scenario_names() -> Iterable[str]:
    return SCENARIOS.keys()
