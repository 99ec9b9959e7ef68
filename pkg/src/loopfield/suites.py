"""Seeded verification suites for the samplers and inversion engines.

Each suite is a deterministic function of a single seed: it draws samples
from the library, compares them against independent oracles (hand-inverted
Green functions, exact finite-state enumerations, closed-form laws, or a
second sampler with a known law), and returns a `SuiteReport`.  Distribution
comparisons use two-sample KS / chi-square checks at a Bonferroni-adjusted
familywise level of 0.01 per suite; moment checks use a 4-5 sigma band;
identities that must hold pathwise use absolute tolerances.

The suites double as the acceptance gate: `ACCEPTANCE` lists them in
criterion order.
"""

from __future__ import annotations

import itertools
import math
import time
from collections import Counter

import numpy as np
from scipy.stats import multivariate_normal

from .couplings import (
    current_exact,
    current_fk_forward,
    fk_exact,
    fk_from_field,
    forward_rk_coupling,
    ising_exact,
    lupu_lift_loopsoup,
    sign_sample_on_clusters,
)
from .gff import FieldReal, condition, conditional_moments, sample_gff
from .graph import (
    Graph,
    build_graph,
    clusters,
    dirichlet_form,
    green_function,
    harmonic_killing_transform,
    precision_matrix,
)
from .inverse import (
    forward_enlarged,
    init_inverse_from_counts,
    init_inverse_from_field,
    invert_current_from_fk,
    invert_loop_soup,
    run_inverse,
    run_inverse_discrete,
    run_inverse_jump_rates,
    reconstruct_initial_field,
)
from .jump import run_conditioned_to_return, run_to_inverse_local_time
from .loops import fields, sample_loop_soup
from .stats import (
    CheckResult,
    SuiteReport,
    bool_check,
    calibration_check,
    chi2_goodness,
    chi2_two_sample,
    exact_check,
    finalize_suite,
    ks_check,
    make_rng,
    moment_check,
)

# ---------------------------------------------------------------------------
# reference graphs and hand-checked constants


def _g_single(w: float = 1.0) -> Graph:
    return build_graph(
        {"vertices": ["a", "b"], "edges": [["a", "b", w]]}, allow_recurrent=True
    )


def _g_two() -> Graph:
    # a - b with unit conductance and killing 1 at a; the precision matrix
    # [[2,-1],[-1,1]] inverts to [[1,1],[1,2]]
    return build_graph(
        {"vertices": ["a", "b"], "edges": [["a", "b", 1.0]], "kappa": {"a": 1.0}}
    )


G_TWO = np.array([[1.0, 1.0], [1.0, 2.0]])


def _g_triangle() -> Graph:
    return build_graph(
        {
            "vertices": ["a", "b", "c"],
            "edges": [["a", "b", 1.0], ["b", "c", 1.0], ["c", "a", 1.0]],
        },
        allow_recurrent=True,
    )


def _g_path_killed() -> Graph:
    # a - b - c with unit conductances and killing 1 at a; the precision
    # matrix [[2,-1,0],[-1,2,-1],[0,-1,1]] inverts to G_PATH below
    return build_graph(
        {
            "vertices": ["a", "b", "c"],
            "edges": [["a", "b", 1.0], ["b", "c", 1.0]],
            "kappa": {"a": 1.0},
        }
    )


G_PATH = np.array([[1.0, 1.0, 1.0], [1.0, 2.0, 2.0], [1.0, 2.0, 3.0]])


def _g_walk() -> Graph:
    # a - b - c with killing 1 at c; det of [[1,-1,0],[-1,2,-1],[0,-1,2]]
    # is 1, so G(a,a) = 3, and the hitting probabilities of a are
    # h = (1, 2/3, 1/3); pinned at a the free covariance is [[2,1],[1,2]]/3
    return build_graph(
        {
            "vertices": ["a", "b", "c"],
            "edges": [["a", "b", 1.0], ["b", "c", 1.0]],
            "kappa": {"c": 1.0},
        }
    )


H_WALK = np.array([1.0, 2.0 / 3.0, 1.0 / 3.0])
G0_WALK = np.array([[0.0, 0.0, 0.0],
                    [0.0, 2.0 / 3.0, 1.0 / 3.0],
                    [0.0, 1.0 / 3.0, 2.0 / 3.0]])
GAA_WALK = 3.0


def _g_path_free() -> Graph:
    return build_graph(
        {"vertices": ["a", "b", "c"], "edges": [["a", "b", 1.0], ["b", "c", 1.0]]},
        allow_recurrent=True,
    )


def _g_kite() -> Graph:
    return build_graph(
        {
            "vertices": ["a", "b", "c", "d"],
            "edges": [["a", "b", 1.0], ["b", "c", 0.8], ["c", "a", 1.2],
                      ["c", "d", 0.5]],
            "kappa": {"d": 0.5},
        }
    )


def _key(open_ids) -> tuple:
    return tuple(sorted(open_ids))


def _open_ids(g: Graph, counts) -> list[int]:
    return [g.edges[pos].id for pos in range(g.m) if counts[pos] > 0]


def _snap_atom(values: np.ndarray, atom: float, tol: float = 1e-9) -> np.ndarray:
    # Duration laws have an atom at the no-excursion value.  The samplers
    # under comparison realize it with different rounding (a single holding
    # vs. an accumulated sum), which a two-sample KS would read as a real
    # gap; align the tie before testing.
    return np.where(np.abs(values - atom) <= tol, atom, values)


# ---------------------------------------------------------------------------
# criterion 1: exact single-edge cluster / current identities


def suite_single_edge_couplings(seed: int) -> SuiteReport:
    """Single-edge spin, cluster, and current laws against closed forms."""
    g = _g_single()
    checks: list[CheckResult] = []
    for j in (0.3, 1.0, 2.0):
        fk = fk_exact(g, j)
        cur = current_exact(g, j, n_max=40)
        t = math.tanh(j)
        checks.append(
            exact_check(f"P(open) = tanh J at J={j}", fk.prob((1,)), t, 1e-12)
        )
        checks.append(
            exact_check(f"P(current 0) = 1/cosh J at J={j}", cur.prob((0,)),
                        1.0 / math.cosh(j), 1e-12)
        )
        # exact pushforward current -> open/closed through the one-step
        # kernel (positive current opens; zero opens with prob 1-e^{-J})
        p_open = sum(p for n, p in zip(cur.outcomes, cur.probs) if n[0] > 0)
        p_open += cur.prob((0,)) * -math.expm1(-j)
        checks.append(
            exact_check(f"current->cluster pushforward at J={j}", p_open,
                        fk.prob((1,)), cur.truncation_bound + 1e-10)
        )

    j = 1.0
    isg = ising_exact(g, j)
    fk = fk_exact(g, j)
    cur = current_exact(g, j, n_max=40)
    corr = sum(p * s[0] * s[1] for s, p in zip(isg.outcomes, isg.probs))
    checks.append(
        exact_check("spin correlation = tanh J", corr, math.tanh(j), 1e-12)
    )
    checks.append(
        exact_check("log Z: spins = 2^n * currents",
                    isg.log_z, g.n * math.log(2.0) + cur.log_z, 1e-9)
    )
    checks.append(
        exact_check("log Z: spins = e^{sum J} * clusters",
                    isg.log_z, j + fk.log_z, 1e-9)
    )

    n = 4000
    rng = make_rng(seed, "single-edge")
    opens = Counter()
    for cur_n in cur.sample(rng, n):
        ids = current_fk_forward(g, j, cur_n, rng)
        opens["open" if ids else "closed"] += 1
    t = math.tanh(j)
    checks.append(
        chi2_goodness("sampled current->cluster coupling", opens,
                      {"open": t, "closed": 1.0 - t})
    )
    spins = Counter()
    for om in fk.sample(rng, n):
        ids = [g.edges[pos].id for pos, o in enumerate(om) if o]
        sig = sign_sample_on_clusters(g, ids, rng)
        spins[tuple(int(s) for s in sig)] += 1
    checks.append(
        chi2_goodness("sampled cluster->spin coupling", spins,
                      dict(zip(isg.outcomes, isg.probs)))
    )
    return finalize_suite("single-edge-couplings", seed, checks)


# ---------------------------------------------------------------------------
# criterion 2: triangle cluster-sign pushforward equals the spin law


def _fk_sign_pushforward(g: Graph, fk) -> dict:
    """Exact spin law obtained by signing FK clusters uniformly."""
    push: dict[tuple, float] = {}
    for om, p in zip(fk.outcomes, fk.probs):
        ids = [g.edges[pos].id for pos, o in enumerate(om) if o]
        part = clusters(g, ids)
        w = p / 2 ** part.count
        for assign in itertools.product((-1, 1), repeat=part.count):
            sig = tuple(assign[part.assignment[x]] for x in range(g.n))
            push[sig] = push.get(sig, 0.0) + w
    return push


def suite_fk_ising_triangle(seed: int) -> SuiteReport:
    """Exact triangle enumeration identities and the sampled couplings."""
    g = _g_triangle()
    j = np.array([0.5, 0.8, 0.3])
    isg = ising_exact(g, j)
    fk = fk_exact(g, j)
    cur = current_exact(g, j, n_max=14)
    checks: list[CheckResult] = []

    push = _fk_sign_pushforward(g, fk)
    tv = 0.5 * sum(
        abs(push.get(s, 0.0) - p) for s, p in zip(isg.outcomes, isg.probs)
    )
    tv += 0.5 * sum(p for s, p in push.items() if s not in set(isg.outcomes))
    checks.append(
        exact_check("cluster-sign pushforward TV distance", tv, 0.0, 1e-10)
    )

    checks.append(
        exact_check("log Z: spins = 2^n * currents",
                    isg.log_z, g.n * math.log(2.0) + cur.log_z,
                    cur.truncation_bound + 1e-9)
    )
    checks.append(
        exact_check("log Z: spins = e^{sum J} * clusters",
                    isg.log_z, float(j.sum()) + fk.log_z, 1e-9)
    )
    # two-point functions: <sigma_x sigma_y> equals the connection probability
    for x, y in ((0, 1), (1, 2), (0, 2)):
        corr = sum(p * s[x] * s[y] for s, p in zip(isg.outcomes, isg.probs))
        conn = 0.0
        for om, p in zip(fk.outcomes, fk.probs):
            ids = [g.edges[pos].id for pos, o in enumerate(om) if o]
            if clusters(g, ids).same(x, y):
                conn += p
        checks.append(
            exact_check(
                f"correlation = connection prob ({g.labels[x]},{g.labels[y]})",
                corr, conn, 1e-10,
            )
        )

    n = 4000
    rng = make_rng(seed, "triangle")
    spins = Counter()
    for om in fk.sample(rng, n):
        ids = [g.edges[pos].id for pos, o in enumerate(om) if o]
        sig = sign_sample_on_clusters(g, ids, rng)
        spins[tuple(int(s) for s in sig)] += 1
    checks.append(
        chi2_goodness("sampled cluster->spin coupling", spins,
                      dict(zip(isg.outcomes, isg.probs)))
    )
    configs = Counter()
    for cur_n in cur.sample(rng, n):
        ids = current_fk_forward(g, j, cur_n, rng)
        configs[_key(ids)] += 1
    fk_probs = {
        _key([g.edges[pos].id for pos, o in enumerate(om) if o]): p
        for om, p in zip(fk.outcomes, fk.probs)
    }
    checks.append(
        chi2_goodness("sampled current->cluster coupling", configs, fk_probs)
    )
    return finalize_suite("fk-ising-triangle", seed, checks)


# ---------------------------------------------------------------------------
# criterion 3: field sampler against hand-inverted Green functions


def suite_gff_sampler(seed: int) -> SuiteReport:
    checks: list[CheckResult] = []

    g2 = _g_two()
    checks.append(
        exact_check("two-vertex Green function matches hand inverse",
                    float(np.abs(green_function(g2) - G_TWO).max()), 0.0, 1e-9)
    )
    n = 100_000
    rng = make_rng(seed, "field", "two")
    smp = sample_gff(g2, condition(), rng, size=n)
    prods = np.column_stack([
        smp[:, 0], smp[:, 1],
        smp[:, 0] ** 2, smp[:, 1] ** 2, smp[:, 0] * smp[:, 1],
    ])
    expect = [0.0, 0.0, G_TWO[0, 0], G_TWO[1, 1], G_TWO[0, 1]]
    checks.append(
        moment_check("two-vertex mean and covariance", prods, expect,
                     n_sigma=5.0)
    )

    # density consistency: log-density ratios reduce to the energy form
    f1 = np.array([0.4, -1.1])
    f2 = np.array([1.3, 0.2])
    ref = multivariate_normal(mean=np.zeros(2), cov=G_TWO)
    ratio = float(ref.logpdf(f1) - ref.logpdf(f2))
    checks.append(
        exact_check("log-density ratio = -(E(f1)-E(f2))/2", ratio,
                    -0.5 * (dirichlet_form(g2, f1) - dirichlet_form(g2, f2)),
                    1e-8)
    )

    g = _g_path_killed()
    checks.append(
        exact_check("path Green function matches hand inverse",
                    float(np.abs(green_function(g) - G_PATH).max()), 0.0, 1e-9)
    )
    f = np.array([0.3, -1.2, 2.0])
    lam = precision_matrix(g)
    checks.append(
        exact_check("energy form = f' Lambda f",
                    dirichlet_form(g, f), float(f @ lam @ f), 1e-12)
    )

    n = 20_000
    rng = make_rng(seed, "field", "path")
    # pinned at a: mean extends harmonically (h = 1 off the killing), free
    # covariance is the inverse of [[2,-1],[-1,1]], i.e. [[1,1],[1,2]]
    smp2 = sample_gff(g, condition({0: 2.0}), rng, size=n)
    prods2 = np.column_stack([
        smp2[:, 1], smp2[:, 2],
        smp2[:, 1] ** 2, smp2[:, 2] ** 2, smp2[:, 1] * smp2[:, 2],
    ])
    expect2 = [2.0, 2.0, 5.0, 6.0, 5.0]
    checks.append(moment_check("pinned moments", prods2, expect2, n_sigma=4.5))
    checks.append(
        bool_check("pinned value reproduced exactly",
                   bool(np.all(smp2[:, 0] == 2.0)))
    )
    mom = conditional_moments(g, condition({0: 2.0}))
    checks.append(
        exact_check("conditional mean formula",
                    float(np.abs(mom.mean - np.array([2.0, 2.0, 2.0])).max()),
                    0.0, 1e-9)
    )
    free = sample_gff(g, condition(), rng, size=n)
    ref_n = math.sqrt(G_PATH[2, 2]) * make_rng(seed, "field-ref").standard_normal(n)
    checks.append(ks_check("marginal at c is centred Gaussian", free[:, 2], ref_n))
    return finalize_suite("gff-sampler", seed, checks)


# ---------------------------------------------------------------------------
# criterion 4: loop-ensemble occupation field at intensity 1/2


def suite_lejan(seed: int) -> SuiteReport:
    checks: list[CheckResult] = []

    g2 = _g_two()
    n = 20_000
    rng = make_rng(seed, "soup", "two")
    occ2 = np.empty((n, 2))
    for i in range(n):
        occ2[i], _ = fields(g2, sample_loop_soup(g2, 0.5, rng))
    phi2 = sample_gff(g2, condition(), make_rng(seed, "soup-two-ref"), size=n)
    checks.append(
        moment_check("two-vertex occupation mean", occ2,
                     np.diag(G_TWO) / 2, n_sigma=4.0)
    )
    for x in range(2):
        checks.append(
            ks_check(f"two-vertex 2 L = phi^2 at {g2.labels[x]}",
                     2.0 * occ2[:, x], phi2[:, x] ** 2)
        )

    g = _g_path_killed()
    rng = make_rng(seed, "soup")
    occ = np.empty((n, 3))
    for i in range(n):
        soup = sample_loop_soup(g, 0.5, rng)
        occ[i], _ = fields(g, soup)

    d = np.diag(G_PATH)
    prods = np.column_stack([
        occ[:, 0], occ[:, 1], occ[:, 2],
        occ[:, 0] ** 2, occ[:, 1] ** 2, occ[:, 2] ** 2,
        occ[:, 0] * occ[:, 1], occ[:, 0] * occ[:, 2], occ[:, 1] * occ[:, 2],
    ])
    # E L_x = G_xx / 2;  E L_x L_y = G_xy^2 / 2 + G_xx G_yy / 4
    expect = [
        d[0] / 2, d[1] / 2, d[2] / 2,
        3 * d[0] ** 2 / 4, 3 * d[1] ** 2 / 4, 3 * d[2] ** 2 / 4,
        G_PATH[0, 1] ** 2 / 2 + d[0] * d[1] / 4,
        G_PATH[0, 2] ** 2 / 2 + d[0] * d[2] / 4,
        G_PATH[1, 2] ** 2 / 2 + d[1] * d[2] / 4,
    ]
    checks.append(moment_check("occupation moments", prods, expect, n_sigma=4.0))

    phi = sample_gff(g, condition(), make_rng(seed, "soup-ref"), size=n)
    for x in range(g.n):
        checks.append(
            ks_check(f"2 L = phi^2 at {g.labels[x]}",
                     2.0 * occ[:, x], phi[:, x] ** 2)
        )
    return finalize_suite("lejan", seed, checks)


# ---------------------------------------------------------------------------
# criterion 5: local times of the stopped walk shift squared fields


def suite_ray_knight(seed: int) -> SuiteReport:
    g = _g_path_free()
    n = 20_000
    checks: list[CheckResult] = []
    for u in (0.5, 2.0):
        rng = make_rng(seed, "walk", u)
        phi0 = sample_gff(g, condition({0: 0.0}), rng, size=n)
        ell = np.empty((n, 3))
        for i in range(n):
            traj = run_to_inverse_local_time(g, 0, u, rng)
            ell[i] = traj.local_times(g)
        s_field = ell + 0.5 * phi0 ** 2

        rng2 = make_rng(seed, "walk-ref", u)
        phiu = sample_gff(g, condition({0: math.sqrt(2 * u)}), rng2, size=n)
        t_field = 0.5 * phiu ** 2

        checks.extend([
            exact_check(f"u={u}: root local time is exactly u",
                        float(np.abs(s_field[:, 0] - u).max()), 0.0, 1e-9),
            moment_check(f"u={u}: mean local time is u everywhere",
                         ell[:, 1:], [u, u], n_sigma=4.5),
            # pinned at a the free covariance is [[1,1],[1,2]] and the means
            # are sqrt(2u), so E[phi_b^2 phi_c^2]/4 = (4u^2 + 14u + 4)/4
            moment_check(f"u={u}: joint shifted product",
                         s_field[:, 1] * s_field[:, 2],
                         (4 * u * u + 14 * u + 4) / 4.0, n_sigma=4.5),
            ks_check(f"u={u}: shifted squares at b", s_field[:, 1],
                     t_field[:, 1]),
            ks_check(f"u={u}: shifted squares at c", s_field[:, 2],
                     t_field[:, 2]),
        ])
    return finalize_suite("ray-knight", seed, checks)


# ---------------------------------------------------------------------------
# criterion 6: forward level-u coupling marginals


def suite_forward_coupling(seed: int) -> SuiteReport:
    g = _g_walk()
    u = 0.8
    su = math.sqrt(2 * u)
    n = 4000
    rng = make_rng(seed, "forward")
    vals = np.empty((n, 3))
    cons_err = 0.0
    configs = Counter()
    cal_p: list[float] = []
    cal_x: list[float] = []
    opposite_opened = False
    for i in range(n):
        fc = forward_rk_coupling(g, 0, u, rng)
        v = fc.phi_u.values
        vals[i] = v
        ell = fc.trajectory.local_times(g)
        cons_err = max(cons_err, float(np.abs(
            v ** 2 - fc.phi0.values ** 2 - 2.0 * ell
        ).max()))
        configs[_key(fc.open_u)] += 1
        for e in g.edges:
            prod = v[e.u] * v[e.v]
            is_open = e.id in fc.open_u
            if prod > 0:
                cal_p.append(-math.expm1(-2.0 * e.w * prod))
                cal_x.append(1.0 if is_open else 0.0)
            elif is_open:
                opposite_opened = True

    rng2 = make_rng(seed, "forward-ref")
    ref = sample_gff(g, condition({0: su}), rng2, size=n)
    ref_configs = Counter()
    for i in range(n):
        ref_configs[_key(fk_from_field(g, FieldReal(ref[i]), rng2))] += 1

    checks = [
        exact_check("squared field = initial + 2 local time", cons_err, 0.0, 1e-9),
        bool_check("root value pinned at sqrt(2u)",
                   bool(np.all(vals[:, 0] == su))),
        bool_check("opposite-sign edges never open", not opposite_opened),
        # the pinned component is deterministic; moments cover the free ones
        moment_check("field mean is sqrt(2u) h", vals[:, 1:],
                     su * H_WALK[1:], n_sigma=4.0),
        moment_check("field second moment", vals[:, 1:] ** 2,
                     (2 * u * H_WALK ** 2 + np.diag(G0_WALK))[1:], n_sigma=4.0),
        calibration_check("open-edge frequency given the field",
                          np.array(cal_p), np.array(cal_x)),
        ks_check("field marginal at b", vals[:, 1], ref[:, 1]),
        ks_check("field marginal at c", vals[:, 2], ref[:, 2]),
        chi2_two_sample("open-edge configuration", configs, ref_configs),
    ]
    return finalize_suite("forward-coupling", seed, checks)


# ---------------------------------------------------------------------------
# criterion 7: enlarged forward dynamics match the static coupling


def suite_forward_enlarged(seed: int) -> SuiteReport:
    g = _g_walk()
    u = 0.8
    n = 4000
    rng = make_rng(seed, "enlarged")
    vals = np.empty((n, 3))
    vals0 = np.empty((n, 3))
    cfg0 = Counter()
    cfg_end = Counter()
    cfg_joint = Counter()
    structural = True
    ordered = True
    monotone = True
    for i in range(n):
        run = forward_enlarged(g, 0, u, rng)
        vals[i] = run.phi_u.values
        vals0[i] = run.phi0.values
        k0 = _key(_open_ids(g, run.n0))
        ke = _key(run.open_end)
        cfg0[k0] += 1
        cfg_end[ke] += 1
        cfg_joint[(k0, ke)] += 1
        cross = run.trajectory.crossings(g)
        if np.any(run.n_end < run.n0 + cross):
            structural = False
        times = [ev.time for ev in run.events]
        if any(t2 < t1 - 1e-12 for t1, t2 in zip(times, times[1:])):
            ordered = False
        last: dict[int, int] = {}
        for ev in run.events:
            if ev.n_after < last.get(ev.edge, 0):
                monotone = False
            last[ev.edge] = ev.n_after

    rng2 = make_rng(seed, "enlarged-ref")
    ref_vals = np.empty((n, 3))
    ref0 = np.empty((n, 3))
    rcfg0 = Counter()
    rcfg_end = Counter()
    rcfg_joint = Counter()
    for i in range(n):
        fc = forward_rk_coupling(g, 0, u, rng2)
        ref_vals[i] = fc.phi_u.values
        ref0[i] = fc.phi0.values
        k0 = _key(fc.open0)
        ke = _key(fc.open_u)
        rcfg0[k0] += 1
        rcfg_end[ke] += 1
        rcfg_joint[(k0, ke)] += 1

    checks = [
        bool_check("stacks dominate initial counts plus crossings", structural),
        bool_check("event times are nondecreasing", ordered),
        bool_check("per-edge stack sizes never decrease", monotone),
        chi2_two_sample("initial open configuration", cfg0, rcfg0),
        chi2_two_sample("final open configuration", cfg_end, rcfg_end),
        chi2_two_sample("joint (initial, final) configuration", cfg_joint,
                        rcfg_joint),
        ks_check("initial field marginal at c", vals0[:, 2], ref0[:, 2]),
        ks_check("final field marginal at b", vals[:, 1], ref_vals[:, 1]),
        ks_check("final field marginal at c", vals[:, 2], ref_vals[:, 2]),
        # the pinned component is deterministic; moments cover the free ones
        moment_check("final field mean", vals[:, 1:],
                     math.sqrt(2 * u) * H_WALK[1:], n_sigma=4.0),
        moment_check("initial field second moment", vals0[:, 1:] ** 2,
                     np.diag(G0_WALK)[1:], n_sigma=4.0),
    ]
    return finalize_suite("forward-enlarged", seed, checks)


# ---------------------------------------------------------------------------
# criterion 8: time reversal - forward enlarged runs vs inverse runs


def suite_inversion(seed: int) -> SuiteReport:
    checks: list[CheckResult] = []
    u = 1.0
    su = math.sqrt(2 * u)
    n = 20_000
    for gname, g in (("two-vertex", _g_two()), ("path", _g_path_killed())):
        rng = make_rng(seed, "inversion", gname, "fwd")
        f_dur = np.empty(n)
        f_cross = [Counter() for _ in range(g.m)]
        f_c0 = Counter()
        f_cend = Counter()
        for i in range(n):
            run = forward_enlarged(g, 0, u, rng)
            f_dur[i] = run.trajectory.total_time
            k = run.trajectory.crossings(g)
            for pos in range(g.m):
                f_cross[pos][int(k[pos])] += 1
            f_c0[clusters(g, _open_ids(g, run.n0)).count] += 1
            f_cend[clusters(g, run.open_end).count] += 1

        rng = make_rng(seed, "inversion", gname, "inv")
        i_dur = np.empty(n)
        i_cross = [Counter() for _ in range(g.m)]
        i_cinit = Counter()
        i_cterm = Counter()
        terminal_ok = True
        root_err = 0.0
        for i in range(n):
            phi_u = sample_gff(g, condition({0: su}), rng)
            st = init_inverse_from_field(g, phi_u, 0, rng)
            i_cinit[clusters(g, st.open_edges()).count] += 1
            run = run_inverse(st, rng)
            i_dur[i] = run.duration
            k = run.trajectory.crossings(g)
            for pos in range(g.m):
                i_cross[pos][int(k[pos])] += 1
            i_cterm[clusters(g, run.terminal_open).count] += 1
            terminal_ok &= run.terminal_vertex == 0
            root_err = max(root_err, abs(st.ell[0] - u))

        checks.append(
            bool_check(f"{gname}: inverse runs end at the pin", terminal_ok)
        )
        checks.append(
            exact_check(f"{gname}: root local time is exactly u", root_err,
                        0.0, 1e-9)
        )
        checks.append(
            ks_check(f"{gname}: duration, forward vs inverse",
                     _snap_atom(f_dur, u), _snap_atom(i_dur, u))
        )
        for pos in range(g.m):
            e = g.edges[pos]
            checks.append(
                chi2_two_sample(
                    f"{gname}: crossings of {g.labels[e.u]}-{g.labels[e.v]}",
                    f_cross[pos], i_cross[pos])
            )
        checks.append(
            chi2_two_sample(f"{gname}: forward end vs inverse start clusters",
                            f_cend, i_cinit)
        )
        checks.append(
            chi2_two_sample(f"{gname}: forward start vs inverse end clusters",
                            f_c0, i_cterm)
        )

    # trajectory law against the conditioned walk, and the reconstructed
    # initial field, on a graph whose killing sits away from the pin
    g = _g_walk()
    u = 0.8
    su = math.sqrt(2 * u)
    m = 2500
    rng = make_rng(seed, "inversion", "walk", "inv")
    ells = np.empty((m, 3))
    recon = np.empty((m, 3))
    for i in range(m):
        phi_u = sample_gff(g, condition({0: su}), rng)
        st = init_inverse_from_field(g, phi_u, 0, rng)
        run = run_inverse(st, rng)
        ells[i] = st.ell
        recon[i] = reconstruct_initial_field(g, run, rng).values
    rng2 = make_rng(seed, "inversion", "walk", "ref")
    ref_ells = np.empty((m, 3))
    for i in range(m):
        ref_ells[i] = run_conditioned_to_return(g, 0, u, rng2).local_times(g)
    ref0 = sample_gff(g, condition({0: 0.0}), rng2, size=m)
    checks.extend([
        exact_check("walk: root local time is exactly u",
                    float(np.abs(ells[:, 0] - u).max()), 0.0, 1e-9),
        moment_check("walk: mean local time is u h^2", ells[:, 1:],
                     u * H_WALK[1:] ** 2, n_sigma=4.5),
        ks_check("walk: local time at b vs conditioned walk", ells[:, 1],
                 ref_ells[:, 1]),
        ks_check("walk: local time at c vs conditioned walk", ells[:, 2],
                 ref_ells[:, 2]),
        ks_check("walk: reconstructed field at b", recon[:, 1], ref0[:, 1]),
        ks_check("walk: reconstructed field at c", recon[:, 2], ref0[:, 2]),
    ])
    return finalize_suite("inversion", seed, checks)


# ---------------------------------------------------------------------------
# criterion 9: structural invariants at 100%


def suite_invariants(seed: int) -> SuiteReport:
    import json
    import os
    import tempfile

    from .graph import load_graph, save_graph

    checks: list[CheckResult] = []
    for name, g in (("walk", _g_walk()), ("kite", _g_kite()),
                    ("path", _g_path_killed())):
        rng = make_rng(seed, "invariants", name)
        u = 0.7
        su = math.sqrt(2 * u)
        terminal_ok = True
        depleted = True
        contained = True
        cons = 0.0
        ltime = 0.0
        ordered = True
        adjacent = True
        monotone = True
        parity = True
        for _ in range(60):
            phi_u = sample_gff(g, condition({0: su}), rng)
            st = init_inverse_from_field(g, phi_u, 0, rng)
            run = run_inverse(st, rng)
            terminal_ok &= run.terminal_vertex == 0
            depleted &= run.terminal_sq[run.terminal_vertex] == 0.0
            contained &= run.containment_violations == 0
            cons = max(cons, float(np.abs(
                st.sq0 - run.terminal_sq - 2.0 * st.ell
            ).max()))
            ltime = max(ltime, float(np.abs(
                run.trajectory.local_times(g) - st.ell
            ).max()))
            times = [ev.time for ev in run.events]
            ordered &= all(b >= a - 1e-12 for a, b in zip(times, times[1:]))
            last: dict[int, int] = {}
            for ev in run.events:
                if ev.edge is None:
                    continue
                e = g.edges[g.edge_position(ev.edge)]
                if {ev.src, ev.dst} - {e.u, e.v}:
                    adjacent = False
                if ev.n_after > last.get(ev.edge, 10 ** 9):
                    monotone = False
                last[ev.edge] = ev.n_after
            deg = np.zeros(g.n, dtype=int)
            for pos, k in enumerate(run.trajectory.crossings(g)):
                deg[g.edges[pos].u] += k
                deg[g.edges[pos].v] += k
            parity &= not np.any(deg & 1)
        checks.append(bool_check(f"{name}: stage ends at the pin", terminal_ok))
        checks.append(bool_check(f"{name}: pin magnitude depleted to zero",
                                 depleted))
        checks.append(bool_check(f"{name}: pin cluster containment", contained))
        checks.append(
            exact_check(f"{name}: field conservation", cons, 0.0, 1e-9)
        )
        checks.append(
            exact_check(f"{name}: trajectory local times match state", ltime,
                        0.0, 1e-9)
        )
        checks.append(bool_check(f"{name}: event times nondecreasing", ordered))
        checks.append(bool_check(f"{name}: events use adjacent edges", adjacent))
        checks.append(bool_check(f"{name}: stack sizes never increase", monotone))
        checks.append(bool_check(f"{name}: crossing parity at every vertex",
                                 parity))

        fc_ok = True
        for _ in range(40):
            fc = forward_rk_coupling(g, 0, u, rng)
            crossed = {e.id for e, k in
                       zip(g.edges, fc.trajectory.crossings(g)) if k > 0}
            fc_ok &= fc.open_u >= (fc.open0 | crossed)
        checks.append(
            bool_check(f"{name}: forward coupling only opens edges", fc_ok)
        )

    # fk_from_field must keep opposite-sign edges closed
    g = _g_kite()
    rng = make_rng(seed, "invariants", "fk")
    sign_ok = True
    smp = sample_gff(g, condition(), rng, size=200)
    for i in range(200):
        phi = FieldReal(smp[i])
        ids = fk_from_field(g, phi, rng)
        for eid in ids:
            e = g.edges[g.edge_position(eid)]
            if smp[i][e.u] * smp[i][e.v] <= 0:
                sign_ok = False
    checks.append(bool_check("field clusters never join opposite signs",
                             sign_ok))

    # cluster partition against plain reachability
    rng = make_rng(seed, "invariants", "clusters")
    agree = True
    for _ in range(50):
        ids = [e.id for e in g.edges if rng.random() < 0.5]
        part = clusters(g, ids)
        open_pos = {g.edge_position(i) for i in ids}
        for x in range(g.n):
            reach = {x}
            frontier = [x]
            while frontier:
                v = frontier.pop()
                for pos, _, y, _ in g.adjacency(v):
                    if pos in open_pos and y not in reach:
                        reach.add(y)
                        frontier.append(y)
            for y in range(g.n):
                agree &= part.same(x, y) == (y in reach)
    checks.append(bool_check("cluster partition matches reachability", agree))

    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
        path = fh.name
    try:
        save_graph(path, g, x0="a", u=0.7)
        g2, x0, u2 = load_graph(path)
        with open(path) as fh:
            json.load(fh)  # must be valid JSON
    finally:
        os.unlink(path)
    checks.append(
        bool_check("graph file round trip",
                   g2 == g and x0 == "a" and u2 == 0.7)
    )
    return finalize_suite("invariants", seed, checks)


# ---------------------------------------------------------------------------
# criterion 10: the three inverse engines share one law


def _enumerate_discrete(g: Graph, x0: int, counts: np.ndarray) -> dict:
    """Exact distribution of the crossings tuple for the counts-only chain."""
    out: dict[tuple, float] = {}

    def conn(n, a, b):
        if a == b:
            return True
        seen = {a}
        stack = [a]
        while stack:
            x = stack.pop()
            for pos, _, y, _ in g.adjacency(x):
                if n[pos] > 0 and y not in seen:
                    if y == b:
                        return True
                    seen.add(y)
                    stack.append(y)
        return False

    def rec(x, n, cross, p):
        adj = [(pos, y) for pos, _, y, _ in g.adjacency(x) if n[pos] > 0]
        if not adj:
            key = tuple(cross)
            out[key] = out.get(key, 0.0) + p
            return
        total = sum(n[pos] for pos, _ in adj)
        for pos, y in adj:
            pe = p * n[pos] / total
            n2 = list(n)
            n2[pos] -= 1
            c2 = list(cross)
            c2[pos] += 1
            if n2[pos] > 0 or conn(n2, x, y):
                rec(y, n2, c2, pe / 2)
                rec(x, n2, cross, pe / 2)
            elif conn(n2, x0, x):
                rec(x, n2, cross, pe)
            else:
                rec(y, n2, c2, pe)

    rec(x0, list(counts), [0] * g.m, 1.0)
    return out


def suite_engine_equivalence(seed: int) -> SuiteReport:
    checks: list[CheckResult] = []
    g = _g_triangle()
    counts0 = np.array([2, 1, 1])
    exact = _enumerate_discrete(g, 0, counts0)
    checks.append(
        exact_check("enumeration oracle total mass",
                    sum(exact.values()), 1.0, 1e-12)
    )

    n = 5000
    rng = make_rng(seed, "engines", "discrete")
    freq = Counter()
    for _ in range(n):
        run = run_inverse_discrete(g, 0, counts0, rng)
        freq[tuple(int(c) for c in run.crossings)] += 1
    checks.append(
        chi2_goodness("counts-only chain vs exact enumeration", freq, exact)
    )

    for label, values in (("generic field", [1.2, 0.9, 1.1]),
                          ("second field", [0.7, 1.8, 0.6])):
        rng = make_rng(seed, "engines", label)
        phi = FieldReal(np.array(values))
        freq = Counter()
        for _ in range(n):
            st = init_inverse_from_counts(g, phi, 0, counts0, rng)
            run = run_inverse(st, rng)
            freq[tuple(int(c) for c in run.trajectory.crossings(g))] += 1
        checks.append(
            chi2_goodness(f"stack engine embedded chain ({label})", freq, exact)
        )

    # stack vs jump-rate dynamics, same field and open set
    phi = FieldReal(np.array([1.2, 0.9, 1.1]))
    all_ids = [e.id for e in g.edges]
    m = 4000
    rng = make_rng(seed, "engines", "stack-dyn")
    s_dur = np.empty(m)
    s_ellb = np.empty(m)
    s_cross = Counter()
    s_open = Counter()
    for i in range(m):
        st = init_inverse_from_field(g, phi, 0, rng, given_open=all_ids)
        run = run_inverse(st, rng)
        s_dur[i] = run.duration
        s_ellb[i] = st.ell[1]
        s_cross[int(run.trajectory.crossings(g).sum())] += 1
        s_open[_key(run.terminal_open)] += 1
    rng = make_rng(seed, "engines", "rate-dyn")
    r_dur = np.empty(m)
    r_ellb = np.empty(m)
    r_cross = Counter()
    r_open = Counter()
    for i in range(m):
        run = run_inverse_jump_rates(g, phi, 0, all_ids, rng)
        r_dur[i] = run.duration
        r_ellb[i] = run.trajectory.local_times(g)[1]
        r_cross[int(run.trajectory.crossings(g).sum())] += 1
        r_open[_key(run.terminal_open)] += 1
    atom = float(phi.values[0]) ** 2 / 2.0
    checks.append(ks_check("engine duration", _snap_atom(s_dur, atom),
                           _snap_atom(r_dur, atom)))
    checks.append(ks_check("engine local time at b", s_ellb, r_ellb))
    checks.append(chi2_two_sample("engine jump counts", s_cross, r_cross))
    checks.append(chi2_two_sample("engine terminal configuration", s_open,
                                  r_open))

    # single edge: closure level against the closed-form law, both engines
    g1 = _g_single()
    phi1 = FieldReal(np.array([1.3, 1.1]))
    j0 = 1.3 * 1.1
    m = 4000

    def closure_level(run):
        close_ev, dep_ev = run.events[-2], run.events[-1]
        other = 1 - run.terminal_vertex
        return math.sqrt(
            2.0 * (dep_ev.time - close_ev.time) * run.terminal_sq[other]
        )

    rng = make_rng(seed, "engines", "closure-stack")
    lv_stack = np.empty(m)
    no_cross = 0
    for i in range(m):
        st = init_inverse_from_field(g1, phi1, 0, rng, given_open=[0])
        run = run_inverse(st, rng)
        lv_stack[i] = closure_level(run)
        if run.trajectory.crossings(g1)[0] == 0:
            no_cross += 1
    rng = make_rng(seed, "engines", "closure-rate")
    lv_rate = np.empty(m)
    for i in range(m):
        run = run_inverse_jump_rates(g1, phi1, 0, [0], rng)
        lv_rate[i] = closure_level(run)
    # closure J-level law given J(0): P(level <= j) = (1-e^{-2j})/(1-e^{-2J0})
    uu = make_rng(seed, "engines", "closure-ref").random(m)
    lv_ref = -0.5 * np.log1p(uu * math.expm1(-2.0 * j0))
    checks.append(ks_check("closure level, stack engine", lv_stack, lv_ref))
    checks.append(ks_check("closure level, jump-rate engine", lv_rate, lv_ref))
    # P(no crossing | edge open) = 2 / (e^J + 1): averaging 2^{1-k} over the
    # positive-conditioned Poisson(2J) stack size
    p0 = 2.0 / (math.exp(j0) + 1.0)
    checks.append(
        chi2_goodness("crossing-free probability",
                      {"none": no_cross, "some": m - no_cross},
                      {"none": p0, "some": 1.0 - p0})
    )
    return finalize_suite("engine-equivalence", seed, checks)


# ---------------------------------------------------------------------------
# criterion 11: cluster sample -> integer current


def suite_current_inversion(seed: int) -> SuiteReport:
    checks: list[CheckResult] = []
    n = 120_000

    g1 = _g_single()
    j1 = 1.0
    cur1 = current_exact(g1, j1, n_max=40)
    fk1 = fk_exact(g1, j1)
    rng = make_rng(seed, "current", "single")
    freq = Counter()
    for om in fk1.sample(rng, n):
        ids = [g1.edges[0].id] if om[0] else []
        cur = invert_current_from_fk(g1, j1, ids, rng)
        freq[int(cur[0])] += 1
    probs = {k: cur1.prob((k,)) for k in range(16)}
    checks.append(chi2_goodness("single-edge current law", freq, probs))

    g3 = _g_triangle()
    j3 = np.array([0.5, 0.8, 0.3])
    cur3 = current_exact(g3, j3, n_max=12)
    fk3 = fk_exact(g3, j3)
    checks.append(
        bool_check("triangle truncation budget",
                   cur3.truncation_bound < 1e-9,
                   detail=f"bound={cur3.truncation_bound:.3g}")
    )
    rng = make_rng(seed, "current", "triangle")
    freq3 = Counter()
    parity_ok = True
    for om in fk3.sample(rng, n):
        ids = [g3.edges[pos].id for pos, o in enumerate(om) if o]
        cur = invert_current_from_fk(g3, j3, ids, rng)
        freq3[tuple(int(c) for c in cur)] += 1
        deg = 0
        for pos, c in enumerate(cur):
            if c & 1:
                deg ^= (1 << g3.edges[pos].u) | (1 << g3.edges[pos].v)
        parity_ok &= deg == 0
    checks.append(
        chi2_goodness("triangle current law", freq3,
                      dict(zip(cur3.outcomes, cur3.probs)))
    )
    checks.append(bool_check("currents are source free", parity_ok))

    # the shifted initializer (one plus a Poisson count on open edges) is a
    # documented variant whose output law provably differs; confirm the
    # harness can tell them apart rather than reconciling them
    m = 4000
    rng = make_rng(seed, "current", "single-alt")
    freq_alt = Counter()
    for om in fk1.sample(rng, m):
        ids = [g1.edges[0].id] if om[0] else []
        cur = invert_current_from_fk(g1, j1, ids, rng,
                                     stack_law="one-plus-poisson")
        freq_alt[int(cur[0])] += 1
    alt = chi2_goodness("shifted stack law", freq_alt, probs)
    checks.append(
        bool_check(
            "shifted-by-one stack law is detectably different",
            alt.p_value is not None and alt.p_value < 1e-6,
            detail=f"p={alt.p_value:.3g} (positive-conditioned law is the "
                   "consistent one)",
        )
    )
    return finalize_suite("current-inversion", seed, checks)


# ---------------------------------------------------------------------------
# criterion 12: field -> loop ensemble -> field round trip


def suite_loop_soup_roundtrip(seed: int) -> SuiteReport:
    g = _g_path_killed()
    checks: list[CheckResult] = []

    n = 5000
    rng = make_rng(seed, "roundtrip", "lift")
    phi = sample_gff(g, condition(), rng, size=n)
    lifted = np.empty((n, 3))
    cons = 0.0
    mag_err = 0.0
    for i in range(n):
        soup = invert_loop_soup(g, FieldReal(phi[i]), rng)
        occ, _ = fields(g, soup)
        cons = max(cons, float(np.abs(2.0 * occ - phi[i] ** 2).max()))
        _, phi2 = lupu_lift_loopsoup(g, soup, rng)
        lifted[i] = phi2.values
        mag_err = max(mag_err, float(np.abs(
            np.abs(phi2.values) - np.abs(phi[i])
        ).max()))
    prods = np.column_stack([
        lifted[:, 0], lifted[:, 1], lifted[:, 2],
        lifted[:, 0] ** 2, lifted[:, 1] ** 2, lifted[:, 2] ** 2,
        lifted[:, 0] * lifted[:, 1], lifted[:, 0] * lifted[:, 2],
        lifted[:, 1] * lifted[:, 2],
    ])
    expect = [0.0, 0.0, 0.0,
              G_PATH[0, 0], G_PATH[1, 1], G_PATH[2, 2],
              G_PATH[0, 1], G_PATH[0, 2], G_PATH[1, 2]]
    checks.append(
        exact_check("2 L = phi^2 on every run", cons, 0.0, 1e-9)
    )
    checks.append(
        exact_check("lift preserves magnitudes", mag_err, 0.0, 1e-9)
    )
    checks.append(
        moment_check("lifted field matches the free field law", prods, expect,
                     n_sigma=4.0)
    )

    # the inverted ensemble looks like a freshly sampled intensity-1/2 soup
    m = 1800
    rng = make_rng(seed, "roundtrip", "soups")
    phi_b = sample_gff(g, condition(), rng, size=m)
    counts_at = [Counter() for _ in range(g.n)]
    durations: list[float] = []
    occ_b = np.empty(m)
    cross_ab = Counter()
    for i in range(m):
        soup = invert_loop_soup(g, FieldReal(phi_b[i]), rng)
        occ, crossings = fields(g, soup)
        occ_b[i] = occ[1]
        cross_ab[int(crossings[0])] += 1
        per_root = Counter(loop.start for loop in soup.loops)
        for x in range(g.n):
            counts_at[x][per_root.get(x, 0)] += 1
        durations.extend(loop.total_time for loop in soup.loops)

    rng2 = make_rng(seed, "roundtrip-ref")
    ref_counts_at = [Counter() for _ in range(g.n)]
    ref_durations: list[float] = []
    ref_occ_b = np.empty(m)
    ref_cross_ab = Counter()
    for i in range(m):
        soup = sample_loop_soup(g, 0.5, rng2)
        occ, crossings = fields(g, soup)
        ref_occ_b[i] = occ[1]
        ref_cross_ab[int(crossings[0])] += 1
        per_root = Counter(loop.start for loop in soup.loops)
        for x in range(g.n):
            ref_counts_at[x][per_root.get(x, 0)] += 1
        ref_durations.extend(loop.total_time for loop in soup.loops)

    checks.append(ks_check("occupation at b", occ_b, ref_occ_b))
    checks.append(
        ks_check("loop durations", np.array(durations), np.array(ref_durations))
    )
    checks.append(chi2_two_sample("crossings of a-b", cross_ab, ref_cross_ab))
    for x in range(g.n):
        checks.append(
            chi2_two_sample(f"loops rooted at {g.labels[x]}", counts_at[x],
                            ref_counts_at[x])
        )
    return finalize_suite("loop-soup-roundtrip", seed, checks)


# ---------------------------------------------------------------------------
# criterion 13: killing reduction and the conditioned-walk identity


def suite_killing_reduction(seed: int) -> SuiteReport:
    g = _g_walk()
    u = 0.8
    su = math.sqrt(2 * u)
    checks: list[CheckResult] = []

    gh, h = harmonic_killing_transform(g, 0)
    checks.append(
        exact_check("hitting probabilities", float(np.abs(h - H_WALK).max()),
                    0.0, 1e-12)
    )
    w_ok = all(
        abs(eh.w - e.w * h[e.u] * h[e.v]) <= 1e-12
        for e, eh in zip(g.edges, gh.edges)
    )
    checks.append(bool_check("reduced conductances are W h h", w_ok))
    checks.append(
        bool_check("reduction kills only at the pin",
                   all(k == 0.0 for x, k in enumerate(gh.kappa) if x != 0))
    )

    # pathwise: the engine run on the reduced network with field phi/h must
    # reproduce the original run event for event, with local times scaled
    # by h^2 (the interaction weights W h h * (phi/h)-products coincide)
    kinds_ok = True
    ell_err = 0.0
    sq_err = 0.0
    field_rng = make_rng(seed, "reduction", "fields")
    for i in range(200):
        phi = sample_gff(g, condition({0: su}), field_rng)
        r1 = make_rng(seed, "reduction", "pw", i)
        st1 = init_inverse_from_field(g, phi, 0, r1)
        run1 = run_inverse(st1, r1)
        r2 = make_rng(seed, "reduction", "pw", i)
        st2 = init_inverse_from_field(gh, FieldReal(phi.values / h), 0, r2)
        run2 = run_inverse(st2, r2)
        seq1 = [(ev.kind, ev.edge, ev.src, ev.dst) for ev in run1.events]
        seq2 = [(ev.kind, ev.edge, ev.src, ev.dst) for ev in run2.events]
        kinds_ok &= seq1 == seq2
        ell_err = max(ell_err, float(np.abs(st1.ell - st2.ell * h * h).max()))
        sq_err = max(sq_err, float(np.abs(
            run1.terminal_sq - run2.terminal_sq * h * h
        ).max()))
    checks.append(bool_check("reduced run has identical events", kinds_ok))
    checks.append(
        exact_check("local times scale by h^2", ell_err, 0.0, 1e-9)
    )
    checks.append(
        exact_check("terminal squares scale by h^2", sq_err, 0.0, 1e-9)
    )

    # inverse-run statistics routed through the reduction (run on the
    # reduced network, local times mapped back by h^2) must match the killed
    # walk conditioned to reach root local time u, which rejection sampling
    # realises directly
    n = 10_000
    rng = make_rng(seed, "reduction", "inverse")
    ells = np.empty((n, 3))
    durations = np.empty(n)
    for i in range(n):
        phi_u = sample_gff(g, condition({0: su}), rng)
        st = init_inverse_from_field(gh, FieldReal(phi_u.values / h), 0, rng)
        run_inverse(st, rng)
        ells[i] = st.ell * h * h
        durations[i] = float(ells[i].sum())

    rng2 = make_rng(seed, "reduction", "rejection")
    ref_ells = np.empty((n, 3))
    ref_dur = np.empty(n)
    accepted = []
    i = 0
    while i < n:
        traj = run_to_inverse_local_time(g, 0, u, rng2)
        accepted.append(1.0 if traj.reached else 0.0)
        if traj.reached:
            ref_ells[i] = traj.local_times(g)
            ref_dur[i] = traj.total_time
            i += 1
    checks.append(
        moment_check("survival probability e^{-u/G(a,a)}",
                     np.array(accepted), math.exp(-u / GAA_WALK), n_sigma=4.5)
    )
    checks.append(
        ks_check("local time at b vs accepted killed walk", ells[:, 1],
                 ref_ells[:, 1])
    )
    checks.append(
        ks_check("local time at c vs accepted killed walk", ells[:, 2],
                 ref_ells[:, 2])
    )
    checks.append(ks_check("duration vs accepted killed walk",
                           _snap_atom(durations, u), _snap_atom(ref_dur, u)))
    return finalize_suite("killing-reduction", seed, checks)


# ---------------------------------------------------------------------------
# registry


SUITES = {
    "single-edge-couplings": suite_single_edge_couplings,
    "fk-ising-triangle": suite_fk_ising_triangle,
    "gff-sampler": suite_gff_sampler,
    "lejan": suite_lejan,
    "ray-knight": suite_ray_knight,
    "forward-coupling": suite_forward_coupling,
    "forward-enlarged": suite_forward_enlarged,
    "inversion": suite_inversion,
    "invariants": suite_invariants,
    "engine-equivalence": suite_engine_equivalence,
    "current-inversion": suite_current_inversion,
    "loop-soup-roundtrip": suite_loop_soup_roundtrip,
    "killing-reduction": suite_killing_reduction,
}

# acceptance criteria, in order
ACCEPTANCE = tuple(SUITES)


def available() -> tuple[str, ...]:
    return tuple(SUITES)


def run_suite(name: str, seed: int) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(
            f"unknown suite {name!r}; available: {', '.join(SUITES)}"
        )
    t0 = time.perf_counter()
    report = SUITES[name](seed)
    return SuiteReport(
        suite=report.suite,
        seed=report.seed,
        checks=report.checks,
        alpha=report.alpha,
        level=report.level,
        runtime=time.perf_counter() - t0,
    )
