"""The nine end-to-end verification checks.

Each check returns ``(ok, measured, threshold, detail)``; ``run_all`` times
them, turns exceptions into ``error`` records and assembles a ``Report``.
The CLI and ``tests/test_acceptance.py`` both run these.
"""

from __future__ import annotations

import time
from typing import Callable

import numpy as np
from scipy.spatial.transform import Rotation

from . import charts as ch
from . import freegroup as fg
from . import loopclass as lc
from . import modgroup as mg
from .crosshom import TwistVector, cocycle_check, derivative_along, derivative_matrix, twisting_of
from .curve import generator_loop, rho_of
from .report import CheckRecord, Report, RunConfig
from .smooth import psi, psi_prime

CheckResult = tuple[bool, float, float, str]


def _maps_for_rank(n: int, config: RunConfig):
    prof = config.profile()
    slides = [(("R", i, j), ch.slide(i, j, prof)) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    flips = [(("I", j), ch.flip(j, prof)) for j in range(1, n + 1)]
    twists = [(("T", i), ch.sphere_twist(i)) for i in range(1, n + 1)]
    return slides, flips, twists


def shear_loop(config: RunConfig) -> lc.MatrixPath:
    """t -> identity with entry (3,1) = ψ'(t): the derivative along the a_i segment."""
    prof = config.profile()

    def ev(t):
        m = np.eye(3)
        m[2, 0] = psi_prime(prof, t)
        return m

    return lc.MatrixPath(ev, samples=config.path_samples)


def check_psi(config: RunConfig, rng) -> CheckResult:
    prof = config.profile()
    r = np.linspace(0.0, 1.0, 10_000)
    v, dv = psi(prof, r), psi_prime(prof, r)
    plateau = np.max(np.abs(v[r <= prof.plateau_end] - 1.0))
    support = np.max(np.abs(v[r >= prof.support_end]))
    monotone = bool(np.all(np.diff(v) <= 0.0))
    nonpos = bool(np.all(dv <= 0.0))
    h = 1e-5
    inner = r[(r > h) & (r < 1 - h)]
    fd = (psi(prof, inner + h) - psi(prof, inner - h)) / (2 * h)
    slack = np.maximum(1e-6, 1e-6 * np.abs(psi_prime(prof, inner)))
    fd_ratio = float(np.max(np.abs(fd - psi_prime(prof, inner)) / slack))
    ident = max(plateau, support)
    ok = ident < 1e-12 and monotone and nonpos and fd_ratio <= 1.0
    return ok, fd_ratio, 1.0, f"plateau/support err={ident:.1e} monotone={monotone} psi'<=0={nonpos}"


def check_jacobians(config: RunConfig, rng) -> CheckResult:
    prof = config.profile()
    worst, min_det = 0.0, np.inf
    for cmap in (ch.slide(1, 2, prof), ch.flip(1, prof), ch.sphere_twist(1)):
        pts = ch.random_interior_points(cmap.chart, rng, 1000, margin=1e-3)
        jac = ch.jacobian_analytic(cmap, pts)
        fd = np.stack([ch.jacobian_fd(cmap, p, h=1e-5) for p in pts])
        worst = max(worst, float(np.max(np.abs(jac - fd))))
        min_det = min(min_det, float(np.min(np.linalg.det(jac))))
    return worst < config.tol_fd and min_det > 0, worst, config.tol_fd, f"min det={min_det:.6f}"


def check_cover(config: RunConfig, rng) -> CheckResult:
    prof = config.profile()
    cmap = ch.slide(1, 2, prof)
    base = ch.random_interior_points(cmap.chart, rng, 1000, margin=1e-6)
    shifts = rng.integers(-3, 4, size=len(base))
    q = base + np.column_stack([np.zeros((len(base), 2)), shifts])
    lifted = ch.lift_apply(cmap, q)
    equiv = float(np.max(np.abs(cmap.chart.difference(ch.project(lifted), ch.apply(cmap, ch.project(q))))))
    deck = 0.0
    for k in (-2, 1, 5):
        moved = ch.lift_apply(cmap, q + np.array([0.0, 0.0, k]))
        deck = max(deck, float(np.max(np.abs(moved - np.array([0.0, 0.0, k]) - lifted))))
    lemma = max(
        float(np.max(np.abs(derivative_matrix(cmap, p, 0) - derivative_matrix(cmap, p, k))))
        for p, k in zip(base[:200], shifts[:200])
    )
    worst = max(equiv, deck, lemma)
    return worst <= 1e-12, worst, 1e-12, f"equivariance={equiv:.1e} deck={deck:.1e} frame-lift={lemma:.1e}"


def random_reparametrization(rng) -> Callable[[float], float]:
    """t + Σ c_k sin(2πkt)/(2πk) with Σ|c_k| < 1: smooth, increasing, fixes 0 and 1."""
    c = rng.uniform(-1, 1, size=4)
    c *= 0.95 / np.sum(np.abs(c))
    ks = np.arange(1, 5)
    return lambda t: float(t + np.sum(c * np.sin(2 * np.pi * ks * t) / (2 * np.pi * ks)))


def random_conjugator(rng) -> lc.MatrixPath:
    """A rotation-valued loop g with g(0) = g(1) = identity."""
    axis = rng.normal(size=3)
    axis *= rng.uniform(0.5, 3.0) / np.linalg.norm(axis)
    return lc.MatrixPath(lambda t: Rotation.from_rotvec(np.sin(np.pi * t) ** 2 * axis).as_matrix())


def conjugate(g: lc.MatrixPath, p: lc.MatrixPath) -> lc.MatrixPath:
    return lc.MatrixPath(lambda t: g(t) @ p(t) @ g(t).T, p.samples, p.refinement_budget)


def check_loop_class(config: RunConfig, rng) -> CheckResult:
    kw = dict(samples=config.path_samples)
    turn = lc.full_turn(**kw)
    shear = shear_loop(config)
    fails = []
    expected = [
        ("l", turn, 1),
        ("constant", lc.constant_path(**kw), 0),
        ("l*l", lc.concatenate(turn, turn), 0),
        ("shear", shear, 0),
    ]
    for name, path, want in expected:
        if lc.loop_class(path, config.identity_tol, config.continuity) != want:
            fails.append(name)
    for trial in range(20):
        base, want = (turn, 1) if trial % 2 == 0 else (shear, 0)
        if lc.loop_class(lc.reparametrize(base, random_reparametrization(rng))) != want:
            fails.append(f"reparam#{trial}")
        if lc.loop_class(conjugate(random_conjugator(rng), base)) != want:
            fails.append(f"conj#{trial}")
    prof = config.profile()
    s = np.linspace(0, 1, 100)
    tt = np.linspace(0, 1, 100)
    S, T = np.meshgrid(s, tt, indexing="ij")
    H = np.broadcast_to(np.eye(3), S.shape + (3, 3)).copy()
    H[..., 2, 0] = T * psi_prime(prof, S)
    min_det = float(np.min(np.linalg.det(H)))
    if not min_det > 0:
        fails.append("homotopy-det")
    return not fails, float(len(fails)), 0.0, f"homotopy min det={min_det:.6f} " + ",".join(fails)


def check_rho(config: RunConfig, rng) -> CheckResult:
    fails, count = [], 0
    for n in config.ranks():
        slides, flips, twists = _maps_for_rank(n, config)
        for tag, cmap in slides + flips + twists:
            if tag[0] == "R":
                want = fg.R(tag[1], tag[2], n)
            elif tag[0] == "I":
                want = fg.I(tag[1], n)
            else:
                want = fg.identity(n)
            count += 1
            if rho_of(cmap, n, config.loop_samples) != want:
                fails.append(f"{cmap}@n={n}")
    return not fails, float(len(fails)), 0.0, f"{count} maps; " + ",".join(fails)


def _twist_expected(tag, n):
    return TwistVector.unit(tag[1], n) if tag[0] == "T" else TwistVector.zero(n)


def check_twist(config: RunConfig, rng) -> CheckResult:
    fails, count = [], 0
    for n in config.ranks():
        slides, flips, twists = _maps_for_rank(n, config)
        for tag, cmap in slides + flips + twists:
            count += 1
            base = twisting_of(cmap, n, config.loop_samples, config.path_samples)
            dense = twisting_of(cmap, n, 2 * config.loop_samples, 2 * config.path_samples)
            if base != _twist_expected(tag, n) or dense != base:
                fails.append(f"{cmap}@n={n}:{base}/{dense}")
    return not fails, float(len(fails)), 0.0, f"{count} maps; " + ",".join(fails)


def check_g_path(config: RunConfig, rng) -> CheckResult:
    prof = config.profile()
    flat = np.diag([-1.0, -1.0, 1.0])
    worst, fails = 0.0, []
    for j in range(1, config.n + 1):
        cmap = ch.flip(j, prof)
        loop = generator_loop(j, cmap, config.n, config.loop_samples)
        path = derivative_along(cmap, loop, samples=config.path_samples)
        (a1, b1), (a2, b2), (a3, b3) = (loop.marks[k] for k in ("gamma1", "gamma2", "gamma3"))
        u = np.linspace(0.0, 1.0, 257)
        w2 = max(float(np.max(np.abs(path(a2 + x * (b2 - a2)) - flat))) for x in u)
        sym = max(float(np.max(np.abs(path(a1 + x * (b1 - a1)) - path(a3 + (1 - x) * (b3 - a3))))) for x in u)
        worst = max(worst, w2, sym)
        if lc.loop_class(path) != 0:
            fails.append(f"class(G{j})")
    return worst <= 1e-9 and not fails, worst, 1e-9, ",".join(fails)


def check_cocycle(config: RunConfig, rng) -> CheckResult:
    prof = config.profile()
    same = 0.0
    for cmap in (ch.slide(1, 2, prof), ch.flip(1, prof), ch.sphere_twist(1)):
        pts = ch.random_interior_points(cmap.chart, rng, 200, margin=1e-6)
        same = max(same, max(cocycle_check(cmap, cmap, p) for p in pts))
    g3 = ch.flip(3, prof)
    disjoint = max(cocycle_check(ch.slide(1, 2, prof), g3, p)
                   for p in ch.random_interior_points(g3.chart, rng, 200, margin=1e-6))
    f = ch.slide(1, 2, prof)
    ident = max(cocycle_check(f.with_power(0), f, p)
                for p in ch.random_interior_points(f.chart, rng, 200, margin=1e-6))
    ok = same < 1e-8 and disjoint == 0.0 and ident < 1e-12
    return ok, same, 1e-8, f"disjoint={disjoint:.1e} identity-profile={ident:.1e}"


def _cocycle_conjugation(cmap: ch.ChartMap, k: int, n: int, config: RunConfig) -> TwistVector:
    """T(f T_k f^-1) predicted from the chain-rule cocycle and computed values.

    T(f T_k f^-1) = T(f^-1) + (T(f)∘ρ(T_k) + T(T_k))∘ρ(f^-1), as row vectors.
    """
    kw = dict(loop_samples=config.loop_samples, path_samples=config.path_samples)
    twist = ch.sphere_twist(k)
    tau_f = twisting_of(cmap, n, **kw).as_array().astype(int)
    tau_finv = twisting_of(cmap.inverse(), n, **kw).as_array().astype(int)
    tau_t = twisting_of(twist, n, **kw).as_array().astype(int)
    a_t = fg.abelianize_mod2(rho_of(twist, n)).astype(int)
    a_finv = fg.abelianize_mod2(rho_of(cmap.inverse(), n)).astype(int)
    row = (tau_finv + ((tau_f @ a_t + tau_t) % 2) @ a_finv) % 2
    return TwistVector(tuple(row))


def check_group(config: RunConfig, rng) -> CheckResult:
    fails = []
    for trial in range(200):
        n = int(rng.integers(2, 5))
        triple = [
            mg.MappingClass(
                TwistVector(tuple(rng.integers(0, 2, size=n))),
                fg.from_factorization(mg.random_generator_word(rng, n, int(rng.integers(0, 5))), n),
            )
            for _ in range(3)
        ]
        a, b, c = triple
        lhs, rhs = (a * b) * c, a * (b * c)
        if lhs.twist != rhs.twist or lhs.auto != rhs.auto:
            fails.append(f"assoc#{trial}")
    for n in config.ranks():
        ident = mg.identity_class(n)
        for bits in range(2**n):
            t = mg.MappingClass(TwistVector(tuple((bits >> k) & 1 for k in range(n))), fg.identity(n))
            sq = t * t
            if sq.twist != ident.twist or sq.auto != ident.auto:
                fails.append(f"kernel-order@{t.twist}")
        for gen in fg.nielsen_generators(n):
            phi = fg.from_generator(gen, n)
            if mg.project(mg.section(phi)) != phi:
                fails.append(f"rho∘s({gen})")
        for j in range(1, n + 1):
            sq = mg.section(fg.I(j, n)) * mg.section(fg.I(j, n))
            if not (sq.twist.is_zero() and sq.auto.is_identity()):
                fails.append(f"s(I{j})^2")
        for _ in range(20):
            phi = fg.from_factorization(mg.random_generator_word(rng, n, int(rng.integers(1, 7))), n)
            if mg.project(mg.section(phi)) != phi:
                fails.append("rho∘s(product)")
    # geometry: lifts of generators, and the action calibrated against the cocycle
    n = config.n
    for gen in fg.nielsen_generators(n):
        cmap = mg.lift_of(gen, config.profile())
        phi = fg.from_generator(gen, n)
        geo = mg.geometric_class(cmap, n, loop_samples=config.loop_samples, path_samples=config.path_samples)
        sec = mg.section(phi)
        if geo.auto != phi or geo.twist != sec.twist:
            fails.append(f"geometry({gen})")
        via = mg.section_via_lift(cmap, n, loop_samples=config.loop_samples, path_samples=config.path_samples)
        if via.auto != phi or via.twist != sec.twist:
            fails.append(f"s-formula({gen})")
        for k in range(1, n + 1):
            conj = sec * mg.twist_class(k, n) * mg.inverse(sec)
            if not conj.auto.is_identity() or conj.twist != _cocycle_conjugation(cmap, k, n, config):
                fails.append(f"action({gen},T{k})")
    for i in range(1, n + 1):
        via = mg.section_via_lift(ch.sphere_twist(i), n)
        if not (via.twist.is_zero() and via.auto.is_identity()):
            fails.append(f"s-formula(T{i})")
    return not fails, float(len(fails)), 0.0, ",".join(fails[:10])


CHECKS: list[tuple[str, Callable[[RunConfig, np.random.Generator], CheckResult]]] = [
    ("1-psi-profile", check_psi),
    ("2-jacobians", check_jacobians),
    ("3-cover-equivariance", check_cover),
    ("4-loop-class-oracle", check_loop_class),
    ("5-rho-realization", check_rho),
    ("6-twist-vectors", check_twist),
    ("7-g-path-structure", check_g_path),
    ("8-cocycle-identity", check_cocycle),
    ("9-group-model", check_group),
]


def run_check(name: str, fn, config: RunConfig) -> CheckRecord:
    # each check gets its own stream so results do not depend on which checks ran before
    rng = np.random.default_rng([config.seed, sum(map(ord, name))])
    start = time.perf_counter()
    try:
        ok, measured, threshold, detail = fn(config, rng)
        status = "pass" if ok else "fail"
    except Exception as exc:  # recorded per check, never aborts the run
        status, measured, threshold, detail = "error", None, None, f"{type(exc).__name__}: {exc}"
    return CheckRecord(name, status, measured, threshold, time.perf_counter() - start, detail)


def run_all(config: RunConfig) -> Report:
    config.validate()
    return Report(config, [run_check(name, fn, config) for name, fn in CHECKS])
