"""Verification suites run by ``verify-all``.

Each suite is a top-level function ``(seed, trials) -> dict`` so it can be
shipped to a worker process.  ``trials`` scales the sample counts.
"""

from __future__ import annotations

import zlib
from fractions import Fraction

import numpy as np

from initial_integrals import instances as ins
from initial_integrals import universal as uni
from initial_integrals.dyadic import (
    canonicalize,
    direct_sum_norm,
    integrate_exact,
    juxtapose,
    p_norm,
    pointwise_mul,
    refine,
    split,
)
from initial_integrals.errors import AxiomViolation
from initial_integrals.generators import random_step, rng_for
from initial_integrals.measures import axioms as ax
from initial_integrals.measures import spaces as sp
from initial_integrals.measures import targets as tg
from initial_integrals.sequences import shift_register_target, shipped_seq_targets, verify_seq_target
from initial_integrals.universal import CheckReport


def _rel_close(a, b, rel=1e-12) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    a, b = float(a), float(b)
    return abs(a - b) <= rel * max(abs(a), abs(b), 1e-300)


def suite_dyadic(seed, trials):
    rng = rng_for(seed)
    r = CheckReport("dyadic")
    for _ in range(trials):
        f = random_step(rng, 6)
        g = random_step(rng, 6)
        h = juxtapose(f, g)
        a, b = split(h)
        r.record("lambek-roundtrip", a == f and b == g)
        r.record("canonical-idempotent", canonicalize(canonicalize(h)).same_representative(canonicalize(h)))
        r.record("refine-invariance", refine(f, f.level + 1) == f)
        for p in (1, "inf", 2, 3, Fraction(3, 2)):
            lhs = p_norm(h, p)
            rhs = direct_sum_norm(p_norm(f, p), p_norm(g, p), p)
            r.record(f"gamma-isometry-p{p}", _rel_close(lhs.value, rhs.value))
    return r.to_json()


def _morphism_suite(name, target, level, seed, trials):
    table = uni.compile_theta(target, level)
    rep = uni.verify_morphism(table, samples=trials, seed=seed)
    rep.name = name
    for n in range(level):
        # extension coherence: levels[n+1] times the refinement matrix is levels[n]
        ok = all(nxt.take(0, len(nxt), 2) + nxt.take(1, len(nxt), 2) == cur
                 for cur, nxt in zip(table.levels[n], table.levels[n + 1]))
        rep.record("extension-coherence", ok)
    small = min(level, 5)
    rep.record("uniqueness-columnwise",
               uni.uniqueness_probe(target, uni.compile_theta_columnwise(target, small)))
    return rep.to_json()


def suite_universal_mean(seed, trials):
    return _morphism_suite("universal:mean", uni.mean_target(), 8, seed, trials)


def suite_universal_first_block(seed, trials):
    return _morphism_suite("universal:first-block", uni.first_block_target(), 8, seed, trials)


def suite_universal_expectation(seed, trials):
    return _morphism_suite("universal:expectation", uni.expectation_target(2, 2), 7, seed, trials)


def suite_universal_kappa(seed, trials):
    return _morphism_suite("universal:kappa", ins.kappa_target(3), 6, seed, trials)


def suite_functional_equation(seed, trials):
    rng = rng_for(seed)
    r = CheckReport("functional-equation")
    mean = ins.mean_table(10)
    proj = uni.compile_theta(uni.first_block_target(), 10)
    witness = None
    for _ in range(trials):
        f = random_step(rng, 10)
        r.record("mean-satisfies", ins.functional_equation_holds(mean, f))
        r.record("integral-agreement", ins.integrate(f) == integrate_exact(f))
        if witness is None and not ins.functional_equation_holds(proj, f):
            witness = f
    r.record("first-block-violates", witness is not None or trials == 0)
    if witness is not None:
        r.counterexamples.append({"check": "first-block-violates (expected)", "witness": witness.to_json()})
    return r.to_json()


def suite_adamek(seed, trials):
    r = CheckReport("adamek-chain")
    for p in (1, 2, "inf"):
        rep = uni.adamek_chain("double_with_p_norm", 5, p, samples=max(1, trials // 20), seed=seed)
        r.record("double-dims", rep.dims == [1 << n for n in range(6)])
        for k, v in rep.checks.items():
            r.record(f"double-{k}", v)
        rep = uni.adamek_chain("prepend_scalar", 4, p, samples=max(1, trials // 20), seed=seed)
        r.record("prepend-dims", rep.dims == [1, 2, 3, 4, 5])
        for k, v in rep.checks.items():
            r.record(f"prepend-{k}", v)
    return r.to_json()


def suite_instances(seed, trials):
    rng = rng_for(seed)
    r = CheckReport("instances")
    N = 6
    ktab = uni.compile_theta(ins.kappa_target(N), N)
    for _ in range(trials):
        f = random_step(rng, N)
        F = ins.indefinite_integral(f)
        r.record("indefinite-two-path", ins.indefinite_via_universal(ktab, f) == F)
        r.record("ftc-roundtrip", ins.recover_function(F) == f)
        g = random_step(rng, N)
        for p, q in ((2, 2), (3, Fraction(3, 2))):
            r.record(f"holder-{p}-{q}", abs(float(ins.pairing(f, g, p, q))) <= ins.holder_bound(f, g, p, q) + 1e-9)
        for p, s in ((1, 2), (2, 4), (1, "inf")):
            r.record(f"power-mean-{p}-{s}", float(p_norm(f, p).value) <= float(p_norm(f, s).value) + 1e-12)
        f2, g2 = random_step(rng, N), random_step(rng, N)
        r.record("product-splits", pointwise_mul(juxtapose(f, f2), juxtapose(g, g2))
                 == juxtapose(pointwise_mul(f, g), pointwise_mul(f2, g2)))
    L = Fraction(3, 2)
    for _ in range(max(1, trials // 10)):
        level = int(rng.integers(0, 9))
        c = ins.lipschitz_cylinder(rng, level, L)
        r.record("cantor-density", all(ins.sup_distance(c, ins.cantor_project(c, n)) <= L / (1 << n)
                                       for n in range(level + 1)))
    for _ in range(max(1, trials // 20)):
        n = int(rng.integers(0, 3))
        m = 1 << n
        phi1 = [[Fraction(int(x)) for x in rng.integers(-3, 4, size=m)] for _ in range(m)]
        phi2 = [[Fraction(int(x)) for x in rng.integers(-3, 4, size=m)] for _ in range(m)]
        est, bound = ins.gamma_norm_chain(phi1, phi2, n, 2, samples=200, seed=int(rng.integers(1 << 30)))
        r.record("gamma-contraction-chain", est <= bound + 1e-9)
    return r.to_json()


def suite_sequences(seed, trials):
    r = CheckReport("sequences")
    for t in shipped_seq_targets() + [shift_register_target()]:
        rep = verify_seq_target(t, samples=trials, seed=seed)
        for k, v in rep.passed.items():
            r.passed[f"{t.name}:{k}"] = v
        for k, v in rep.failed.items():
            r.failed[f"{t.name}:{k}"] = v
        r.counterexamples.extend(rep.counterexamples)
    return r.to_json()


def _merge(into: CheckReport, rep: CheckReport, prefix: str):
    for k, v in rep.passed.items():
        into.passed[f"{prefix}:{k}"] = into.passed.get(f"{prefix}:{k}", 0) + v
    for k, v in rep.failed.items():
        into.failed[f"{prefix}:{k}"] = into.failed.get(f"{prefix}:{k}", 0) + v
    into.counterexamples.extend(rep.counterexamples[:3])


def suite_measure_axioms(seed, trials):
    rng = rng_for(seed)
    r = CheckReport("measure-axioms")
    for t in tg.shipped_targets(rng):
        _merge(r, ax.verify_axioms(t, trials, seed), t.name)
    for p in (1, 2, 3, "inf"):
        t = tg.SimpleFunctionTarget(p)
        _merge(r, ax.verify_axioms(t, max(1, trials // 4), seed, strict=True), f"S^{p}-strict")
        _merge(r, ax.verify_axioms(tg.SimpleFunctionTarget(p, full=False), max(1, trials // 4), seed),
               f"S^{p}-emb")
    return r.to_json()


def suite_measure_psi(seed, trials):
    rng = rng_for(seed)
    r = CheckReport("measure-psi")
    targets = tg.shipped_targets(rng)
    for t in targets:
        _merge(r, ax.psi_suite(t, trials, trials, seed), t.name)
    scalar = tg.ScalarTarget()
    _merge(r, ax.uniqueness_check(scalar, lambda X, f: (sp.integrate_measure(f),), trials, seed), "F,t")
    for t in targets:
        if t.hilbert:
            for _ in range(trials):
                f = ax.random_simple_fn(rng, ax.random_space(rng))
                r.record(f"{t.name}:pythagorean", ax.pythagorean_gap(t, f) == 0)
    return r.to_json()


def suite_measure_integration(seed, trials):
    rng = rng_for(seed)
    r = CheckReport("measure-integration")
    for _ in range(trials):
        Y = ax.random_space(rng)
        g = ax.random_simple_fn(rng, Y)
        X, s = ax.random_refinement(rng, Y)
        r.record("change-of-variables", sp.integrate_measure(sp.lp_pullback(s, g)) == sp.integrate_measure(g))
        Xp, f = ax.random_partial_map(rng, Y)
        r.record("partial-pullback", sp.integrate_measure(sp.lp_pullback(f, g)) == sp.integrate_measure(g))
        i, _ = ax.complementary_pair(rng, Y)
        h = ax.random_simple_fn(rng, i.source)
        r.record("extension-by-zero", sp.integrate_measure(sp.extend_by_zero(i, h)) == sp.integrate_measure(h))
        dens = sp.density_measure(g)
        r.record("tv-isometry", dens.tv_norm() == sp.sp_norm(g, 1).value)
        lhs = sp.density_measure(sp.extend_by_zero(i, h)).mass
        rhs = tg.MeasureTarget().embed(i, sp.density_measure(h).mass)
        r.record("density-naturality", lhs == rhs)
        r.record("integral-is-psi", (sp.integrate_measure(g),) == ax.psi(tg.ScalarTarget(), g))
        a = ax.random_subset(rng, Y)
        b = tuple(q for q in Y.points if q not in set(a))
        ip = sp.inner_product(sp.SimpleFn.indicator(Y, a), sp.SimpleFn.indicator(Y, b))
        r.record("disjoint-orthogonal", ip == 0)
        # category laws on chains of partial maps
        Z = ax.random_space(rng, 4)
        W, h1 = ax.random_partial_map(rng, Z)
        V, h2 = ax.random_partial_map(rng, W)
        U, h3 = ax.random_partial_map(rng, V)
        left = sp.compose_partial(sp.compose_partial(h3, h2), h1)
        right = sp.compose_partial(h3, sp.compose_partial(h2, h1))
        r.record("composition-associative", left == right)
        r.record("composition-unital",
                 sp.compose_partial(sp.PartialMap.identity(U), h3) == h3
                 and sp.compose_partial(h3, sp.PartialMap.identity(V)) == h3)
        r.record("composition-measure-preserving", left.is_measure_preserving())
    return r.to_json()


def suite_negative_controls(seed, trials):
    """Each broken target must be caught; the suite passes when all are rejected."""
    r = CheckReport("negative-controls")
    try:
        uni.make_target([0], [[2, 0]], 1, name="doubling")
        r.record("non-contractive-delta-rejected", False)
    except AxiomViolation as e:
        r.record("non-contractive-delta-rejected", e.axiom == "contraction")
    n = max(trials, 20)
    rep = ax.verify_axioms(tg.DoubledTarget(1), n, seed)
    r.record("doubled-basepoint-rejected", rep.failed.get("(III)", 0) > 0 and bool(rep.counterexamples))
    rep = ax.verify_axioms(tg.TruncatedMassTarget(), n, seed)
    r.record("non-additive-rejected", rep.failed.get("(I)", 0) > 0 and bool(rep.counterexamples))
    return r.to_json()


SUITES = {
    "adamek-chain": suite_adamek,
    "dyadic": suite_dyadic,
    "functional-equation": suite_functional_equation,
    "instances": suite_instances,
    "measure-axioms": suite_measure_axioms,
    "measure-integration": suite_measure_integration,
    "measure-psi": suite_measure_psi,
    "negative-controls": suite_negative_controls,
    "sequences": suite_sequences,
    "universal:expectation": suite_universal_expectation,
    "universal:first-block": suite_universal_first_block,
    "universal:kappa": suite_universal_kappa,
    "universal:mean": suite_universal_mean,
}


def suite_seeds(seed: int, names) -> dict:
    """Independent child seed per suite, keyed by its name.

    A suite's seed does not depend on which other suites run, so
    ``--only`` reproduces the same results as a full run.
    """
    return {name: int(np.random.SeedSequence([seed, zlib.crc32(name.encode())]).generate_state(1)[0])
            for name in sorted(names)}


def run_suite(name: str, seed: int, trials: int) -> dict:
    return SUITES[name](seed, trials)
