"""The acceptance suite: one function per criterion, each returning a CriterionResult.

Shared by ``tests/test_acceptance.py`` and ``biextctl selftest``.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .axioms import check_axioms
from .chainpairing import biextension_from_chain_pairing, massey_weil, toy_chain_pairing
from .curves import EllipticCurve, ProjectiveLine
from .fields import FiniteField
from .functions import (FunctionProgram, Linear, random_function, stable_rng, tame_reciprocity,
                        tame_symbol, vertical_at, weil_reciprocity_check)
from .hodge import (abel_jacobi_elliptic, analytic_weil, dual_hs, height_trivialization,
                    kernel_sampler, poincare_psi, symplectic_weil, vector_ops)
from .instances import (chain_instance, curve_instance, finite_instances, hodge_examples,
                        torus_instance)
from .pairing import pe_biextension, weil_pairing_oracle, weil_pairing_points

TOL = 1e-9


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number}. {self.title}: {self.detail} ({self.seconds:.2f} s)"

    def to_json(self) -> dict:
        # wall-clock time is left out so that repeated runs print identical JSON
        return {"criterion": str(self.number), "title": self.title, "passed": self.passed,
                "detail": self.detail}


def _timed(number: int, title: str, budget: float | None = None):
    def wrap(fn: Callable[[int], tuple[bool, str]]):
        def run(seed: int = 0) -> CriterionResult:
            t0 = time.perf_counter()
            try:
                ok, detail = fn(seed)
            except Exception as e:  # a crash is a failed criterion, reported with its message
                ok, detail = False, f"{type(e).__name__}: {e}"
            dt = time.perf_counter() - t0
            if budget is not None and dt >= budget:
                ok, detail = False, f"{detail}; over the {budget:g} s budget"
            return CriterionResult(number, title, ok, detail, dt)
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


def elliptic(p: int, a: int, b: int, k: int = 1) -> EllipticCurve:
    F = FiniteField(p, k)
    return EllipticCurve(F, F(a), F(b))


def reciprocity_curves():
    return [ProjectiveLine(FiniteField(7)), ProjectiveLine(FiniteField(13)),
            elliptic(61, 3, 5), elliptic(7, 1, 3, k=2)]


WEIL_INSTANCES = [(7, -1, 0, 2), (7, 0, 2, 3), (31, 0, 11, 5)]


# -- 1 ---------------------------------------------------------------------------

@_timed(1, "Weil reciprocity f(div g) = g(div f)", budget=10)
def weil_reciprocity(seed: int = 0, pairs: int = 200):
    counts = []
    for curve in reciprocity_curves():
        rng = stable_rng(seed, "reciprocity", str(curve))
        good = 0
        for _ in range(pairs):
            f = random_function(curve, rng)
            g = random_function(curve, rng, avoid=f.divisor())
            good += weil_reciprocity_check(f, g)[2]
        counts.append(good)
    ok = all(c == pairs for c in counts)
    return ok, f"exact equality on {sum(counts)}/{pairs * len(counts)} pairs over {len(counts)} curves"


# -- 2 ---------------------------------------------------------------------------

def steinberg_pairs(curve, rng: random.Random, n: int):
    """Pairs (f, 1 - f) whose factorizations are known in closed form.

    On P^1, f = c (x - a)/(x - b) and 1 - f = (1 - c)(x - r)/(x - b) with
    r = (b - c a)/(1 - c).  On an elliptic curve, f = c (x - s)/(x - t) and
    the same identity holds with verticals, provided the root r is the
    x-coordinate of a rational point.
    """
    F = curve.F
    out = []
    while len(out) < n:
        a, b, c = F.random(rng), F.random(rng), F.random(rng)
        if a == b or not c or c == F.one:
            continue
        r = (b - c * a) / (F.one - c)
        if isinstance(curve, ProjectiveLine):
            f = FunctionProgram.make(curve, c, [(Linear(a), 1), (Linear(b), -1)])
            g = FunctionProgram.make(curve, F.one - c, [(Linear(r), 1), (Linear(b), -1)])
        else:
            pts = {x: curve.F.sqrt(curve.rhs(x)) for x in (a, b, r)}
            if any(y is None for y in pts.values()):
                continue
            def vert(x):
                return vertical_at(curve, (x, pts[x]))
            f = FunctionProgram.make(curve, c, [(vert(a), 1), (vert(b), -1)])
            g = FunctionProgram.make(curve, F.one - c, [(vert(r), 1), (vert(b), -1)])
        out.append((f, g))
    return out


@_timed(2, "Tame reciprocity and Steinberg relation")
def tame(seed: int = 0, pairs: int = 100):
    curves = [ProjectiveLine(FiniteField(13)), elliptic(13, 2, 3)]
    good = total = 0
    for curve in curves:
        rng = stable_rng(seed, "tame", str(curve))
        for _ in range(pairs // len(curves)):
            f = random_function(curve, rng)
            g = random_function(curve, rng)
            total += 1
            good += tame_reciprocity(f, g)[0] == curve.F.one
    st_good = st_total = 0
    for curve in curves:
        rng = stable_rng(seed, "steinberg", str(curve))
        for f, g in steinberg_pairs(curve, rng, 25):
            for P in curve.points():
                st_total += 1
                st_good += tame_symbol(f, g, P) == curve.F.one
    x = FunctionProgram.linear(curves[0], 0)
    forced = tame_symbol(x, x, curves[0].F(0)) == curves[0].F(-1)
    ok = good == total and st_good == st_total and forced
    return ok, (f"product = 1 on {good}/{total} random pairs; tame(f, 1-f) = 1 at "
                f"{st_good}/{st_total} places; tame(x, x) at 0 is -1: {forced}")


# -- 3, 4 -------------------------------------------------------------------------

@_timed(3, "Biextension Weil pairing equals the Miller oracle on all of E[l]", budget=30)
def oracle_agreement(seed: int = 0):
    parts, ok = [], True
    for p, a, b, l in WEIL_INSTANCES:
        E = elliptic(p, a, b)
        B = pe_biextension(E, seed=seed)
        tors = E.torsion(l)
        if len(tors) != l * l:
            return False, f"E[{l}] over F_{p} has {len(tors)} points"
        agree = sum(weil_pairing_points(E, P, Q, l, seed=seed, biext=B) == weil_pairing_oracle(E, P, Q, l, seed=seed)
                    for P in tors for Q in tors)
        ok &= agree == l ** 4
        parts.append(f"l={l} over F_{p}: {agree}/{l ** 4}")
    return ok, "; ".join(parts)


@_timed(4, "Forced value e_2((0,0),(1,0)) = -1 on y^2 = x^3 - x over F_7")
def forced_value(seed: int = 0):
    E = elliptic(7, -1, 0)
    P, Q = E.point(0, 0), E.point(1, 0)
    v, o = weil_pairing_points(E, P, Q, 2, seed=seed), weil_pairing_oracle(E, P, Q, 2, seed=seed)
    return v == E.F(-1) and o == E.F(-1), f"biextension path {v}, oracle {o} (mod 7)"


# -- 5 ---------------------------------------------------------------------------

@_timed(5, "Chain-pairing Weil pairing and the Massey identity on the Z/4 toy")
def chain_pairing(seed: int = 0):
    cp = toy_chain_pairing()
    B = biextension_from_chain_pairing(cp, seed=seed)
    w = B.weil_pairing((1,), (1,), 2)
    m = massey_weil(cp, (1,), (1,), 2, (1,), (1,))
    # every odd cocycle pair in a box, with bounding chains a~ = a, b~ = b
    box = [(x,) for x in range(-7, 8, 2)]
    mismatches = sum(B.weil_pairing(a, b, 2) != massey_weil(cp, a, b, 2, a, b) for a in box for b in box)
    ok = w == (2,) and m == (2,) and mismatches == 0
    return ok, f"Weil pairing {w[0]}, Massey value {m[0]} in Z/4; box mismatches {mismatches}/{len(box) ** 2}"


# -- 6 ---------------------------------------------------------------------------

@_timed(6, "Quotient-biextension laws (interchange, unit, transport, restriction, twist)")
def biextension_axioms(seed: int = 0, samples: int = 100):
    parts = []
    for inst in finite_instances():
        r = check_axioms(inst, seed=seed, exhaustive_limit=256)
        if not r.exhaustive:
            return False, f"{inst.name} was not checked exhaustively"
        parts.append(f"{inst.name}: {r.total} exhaustive")
    sampled = [chain_instance(), curve_instance(seed=seed)]
    sampled += [torus_instance(n, h, seed) for n, h in hodge_examples(seed)[:2]]
    for inst in sampled:
        r = check_axioms(inst, samples=samples, seed=seed)
        if r.total < 500:
            return False, f"{inst.name}: only {r.total} tuples"
        parts.append(f"{inst.name.split(',')[0]}: {r.total} sampled")
    return True, "; ".join(parts)


# -- 7 ---------------------------------------------------------------------------

def torus_residuals(h, rng: random.Random, samples: int = 200) -> dict[str, float]:
    d = dual_hs(h)
    ks, kd, vs = kernel_sampler(h), kernel_sampler(d), vector_ops(h, "H_C")
    worst: dict[str, float] = {}

    def bump(name, value):
        worst[name] = max(worst.get(name, 0.0), float(value))

    for _ in range(samples):
        x, y, z = ks(rng), kd(rng), vs.sample(rng)
        a, b = poincare_psi(h, x, y, 1), poincare_psi(h, x, y, 2, d)
        bump("slot overlap", abs(a - b) / max(1.0, abs(a)))
        bump("height = log|psi| slot 1", abs(height_trivialization(h, x, z) - math.log(abs(poincare_psi(h, x, z, 1)))))
        bump("height = log|psi| slot 2", abs(height_trivialization(h, z, y) - math.log(abs(poincare_psi(h, z, y, 2, d)))))
        r, c = h.decompose(z)
        r2, c2 = h.decompose(r + h.f0_vector(c))
        bump("decomposition", max(np.max(np.abs(r - r2)), np.max(np.abs(c - c2))))
    isotropic = np.max(np.abs(h.F0 @ h.Q @ h.F0.T)) <= TOL
    for l in (2, 3):
        grid = list(itertools.product(range(l), repeat=h.n))
        pairs = [(x, y) for x in grid for y in grid]
        if len(pairs) > 300:
            pairs = rng.sample(pairs, 300)
        for x, y in pairs:
            ex, fy = np.array(x) / l, np.array(y) / l
            v = analytic_weil(h, ex, fy, l, d)
            bump("weil is a root of unity", abs(v ** l - 1))
            bump("weil has modulus 1", abs(abs(v) - 1))
            bump("weil equals exp(2 pi i x^T Q y / l)", abs(v - symplectic_weil(h, x, y, l)))
            x2 = rng.choice(grid)
            e2 = np.array(x2) / l
            lhs = analytic_weil(h, ex + e2, fy, l, d)
            bump("weil bilinear", abs(lhs - v * analytic_weil(h, e2, fy, l, d)))
            if isotropic:
                bump("weil alternating", abs(analytic_weil(h, ex, ex, l, d) - 1))
    return worst


@_timed(7, "Poincare biextension on complex tori", budget=10)
def poincare(seed: int = 0):
    rng = random.Random(seed)
    parts, ok = [], True
    for name, h in hodge_examples(seed):
        res = torus_residuals(h, rng)
        r = check_axioms(torus_instance(name, h, seed), samples=60, seed=seed)
        worst = max(res.values())
        ok &= worst < TOL
        parts.append(f"{name}: max residual {worst:.1e}, {r.total} law checks")
    return ok, "; ".join(parts)


# -- 8 ---------------------------------------------------------------------------

@_timed(8, "Algebraic and analytic Weil pairings agree at l = 2")
def cross_world(seed: int = 0):
    E = elliptic(7, -1, 0)
    alg = weil_pairing_points(E, E.point(0, 0), E.point(1, 0), 2, seed=seed)
    # y^2 = x^3 - x has CM by i, so its period lattice is homothetic to Z + Zi
    lattice = (1 + 0j, 1j)
    e = abel_jacobi_elliptic(lattice, {0.5: 1, 0: -1})
    f = abel_jacobi_elliptic(lattice, {0.5j: 1, 0: -1})
    # in genus one, F0 is isotropic for Q, so H and its dual share coordinates
    an = analytic_weil(e.h, e, f.vector, 2)
    ok = alg == E.F(-1) and abs(an + 1) < TOL
    return ok, f"algebraic {alg} = -1 mod 7, analytic {an.real:+.12f}{an.imag:+.1e}i (|an + 1| = {abs(an + 1):.1e})"


# -- 9 ---------------------------------------------------------------------------

def _perturbed(T, x, others, sampler, rng, side):
    for _ in range(200):
        y = T.A.add(x, sampler(rng)) if side == "A" else T.B.add(x, sampler(rng))
        if all((T.contains(y, o) if side == "A" else T.contains(o, y)) for o in others):
            return y
    raise RuntimeError("no admissible perturbation")


@_timed(9, "Weil pairing is independent of the chosen lifts")
def lift_independence(seed: int = 0, perturbations: int = 100):
    parts, ok = [], True
    for p, a, b, l in WEIL_INSTANCES[1:]:
        E = elliptic(p, a, b)
        B = pe_biextension(E, seed=seed)
        T = B.T
        rng = stable_rng(seed, "lifts", p, l)
        tors = E.torsion(l)
        changed = 0
        for i in range(perturbations):
            P, Q = rng.choice(tors), rng.choice(tors)
            Z, W = T.section(P, Q)
            base = B.weil_pairing(Z, W, l)
            Z2 = _perturbed(T, Z, [W], T.sample_ker_A, rng, "A")
            W2 = _perturbed(T, W, [Z2], T.sample_ker_B, rng, "B")
            changed += B.weil_pairing(Z2, W2, l) != base
        ok &= changed == 0
        parts.append(f"curve l={l}: {changed}/{perturbations} changed")
    cp = toy_chain_pairing()
    CB = biextension_from_chain_pairing(cp, seed=seed)
    rng = random.Random(seed)
    changed = sum(CB.weil_pairing((1 + 2 * rng.randint(-5, 5),), (1 + 2 * rng.randint(-5, 5),), 2) != (2,)
                  for _ in range(perturbations))
    ok &= changed == 0
    parts.append(f"chain toy: {changed}/{perturbations} changed")
    rng = random.Random(seed)
    for name, h in hodge_examples(seed):
        d = dual_hs(h)
        ks, kd = kernel_sampler(h), kernel_sampler(d)
        worst = 0.0
        for _ in range(perturbations):
            l = rng.choice([2, 3])
            x = np.array([rng.randrange(l) for _ in range(h.n)]) / l
            y = np.array([rng.randrange(l) for _ in range(h.n)]) / l
            base = analytic_weil(h, x, y, l, d)
            worst = max(worst, abs(analytic_weil(h, x + ks(rng), y + kd(rng), l, d) - base))
        ok &= worst < TOL
        parts.append(f"{name}: max change {worst:.1e}")
    return ok, "; ".join(parts)


CRITERIA = [weil_reciprocity, tame, oracle_agreement, forced_value, chain_pairing,
            biextension_axioms, poincare, cross_world, lift_independence]


def run_all(seed: int = 0) -> list[CriterionResult]:
    return [c(seed) for c in CRITERIA]
