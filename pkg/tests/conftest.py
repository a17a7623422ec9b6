"""Shared helpers for the test suite: deterministic random algebra objects."""

import random

import pytest

from derivalg import QQ, Derivation, Poly, QuotientRing, VarContext


def rand_poly(rng: random.Random, context: VarContext, max_degree=3,
              max_terms=4, coeff_lo=-4, coeff_hi=4, nonzero=False) -> Poly:
    """A random sparse polynomial; deterministic for a seeded rng."""
    while True:
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            mono = [0] * context.nvars
            if context.nvars:
                for _ in range(rng.randint(0, max_degree)):
                    mono[rng.randrange(context.nvars)] += 1
            terms[tuple(mono)] = context.field.element(
                rng.randint(coeff_lo, coeff_hi))
        p = Poly(context, terms)
        if not nonzero or not p.is_zero():
            return p


def rand_derivation(rng: random.Random, ring: QuotientRing, max_degree=2,
                    max_terms=3) -> Derivation:
    images = [rand_poly(rng, ring.context, max_degree, max_terms)
              for _ in range(ring.context.nvars)]
    return Derivation(ring, images)


@pytest.fixture
def ctx_xy():
    return VarContext(("x", "y"), QQ)


@pytest.fixture
def ctx_xyz():
    return VarContext(("x", "y", "z"), QQ)
