"""Derivations: application, commutators, D-ideals, quotient induction,
and the twisted-Leibniz family."""

import random

import pytest

from derivalg import (
    GF,
    QQ,
    Derivation,
    IdealHandle,
    NotInjectiveError,
    NotInvariantError,
    QuotientRing,
    RingEndomorphism,
    VarContext,
    commutator,
    commuting_set_check,
    d_ideal_check,
    family_skew_derivation,
    ideal_member,
    induce_on_quotient,
)

from conftest import rand_derivation, rand_poly


@pytest.fixture
def sphere_setup():
    ctx = VarContext(("x", "y", "z"), QQ)
    x, y, z = (ctx.var(i) for i in range(3))
    d1 = Derivation(ctx, [y + z, z - x, -x - y])
    d2 = Derivation(ctx, [y + 2 * z, x * y * z - x, -x * y ** 2 - 2 * x])
    relation = x ** 2 + y ** 2 + z ** 2 - 1
    return ctx, d1, d2, relation


def test_apply_rotation_kills_radius(ctx_xy):
    x, y = ctx_xy.var(0), ctx_xy.var(1)
    d = Derivation(ctx_xy, [-y, x])
    assert d.apply(x ** 2 + y ** 2).is_zero()


def test_apply_partial(ctx_xy):
    y = ctx_xy.var(1)
    d = Derivation.partial(ctx_xy, 1)
    assert d.apply(y ** 3) == 3 * y ** 2


def test_apply_sphere_derivations(sphere_setup):
    _, d1, d2, relation = sphere_setup
    assert d1.apply(relation).is_zero()
    assert d2.apply(relation).is_zero()


def test_commutator_partials(ctx_xy):
    dx = Derivation.partial(ctx_xy, 0)
    dy = Derivation.partial(ctx_xy, 1)
    assert commutator(dx, dy).is_zero()


def test_commutator_scaling():
    ctx = VarContext(("y",), QQ)
    y = ctx.var(0)
    dy = Derivation.partial(ctx, 0)
    ydy = Derivation(ctx, [y])
    c = commutator(dy, ydy)
    assert c == dy  # [d/dy, y d/dy] = d/dy


def test_commutator_nonzero_pair():
    ctx = VarContext(("y1", "y2"), QQ)
    y1, y2 = ctx.var(0), ctx.var(1)
    d1 = Derivation(ctx, [y2, ctx.zero])
    d2 = Derivation(ctx, [ctx.zero, y1])
    c = commutator(d1, d2)
    assert c.images[0] == -y1


def test_commuting_set_check():
    ctx = VarContext(("y1", "y2", "y3"), QQ)
    partials = [Derivation.partial(ctx, i) for i in range(3)]
    assert commuting_set_check(partials).commute

    y1, y2 = ctx.var(0), ctx.var(1)
    d1 = Derivation(ctx, [y2, ctx.zero, ctx.zero])
    d2 = Derivation(ctx, [ctx.zero, y1, ctx.zero])
    report = commuting_set_check([d1, d2])
    assert not report.commute
    assert (report.first, report.second) == (0, 1)
    assert report.witness == -y1

    assert commuting_set_check([d1]).commute


def test_d_ideal_sphere(sphere_setup):
    ctx, d1, d2, relation = sphere_setup
    assert d_ideal_check(IdealHandle(ctx, [relation]), [d1, d2])


def test_d_ideal_counterexample():
    ctx = VarContext(("x",), QQ)
    x = ctx.var(0)
    assert not d_ideal_check(IdealHandle(ctx, [x ** 2]),
                             [Derivation.partial(ctx, 0)])


def test_d_ideal_pth_powers():
    for p in (2, 3):
        ctx = VarContext(("x1", "x2"), GF(p))
        gens = [ctx.var(i) ** p for i in range(2)]
        partials = [Derivation.partial(ctx, i) for i in range(2)]
        assert d_ideal_check(IdealHandle(ctx, gens), partials)


def test_d_ideal_random_combinations(sphere_setup):
    # stability extends from generators to random cofactor combinations
    ctx, d1, d2, relation = sphere_setup
    handle = IdealHandle(ctx, [relation])
    rng = random.Random(17)
    for _ in range(20):
        h = rand_poly(rng, ctx, max_degree=2, max_terms=3) * relation
        for d in (d1, d2):
            assert ideal_member(d.apply(h), handle)


def test_induce_on_quotient_sphere(sphere_setup):
    ctx, d1, d2, relation = sphere_setup
    sphere = QuotientRing.of(IdealHandle(ctx, [relation]))
    for d in (d1, d2):
        induced = induce_on_quotient(d, sphere)
        assert induced.ring == sphere


def test_induce_fails_without_invariance():
    ctx = VarContext(("x",), QQ)
    x = ctx.var(0)
    ring = QuotientRing.of(IdealHandle(ctx, [x ** 2]))
    with pytest.raises(NotInvariantError) as err:
        induce_on_quotient(Derivation.partial(ctx, 0), ring)
    assert err.value.generator == x ** 2
    assert err.value.image == 2 * x


def test_induce_char2_truncated():
    ctx = VarContext(("x",), GF(2))
    x = ctx.var(0)
    ring = QuotientRing.of(IdealHandle(ctx, [x ** 2]))
    induced = induce_on_quotient(Derivation.partial(ctx, 0), ring)
    assert induced.images[0] == ctx.one


def test_quotient_derivation_validated_at_construction():
    ctx = VarContext(("x",), QQ)
    x = ctx.var(0)
    ring = QuotientRing.of(IdealHandle(ctx, [x ** 2]))
    with pytest.raises(NotInvariantError):
        Derivation(ring, [ctx.one])
    # x d/dx preserves (x^2)
    ok = Derivation(ring, [x])
    assert ok.apply(x ** 2).is_zero()


def test_apply_leibniz_random(ctx_xyz):
    rng = random.Random(5)
    ring = QuotientRing.trivial(ctx_xyz)
    for _ in range(25):
        d = rand_derivation(rng, ring)
        f = rand_poly(rng, ctx_xyz)
        g = rand_poly(rng, ctx_xyz)
        assert d.apply(f * g) == d.apply(f) * g + f * d.apply(g)


def test_commutator_is_derivation(ctx_xy):
    rng = random.Random(8)
    ring = QuotientRing.trivial(ctx_xy)
    for _ in range(15):
        c = commutator(rand_derivation(rng, ring), rand_derivation(rng, ring))
        f = rand_poly(rng, ctx_xy)
        g = rand_poly(rng, ctx_xy)
        assert c.apply(f * g) == c.apply(f) * g + f * c.apply(g)


def test_induced_apply_commutes_with_reduction(sphere_setup):
    ctx, d1, _, relation = sphere_setup
    sphere = QuotientRing.of(IdealHandle(ctx, [relation]))
    induced = induce_on_quotient(d1, sphere)
    rng = random.Random(12)
    for _ in range(20):
        f = rand_poly(rng, ctx)
        assert induced.apply(sphere.reduce(f)) == sphere.reduce(d1.apply(f))


def test_family_skew_derivation_example():
    ctx = VarContext(("y",), QQ)
    y = ctx.var(0)
    phi = RingEndomorphism(ctx, [y ** 2])
    d = family_skew_derivation(ctx.one, phi)
    assert d.apply(y) == y ** 2 - y
    assert d.apply(y ** 2) == y ** 4 - y ** 2
    assert y * d.apply(y) + d.apply(y) * phi(y) == y ** 4 - y ** 2


def test_family_skew_derivation_degenerate_cases():
    ctx = VarContext(("y",), QQ)
    y = ctx.var(0)
    phi = RingEndomorphism(ctx, [y ** 2])
    assert family_skew_derivation(ctx.zero, phi).apply(y ** 3).is_zero()
    ident = RingEndomorphism.identity(ctx)
    d = family_skew_derivation(ctx.one, ident)
    assert d.is_zero() and d.apply(y).is_zero()


def test_family_skew_derivation_rejects_noninjective():
    ctx = VarContext(("x", "y"), QQ)
    x = ctx.var(0)
    collapse = RingEndomorphism(ctx, [x, x])
    with pytest.raises(NotInjectiveError):
        family_skew_derivation(ctx.one, collapse)


def test_family_skew_identity_random_pairs():
    ctx = VarContext(("x", "y"), QQ)
    x, y = ctx.var(0), ctx.var(1)
    phi = RingEndomorphism(ctx, [x + 1, x * y])
    d = family_skew_derivation(x - y, phi)
    rng = random.Random(21)
    for _ in range(50):
        a = rand_poly(rng, ctx)
        b = rand_poly(rng, ctx)
        assert d.apply(a * b) == a * d.apply(b) + d.apply(a) * phi(b)
