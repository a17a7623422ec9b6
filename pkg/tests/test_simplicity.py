"""Simplicity deciders: certificates, unit-ideal criteria, char-p
obstruction, and the bounded Darboux search."""

import random

import pytest

from derivalg import (
    GF,
    QQ,
    DarbouxStatus,
    Derivation,
    IdealHandle,
    PreconditionError,
    QuotientRing,
    SimplicityStatus,
    VarContext,
    ZeroPolynomialError,
    d_ideal_check,
    darboux_search,
    dim1_simplicity,
    induce_on_quotient,
    is_unit_ideal,
    necessary_unit_condition,
    partials_certificate,
    prime_char_obstruction,
    principal_stability_check,
    replay_certificate,
    truncated_certificate,
)

from conftest import rand_poly


# --------------------------------------------------------------------------
# certificates
# --------------------------------------------------------------------------


def test_partials_certificate_example():
    ctx = VarContext(("x1", "x2"), QQ)
    x1, x2 = ctx.var(0), ctx.var(1)
    f = x1 ** 2 * x2 + 3 * x1
    cert = partials_certificate(f)
    # lowest-index variable first, at its maximal exponent
    assert cert.word == (0, 0, 1)
    assert cert.final_constant == QQ.element(2)
    assert replay_certificate(cert, f) == QQ.element(2)


def test_partials_certificate_trivial_cases():
    ctx = VarContext(("x1",), QQ)
    five = ctx.const(5)
    cert = partials_certificate(five)
    assert cert.word == () and cert.final_constant == QQ.element(5)
    cert = partials_certificate(ctx.var(0))
    assert cert.word == (0,) and cert.final_constant == QQ.element(1)


def test_partials_certificate_zero_rejected():
    ctx = VarContext(("x1",), QQ)
    with pytest.raises(ZeroPolynomialError):
        partials_certificate(ctx.zero)


def test_partials_certificate_word_length_bounded():
    ctx = VarContext(("x1", "x2", "x3"), QQ)
    rng = random.Random(3)
    for _ in range(50):
        f = rand_poly(rng, ctx, max_degree=5, max_terms=5, nonzero=True)
        cert = partials_certificate(f)
        assert len(cert.word) <= max(f.total_degree(), 0)
        assert not cert.final_constant.is_zero()


def test_truncated_certificate_examples():
    ctx3 = VarContext(("x",), GF(3))
    x = ctx3.var(0)
    cert = truncated_certificate(2 * x + x ** 2)
    assert cert.word == (0, 0)
    assert cert.final_constant == GF(3).element(2)

    ctx2 = VarContext(("x",), GF(2))
    cert = truncated_certificate(ctx2.var(0))
    assert cert.word == (0,)
    assert cert.final_constant == GF(2).element(1)

    ctx5 = VarContext(("x",), GF(5))
    cert = truncated_certificate(ctx5.const(3))
    assert cert.word == () and cert.final_constant == GF(5).element(3)


def test_truncated_certificate_rejects_big_exponents():
    ctx = VarContext(("x",), GF(3))
    with pytest.raises(PreconditionError):
        truncated_certificate(ctx.var(0) ** 3)


def test_certificate_replay_through_quotient_derivations():
    # replay uses the induced derivations of the truncated ring, not partial()
    p = 3
    ctx = VarContext(("x1", "x2"), GF(p))
    ring = QuotientRing.of(IdealHandle(ctx, [ctx.var(i) ** p for i in range(2)]))
    induced = [induce_on_quotient(Derivation.partial(ctx, i), ring)
               for i in range(2)]
    rng = random.Random(44)
    for _ in range(30):
        f = Poly_random_truncated(rng, ctx, p)
        if f.is_zero():
            continue
        cert = truncated_certificate(f)
        g = f
        for i in cert.word:
            g = induced[i].apply(g)
        assert g == ctx.const(cert.final_constant)


def Poly_random_truncated(rng, ctx, p):
    terms = {}
    for _ in range(rng.randint(1, 4)):
        mono = tuple(rng.randrange(p) for _ in range(ctx.nvars))
        terms[mono] = ctx.field.element(rng.randrange(p))
    from derivalg import Poly
    return Poly(ctx, terms)


# --------------------------------------------------------------------------
# unit-ideal criteria
# --------------------------------------------------------------------------


@pytest.fixture
def circle_rotation():
    ctx = VarContext(("x1", "x2"), QQ)
    x1, x2 = ctx.var(0), ctx.var(1)
    ring = QuotientRing.of(IdealHandle(ctx, [x1 ** 2 + x2 ** 2 - 1]))
    rot = Derivation(ring, [-x2, x1])
    return ring, rot


def test_necessary_unit_condition(circle_rotation):
    ring, rot = circle_rotation
    assert necessary_unit_condition(ring, rot)

    ctx = VarContext(("y",), QQ)
    y = ctx.var(0)
    Ry = QuotientRing.trivial(ctx)
    assert not necessary_unit_condition(Ry, Derivation(Ry, [y]))
    assert necessary_unit_condition(Ry, Derivation.partial(Ry, 0))


def test_dim1_simplicity_circle(circle_rotation):
    ring, rot = circle_rotation
    verdict = dim1_simplicity(ring, rot)
    assert verdict.status is SimplicityStatus.SIMPLE
    assert ring.dimension() == 1


def test_dim1_simplicity_negative_control():
    ctx = VarContext(("y",), QQ)
    y = ctx.var(0)
    Ry = QuotientRing.trivial(ctx)
    verdict = dim1_simplicity(Ry, Derivation(Ry, [y]))
    assert verdict.status is SimplicityStatus.NOT_SIMPLE
    assert verdict.witness is not None
    assert list(verdict.witness.generators) == [y]


def test_dim1_simplicity_dimension_gate(ctx_xy):
    ring = QuotientRing.trivial(ctx_xy)
    verdict = dim1_simplicity(ring, Derivation.partial(ring, 0))
    assert verdict.status is SimplicityStatus.UNKNOWN
    assert verdict.reason == "dimension != 1"


def test_simple_implies_necessary_condition(circle_rotation):
    ring, rot = circle_rotation
    if dim1_simplicity(ring, rot).status is SimplicityStatus.SIMPLE:
        assert necessary_unit_condition(ring, rot)


# --------------------------------------------------------------------------
# characteristic p obstruction
# --------------------------------------------------------------------------


def test_charp_obstruction_f2x():
    ctx = VarContext(("x",), GF(2))
    ring = QuotientRing.trivial(ctx)
    d = Derivation.partial(ring, 0)
    verdict = prime_char_obstruction(ring, [d])
    assert verdict.status is SimplicityStatus.NOT_SIMPLE
    assert list(verdict.witness.generators) == [ctx.var(0) ** 2]
    # the witness is a proper D-stable ideal
    assert d_ideal_check(verdict.witness, [d])
    assert not is_unit_ideal(verdict.witness)


def test_charp_obstruction_dim0_unknown():
    ctx = VarContext(("x",), GF(3))
    x = ctx.var(0)
    ring = QuotientRing.of(IdealHandle(ctx, [x ** 3]))
    d = induce_on_quotient(Derivation.partial(ctx, 0), ring)
    verdict = prime_char_obstruction(ring, [d])
    assert verdict.status is SimplicityStatus.UNKNOWN
    assert verdict.reason == "necessary condition passed"


def test_charp_obstruction_dim2():
    ctx = VarContext(("x", "y"), GF(5))
    ring = QuotientRing.trivial(ctx)
    D = [Derivation.partial(ring, i) for i in range(2)]
    verdict = prime_char_obstruction(ring, D)
    assert verdict.status is SimplicityStatus.NOT_SIMPLE
    assert verdict.witness is not None
    assert d_ideal_check(verdict.witness, D)
    assert not is_unit_ideal(verdict.witness)


def test_charp_witness_on_shifted_variety():
    # V(xy - 1) misses the origin over GF(2); the point search must shift
    ctx = VarContext(("x", "y"), GF(2))
    x, y = ctx.var(0), ctx.var(1)
    ring = QuotientRing.of(IdealHandle(ctx, [x * y - 1]))
    d = Derivation(ring, [x, y])  # Euler derivation preserves (xy - 1): x(y)+y(x)=2xy=0
    verdict = prime_char_obstruction(ring, [d])
    assert verdict.status is SimplicityStatus.NOT_SIMPLE
    assert verdict.witness is not None
    assert not is_unit_ideal(verdict.witness)
    assert d_ideal_check(verdict.witness, [d])


# --------------------------------------------------------------------------
# principal stability and Darboux
# --------------------------------------------------------------------------


def test_principal_stability_examples():
    ctx = VarContext(("y",), QQ)
    y = ctx.var(0)
    ring = QuotientRing.trivial(ctx)
    assert principal_stability_check(y, [Derivation(ring, [y])])
    assert not principal_stability_check(y, [Derivation.partial(ring, 0)])

    ctxs = VarContext(("x", "y", "z"), QQ)
    sx, sy, sz = (ctxs.var(i) for i in range(3))
    d1 = Derivation(ctxs, [sy + sz, sz - sx, -sx - sy])
    d2 = Derivation(ctxs, [sy + 2 * sz, sx * sy * sz - sx, -sx * sy ** 2 - 2 * sx])
    relation = sx ** 2 + sy ** 2 + sz ** 2 - 1
    assert principal_stability_check(relation, [d1, d2])


def test_principal_stability_zero_rejected():
    ctx = VarContext(("y",), QQ)
    ring = QuotientRing.trivial(ctx)
    with pytest.raises(ZeroPolynomialError):
        principal_stability_check(ctx.zero, [Derivation.partial(ring, 0)])


def test_darboux_linear_field(ctx_xy):
    y = ctx_xy.var(1)
    result = darboux_search(y, 3)
    assert result.status is DarbouxStatus.FOUND
    assert result.h == y and result.cofactor == ctx_xy.one


def test_darboux_zero_field(ctx_xy):
    y = ctx_xy.var(1)
    result = darboux_search(ctx_xy.zero, 2)
    assert result.status is DarbouxStatus.FOUND
    assert result.h == y and result.cofactor.is_zero()


def test_darboux_simple_derivation_has_none(ctx_xy):
    x, y = ctx_xy.var(0), ctx_xy.var(1)
    result = darboux_search(y ** 2 + x, 3)
    assert result.status is DarbouxStatus.NONE_UP_TO_BOUND
    assert result.bound == 3


@pytest.mark.parametrize("F_builder,bound", [
    (lambda x, y: y, 4),
    (lambda x, y: x * y, 3),
    (lambda x, y: y ** 2, 3),
    (lambda x, y: x ** 2 * y + y, 2),
])
def test_darboux_found_pairs_verify(ctx_xy, F_builder, bound):
    x, y = ctx_xy.var(0), ctx_xy.var(1)
    F = F_builder(x, y)
    result = darboux_search(F, bound)
    if result.status is DarbouxStatus.FOUND:
        lhs = result.h.partial(0) + F * result.h.partial(1)
        assert lhs == result.cofactor * result.h
        assert not result.h.is_constant()


def test_darboux_monotone_bounds(ctx_xy):
    # a Found at a smaller bound cannot coexist with NoneUpToBound at a larger one
    x, y = ctx_xy.var(0), ctx_xy.var(1)
    for F in (y, x * y, y ** 2 + x):
        small = darboux_search(F, 2)
        large = darboux_search(F, 3)
        if small.status is DarbouxStatus.FOUND:
            assert large.status is DarbouxStatus.FOUND


def test_darboux_preconditions(ctx_xyz, ctx_xy):
    with pytest.raises(PreconditionError):
        darboux_search(ctx_xyz.var(0), 2)
    with pytest.raises(PreconditionError):
        darboux_search(ctx_xy.var(0), 0)
    gf_ctx = VarContext(("x", "y"), GF(5))
    with pytest.raises(PreconditionError):
        darboux_search(gf_ctx.var(1), 2)
