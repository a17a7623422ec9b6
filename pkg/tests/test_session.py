"""Session statements not already covered by the CLI round-trip tests."""

import random

import pytest

from derivalg import (
    NonCommutingDerivationsError,
    PreconditionError,
    QQ,
    RingEndomorphism,
    SingleOreDescriptor,
    VarContext,
    family_skew_derivation,
)
from derivalg.parser import parse_session
from derivalg.session import Session

from conftest import rand_poly


def run_lines(text, session=None):
    session = session or Session()
    out = []
    for stmt in parse_session(text):
        out.append(session.execute(stmt)[0])
    return session, out


def test_skew_definition_and_let():
    _, out = run_lines("""
ring R = QQ[y]
der d on R : y -> 1
skew S = R[x; d]
let f = x*y in S
mul f - y*x in S
""")
    assert out[-1]["result"]["str"] == "1"


def test_iterated_skew_definition():
    _, out = run_lines("""
ring R = QQ[y1, y2]
der d1 on R : y1 -> 1
der d2 on R : y2 -> 1
skew S = R[t1; d1][t2; d2]
mul t1 * y1 - y1 * t1
mul t1 * t2 - t2 * t1
""")
    assert out[-2]["result"]["str"] == "1"
    assert out[-1]["result"]["str"] == "0"


def test_skew_definition_refuses_noncommuting():
    session, _ = run_lines("""
ring R = QQ[y1, y2]
der d1 on R : y1 -> y2
der d2 on R : y2 -> y1
""")
    (stmt,) = parse_session("skew S = R[t1; d1][t2; d2]")
    with pytest.raises(NonCommutingDerivationsError):
        session.execute(stmt)


def test_extend_statement():
    session, out = run_lines("""
ring R = QQ[y, z]
der dy on R : y -> 1
der dz on R : z -> 1
skew S = R[x; dy]
extend dz into S
""")
    assert out[-1]["extends"] is True

    (stmt,) = parse_session("der ydy on R : y -> y")
    session.execute(stmt)
    (stmt,) = parse_session("extend ydy into S")
    with pytest.raises(NonCommutingDerivationsError):
        session.execute(stmt)


def test_gb_and_member_statements():
    _, out = run_lines("""
ring R = QQ[x, y]
ideal I in R : x*y - 1, y^2 - 1
gb I
member x^2*y - x in I with cofactors
member x + 1 in I
""")
    gb_record = out[2]
    assert gb_record["basis"]  # reduced basis, grevlex by default
    member_record = out[3]
    assert member_record["member"] is True
    assert member_record["remainder"] == "0"
    assert out[4]["member"] is False


def test_certificate_statement_char0():
    _, out = run_lines("""
ring R = QQ[x1, x2]
certificate x1^2*x2 + 3*x1
""")
    assert out[-1]["word"] == ["x1", "x1", "x2"]
    assert out[-1]["constant"] == "2"


def test_certificate_statement_truncated():
    _, out = run_lines("""
ring F = GF(3)[x]
ideal P in F : x^3
quotient T = F / P
certificate 2*x + x^2 in T
""")
    assert out[-1]["word"] == ["x", "x"]
    assert out[-1]["constant"] == "2"


def test_certificate_rejects_wrong_quotient():
    session, _ = run_lines("""
ring F = GF(3)[x]
ideal P in F : x^2
quotient T = F / P
""")
    (stmt,) = parse_session("certificate x in T")
    with pytest.raises(PreconditionError):
        session.execute(stmt)


def test_darboux_statement():
    _, out = run_lines("""
ring R = QQ[x, y]
darboux y bound 3
""")
    assert out[-1]["status"] == "found"
    assert out[-1]["h"] == "y"


def test_apply_statement_on_quotient():
    _, out = run_lines("""
ring R = QQ[x1, x2]
ideal J in R : x1^2 + x2^2 - 1
quotient Q = R / J
der rot on Q : x1 -> -x2, x2 -> x1
apply rot x1^2
""")
    # d(x1^2) = 2 x1 (-x2), reduced in the quotient
    assert out[-1]["result"]["str"] == "-2*x1*x2"


def test_ore_products_associate_randomly():
    ctx = VarContext(("y",), QQ)
    y = ctx.var(0)
    phi = RingEndomorphism(ctx, [y ** 2])
    ring = SingleOreDescriptor(ctx, "x", phi,
                               family_skew_derivation(ctx.one, phi))
    rng = random.Random(606)

    def rand_elt():
        terms = {}
        for _ in range(rng.randint(1, 2)):
            terms[rng.randint(0, 2)] = rand_poly(rng, ctx, max_degree=2,
                                                 max_terms=2)
        from derivalg import OrePoly
        return OrePoly(ring, {e: r for e, r in terms.items() if not r.is_zero()})

    for _ in range(25):
        u, v, w = rand_elt(), rand_elt(), rand_elt()
        assert (u * v) * w == u * (v * w)
