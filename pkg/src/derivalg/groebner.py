"""Buchberger's algorithm and the ideal-theoretic decision layer.

Everything downstream (D-ideal checks, unit-ideal criteria, Krull dimension,
quotient normal forms) reduces to the unique reduced Groebner basis of an
ideal under a term order.  Determinism is part of the contract: recomputing
a basis yields an identical object, and normal forms are unique.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

from .errors import BudgetExceededError, ContextMismatchError, UnitIdealError
from .poly import (
    Poly,
    TermOrder,
    VarContext,
    monomial_degree,
    monomial_div,
    monomial_divides,
    monomial_lcm,
)

DEFAULT_BUDGET = 20_000


class IdealHandle:
    """A finitely generated ideal, held by its generator list.

    Zero generators are dropped at construction; the empty list is the zero
    ideal.
    """

    __slots__ = ("context", "generators")

    def __init__(self, context: VarContext, generators: Iterable[Poly]):
        gens = []
        for g in generators:
            if g.context != context:
                raise ContextMismatchError("ideal generator outside the context")
            if not g.is_zero():
                gens.append(g)
        self.context = context
        self.generators = tuple(gens)

    def __eq__(self, other):
        return (isinstance(other, IdealHandle)
                and self.context == other.context
                and self.generators == other.generators)

    def __hash__(self):
        return hash((self.context, self.generators))

    def __str__(self):
        if not self.generators:
            return "(0)"
        return "(" + ", ".join(str(g) for g in self.generators) + ")"


class GroebnerBasis:
    """The reduced Groebner basis of an ideal under a fixed term order.

    Reduced means: every element is monic, and no leading monomial divides
    any term of another element.  Such a basis is unique for (ideal, order),
    which makes ideal equality and membership decidable by normal forms.
    """

    __slots__ = ("context", "order", "polys")

    def __init__(self, context: VarContext, order: TermOrder,
                 polys: Sequence[Poly]):
        self.context = context
        self.order = order
        self.polys = tuple(polys)

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)

    @property
    def is_unit(self) -> bool:
        return len(self.polys) == 1 and self.polys[0] == self.context.one

    def leading_monomials(self):
        return [g.leading_monomial(self.order) for g in self.polys]

    def __eq__(self, other):
        return (isinstance(other, GroebnerBasis)
                and self.context == other.context
                and self.order == other.order
                and self.polys == other.polys)

    def __hash__(self):
        return hash((self.context, self.order, self.polys))

    def __str__(self):
        return "{" + ", ".join(str(g) for g in self.polys) + "}"


def _divide(f: Poly, divisors: Sequence[Poly], order: TermOrder,
            want_cofactors: bool = False):
    """Multivariate division: f = sum(q_i * divisors[i]) + r.

    No term of r is divisible by any divisor's leading monomial.  The
    divisor list order is part of the determinism contract.
    """
    context = f.context
    lead = [g.leading_term(order) for g in divisors]
    cofactors = [context.zero] * len(divisors) if want_cofactors else None
    remainder = context.zero
    p = f
    while not p.is_zero():
        m, c = p.leading_term(order)
        for i, (mg, cg) in enumerate(lead):
            if monomial_divides(mg, m):
                t = Poly._raw(context, {monomial_div(m, mg): c / cg})
                p = p - t * divisors[i]
                if want_cofactors:
                    cofactors[i] = cofactors[i] + t
                break
        else:
            t = Poly._raw(context, {m: c})
            remainder = remainder + t
            p = p - t
    return remainder, cofactors


def normal_form(f: Poly, basis: GroebnerBasis) -> Poly:
    """The unique remainder of f modulo the basis; zero iff f lies in the ideal."""
    if f.context != basis.context:
        raise ContextMismatchError("polynomial and basis contexts differ")
    if not basis.polys:
        return f
    return _divide(f, basis.polys, basis.order)[0]


def normal_form_with_cofactors(f: Poly, basis: GroebnerBasis):
    """(remainder, cofactors): f = sum(cofactor_i * basis_i) + remainder."""
    if f.context != basis.context:
        raise ContextMismatchError("polynomial and basis contexts differ")
    if not basis.polys:
        return f, []
    r, q = _divide(f, basis.polys, basis.order, want_cofactors=True)
    return r, q


def _s_poly(f: Poly, g: Poly, order: TermOrder) -> Poly:
    mf, cf = f.leading_term(order)
    mg, cg = g.leading_term(order)
    lcm = monomial_lcm(mf, mg)
    tf = Poly._raw(f.context, {monomial_div(lcm, mf): cf.inverse()})
    tg = Poly._raw(g.context, {monomial_div(lcm, mg): cg.inverse()})
    return tf * f - tg * g


def buchberger(generators: Iterable[Poly], order: TermOrder = TermOrder.GREVLEX,
               budget: int = DEFAULT_BUDGET) -> GroebnerBasis:
    """The unique reduced Groebner basis of (generators) under `order`.

    Normal selection strategy (lowest lcm degree first, ties broken by the
    order and then by index), with the coprime-leading-term criterion and the
    standard lcm chain criterion for pair elimination.  Exceeding `budget`
    S-polynomial reductions raises BudgetExceededError rather than returning
    anything partial.
    """
    gens = [g for g in generators if not g.is_zero()]
    if not gens:
        raise ValueError("buchberger needs a context; use an IdealHandle for (0)")
    context = gens[0].context
    for g in gens:
        if g.context != context:
            raise ContextMismatchError("generators live in different contexts")

    basis = []
    for g in gens:
        g = g.monic(order)
        if g not in basis:
            basis.append(g)

    def pair_key(pair):
        i, j = pair
        lcm = monomial_lcm(basis[i].leading_monomial(order),
                           basis[j].leading_monomial(order))
        return (monomial_degree(lcm), order.key(lcm), i, j)

    pending = {(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))}
    steps = 0
    while pending:
        pair = min(pending, key=pair_key)
        pending.discard(pair)
        i, j = pair
        mi = basis[i].leading_monomial(order)
        mj = basis[j].leading_monomial(order)
        lcm = monomial_lcm(mi, mj)
        # coprime criterion: S-poly reduces to zero automatically
        if all(a == 0 or b == 0 for a, b in zip(mi, mj)):
            continue
        # chain criterion: some k with LM_k | lcm and both mixed pairs done
        skip = False
        for k in range(len(basis)):
            if k == i or k == j:
                continue
            if not monomial_divides(basis[k].leading_monomial(order), lcm):
                continue
            if (min(i, k), max(i, k)) in pending:
                continue
            if (min(j, k), max(j, k)) in pending:
                continue
            skip = True
            break
        if skip:
            continue
        steps += 1
        if steps > budget:
            raise BudgetExceededError(
                f"Buchberger step budget ({budget}) exhausted")
        h, _ = _divide(_s_poly(basis[i], basis[j], order), basis, order)
        if h.is_zero():
            continue
        h = h.monic(order)
        basis.append(h)
        new = len(basis) - 1
        for t in range(new):
            pending.add((t, new))

    return GroebnerBasis(context, order, _reduce_basis(basis, order))


def _reduce_basis(basis, order: TermOrder):
    """Minimalize, then inter-reduce to the unique reduced basis."""
    context = basis[0].context
    # minimal: drop any element whose LM is divisible by another's LM
    minimal = []
    lead = [g.leading_monomial(order) for g in basis]
    for i, g in enumerate(basis):
        keep = True
        for j, m in enumerate(lead):
            if i == j:
                continue
            if monomial_divides(m, lead[i]) and (lead[i] != m or j < i):
                keep = False
                break
        if keep:
            minimal.append(g)
    # inter-reduce tails to the fixpoint
    changed = True
    while changed:
        changed = False
        for i in range(len(minimal)):
            others = minimal[:i] + minimal[i + 1:]
            if not others:
                continue
            r, _ = _divide(minimal[i], others, order)
            r = r.monic(order)
            if r != minimal[i]:
                minimal[i] = r
                changed = True
    minimal.sort(key=lambda g: order.key(g.leading_monomial(order)), reverse=True)
    return minimal


def groebner_basis(ideal: IdealHandle, order: TermOrder = TermOrder.GREVLEX,
                   budget: int = DEFAULT_BUDGET) -> GroebnerBasis:
    """Reduced basis of an IdealHandle; the zero ideal yields an empty basis."""
    if not ideal.generators:
        return GroebnerBasis(ideal.context, order, ())
    return buchberger(ideal.generators, order, budget)


def ideal_member(f: Poly, ideal: IdealHandle,
                 order: TermOrder = TermOrder.GREVLEX,
                 budget: int = DEFAULT_BUDGET) -> bool:
    """True iff f lies in the ideal (zero normal form)."""
    basis = groebner_basis(ideal, order, budget)
    return normal_form(f, basis).is_zero()


def is_unit_ideal(ideal: IdealHandle, order: TermOrder = TermOrder.GREVLEX,
                  budget: int = DEFAULT_BUDGET) -> bool:
    """True iff 1 lies in the ideal (reduced basis == {1})."""
    return groebner_basis(ideal, order, budget).is_unit


def krull_dimension(ideal: IdealHandle, order: TermOrder = TermOrder.GREVLEX,
                    budget: int = DEFAULT_BUDGET) -> int:
    """dim k[x_1..x_n]/I via the initial ideal.

    The dimension equals the largest size of a variable subset S such that no
    leading monomial of the reduced basis involves only variables from S.
    The answer is independent of the chosen term order.
    """
    basis = groebner_basis(ideal, order, budget)
    if basis.is_unit:
        raise UnitIdealError("the unit ideal has no Krull dimension")
    supports = [frozenset(i for i, e in enumerate(m) if e > 0)
                for m in basis.leading_monomials()]
    n = ideal.context.nvars
    for size in range(n, -1, -1):
        for subset in combinations(range(n), size):
            s = set(subset)
            if all(not sup <= s for sup in supports):
                return size
    raise AssertionError("unreachable: the empty set is always independent")


class QuotientRing:
    """k[x_1..x_n]/I with elements held as normal forms modulo I's basis.

    An empty defining basis models the polynomial ring itself, which lets
    derivations and simplicity checks treat both cases uniformly.
    """

    __slots__ = ("context", "defining", "basis")

    def __init__(self, context: VarContext, defining: IdealHandle,
                 basis: GroebnerBasis):
        if defining.context != context or basis.context != context:
            raise ContextMismatchError("quotient components share no context")
        if basis.is_unit:
            raise UnitIdealError("defining ideal is the whole ring")
        self.context = context
        self.defining = defining
        self.basis = basis

    @classmethod
    def of(cls, ideal: IdealHandle, order: TermOrder = TermOrder.GREVLEX,
           budget: int = DEFAULT_BUDGET) -> "QuotientRing":
        return cls(ideal.context, ideal, groebner_basis(ideal, order, budget))

    @classmethod
    def trivial(cls, context: VarContext) -> "QuotientRing":
        empty = IdealHandle(context, ())
        return cls(context, empty, GroebnerBasis(context, TermOrder.GREVLEX, ()))

    @property
    def is_trivial(self) -> bool:
        return not self.basis.polys

    def reduce(self, f: Poly) -> Poly:
        """Canonical representative of f modulo the defining ideal."""
        if f.context != self.context:
            raise ContextMismatchError("element outside the quotient's context")
        if not self.basis.polys:
            return f
        return normal_form(f, self.basis)

    def mul(self, a: Poly, b: Poly) -> Poly:
        return self.reduce(a * b)

    def dimension(self, budget: int = DEFAULT_BUDGET) -> int:
        return krull_dimension(self.defining, self.basis.order, budget)

    def generator(self, i: int) -> Poly:
        return self.context.var(i)

    def generators(self):
        return tuple(self.context.var(i) for i in range(self.context.nvars))

    def __eq__(self, other):
        return (isinstance(other, QuotientRing)
                and self.context == other.context
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.context, self.basis))

    def __str__(self):
        if self.is_trivial:
            return str(self.context)
        return f"{self.context}/{self.defining}"


def quotient_reduce(ring: QuotientRing, f: Poly) -> Poly:
    return ring.reduce(f)
