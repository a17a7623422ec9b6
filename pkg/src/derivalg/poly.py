"""Canonical multivariate commutative polynomials over an exact field.

A polynomial is a map from exponent vectors (plain int tuples, one entry per
context variable) to nonzero :class:`~derivalg.field.FieldElement`
coefficients.  The empty map is zero.  Two polynomials are equal exactly when
their term maps are identical, so structural equality is mathematical
equality.

Contexts are small (a handful of variables at desk scale), so exponent
vectors are dense tuples rather than sparse maps.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import (
    ContextMismatchError,
    InexactDivisionError,
    ZeroPolynomialError,
)
from .field import FieldElement, FieldSpec

Monomial = tuple  # exponent vector; length == number of context variables


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    """True when a | b componentwise."""
    return all(x <= y for x, y in zip(a, b))


def monomial_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def monomial_degree(a: Monomial) -> int:
    return sum(a)


class TermOrder(enum.Enum):
    """Monomial orders on a fixed variable order."""

    LEX = "lex"
    GREVLEX = "grevlex"

    def key(self, exponents: Monomial):
        """Sort key; larger key = larger monomial under the order."""
        if self is TermOrder.LEX:
            return exponents
        # graded reverse lex: degree first, then the *last* variable in
        # which the monomials differ decides, reversed.
        return (sum(exponents),) + tuple(-e for e in reversed(exponents))

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class VarContext:
    """An ordered tuple of distinct variable names plus the coefficient field.

    The order is fixed at creation; every polynomial operation below assumes
    both operands share one context object (compared by value).
    """

    names: tuple
    field: FieldSpec

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        if any(not n for n in names):
            raise ValueError("variable names must be nonempty")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no variable {name!r} in context {self}") from None

    def var(self, i: int) -> "Poly":
        exp = [0] * self.nvars
        exp[i] = 1
        return Poly._raw(self, {tuple(exp): self.field.one})

    def var_by_name(self, name: str) -> "Poly":
        return self.var(self.index(name))

    def const(self, value) -> "Poly":
        c = self.field.element(value)
        if c.is_zero():
            return Poly._raw(self, {})
        return Poly._raw(self, {(0,) * self.nvars: c})

    @property
    def zero(self) -> "Poly":
        return Poly._raw(self, {})

    @property
    def one(self) -> "Poly":
        return self.const(1)

    def __str__(self):
        return f"{self.field}[{', '.join(self.names)}]"


class Poly:
    """An exact multivariate polynomial in a :class:`VarContext`.

    Immutable by convention; arithmetic returns fresh objects and never
    stores zero coefficients.
    """

    __slots__ = ("context", "_terms")

    def __init__(self, context: VarContext, terms: dict):
        n = context.nvars
        clean = {}
        for mono, coeff in terms.items():
            mono = tuple(mono)
            if len(mono) != n or any(e < 0 for e in mono):
                raise ValueError(f"bad exponent vector {mono} for {context}")
            c = context.field.element(coeff)
            if not c.is_zero():
                clean[mono] = c
        self.context = context
        self._terms = clean

    @classmethod
    def _raw(cls, context: VarContext, terms: dict) -> "Poly":
        # Internal fast path: terms already canonical (no zeros, valid keys).
        self = object.__new__(cls)
        self.context = context
        self._terms = terms
        return self

    # -- inspection ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def terms(self) -> Iterator:
        """Term pairs sorted descending by the context's lex order."""
        return iter(sorted(self._terms.items(),
                           key=lambda kv: kv[0], reverse=True))

    def coeff(self, mono: Monomial) -> FieldElement:
        return self._terms.get(tuple(mono), self.context.field.zero)

    def total_degree(self) -> int:
        """Max term degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(m) for m in self._terms)

    def degree_in(self, i: int) -> int:
        """Max exponent of variable i; 0 if the variable is absent."""
        if not self._terms:
            return 0
        return max(m[i] for m in self._terms)

    def lowest_var_present(self) -> int | None:
        """Smallest variable index with a positive exponent somewhere."""
        present = [i for i in range(self.context.nvars)
                   if any(m[i] > 0 for m in self._terms)]
        return min(present) if present else None

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self._terms)

    def constant_value(self) -> FieldElement:
        return self.coeff((0,) * self.context.nvars)

    def leading_term(self, order: TermOrder):
        """(monomial, coefficient) maximal under `order`; zero poly raises."""
        if not self._terms:
            raise ZeroPolynomialError("the zero polynomial has no leading term")
        m = max(self._terms, key=order.key)
        return m, self._terms[m]

    def leading_monomial(self, order: TermOrder) -> Monomial:
        return self.leading_term(order)[0]

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.context != self.context:
                raise ContextMismatchError(
                    f"context mismatch: {self.context} vs {other.context}")
            return other
        if isinstance(other, (int, Fraction, FieldElement)):
            return self.context.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        terms = dict(self._terms)
        for m, c in o._terms.items():
            acc = terms.get(m)
            s = c if acc is None else acc + c
            if s.is_zero():
                terms.pop(m, None)
            else:
                terms[m] = s
        return Poly._raw(self.context, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.context, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        terms = {}
        for ma, ca in self._terms.items():
            for mb, cb in o._terms.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                c = ca * cb
                acc = terms.get(m)
                s = c if acc is None else acc + c
                if s.is_zero():
                    terms.pop(m, None)
                else:
                    terms[m] = s
        return Poly._raw(self.context, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers take non-negative int exponents")
        result = self.context.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def scale(self, c: FieldElement) -> "Poly":
        c = self.context.field.element(c)
        if c.is_zero():
            return self.context.zero
        return Poly._raw(self.context,
                         {m: v * c for m, v in self._terms.items()})

    def monic(self, order: TermOrder) -> "Poly":
        _, lc = self.leading_term(order)
        if lc.is_one():
            return self
        return self.scale(lc.inverse())

    # -- calculus and evaluation -----------------------------------------

    def partial(self, i: int) -> "Poly":
        """Formal partial derivative by variable i.

        Exponents multiply coefficients inside the field, so in
        characteristic p the terms with p | exponent vanish.
        """
        if not 0 <= i < self.context.nvars:
            raise IndexError(f"variable index {i} out of range")
        field = self.context.field
        terms = {}
        for m, c in self._terms.items():
            e = m[i]
            if e == 0:
                continue
            nc = c * field.element(e)
            if nc.is_zero():
                continue
            terms[m[:i] + (e - 1,) + m[i + 1:]] = nc
        return Poly._raw(self.context, terms)

    def evaluate(self, point: Sequence) -> FieldElement:
        field = self.context.field
        values = [field.element(v) for v in point]
        if len(values) != self.context.nvars:
            raise ValueError("point arity does not match the context")
        total = field.zero
        for m, c in self._terms.items():
            acc = c
            for v, e in zip(values, m):
                for _ in range(e):
                    acc = acc * v
            total = total + acc
        return total

    # -- identity --------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.context == other.context and self._terms == other._terms
        if isinstance(other, (int, Fraction, FieldElement)):
            return self == self.context.const(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.context, frozenset(self._terms.items())))

    # -- printing --------------------------------------------------------

    def __str__(self):
        if not self._terms:
            return "0"
        chunks = []
        for m, c in self.terms():
            factors = []
            for name, e in zip(self.context.names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            value = c.value
            negative = self.context.field.is_rationals and value < 0
            mag = -value if negative else value
            if factors:
                if mag == 1:
                    body = "*".join(factors)
                else:
                    body = f"{mag}*" + "*".join(factors)
            else:
                body = str(mag)
            if not chunks:
                chunks.append(f"-{body}" if negative else body)
            else:
                chunks.append(f"- {body}" if negative else f"+ {body}")
        return " ".join(chunks)

    def __repr__(self):
        return f"Poly({self})"


class InjectivityStatus(enum.Enum):
    INJECTIVE = "Injective"
    NOT_INJECTIVE = "NotInjective"
    UNKNOWN = "Unknown"


class RingEndomorphism:
    """A ring endomorphism of k[x_1..x_n] given by the images of the variables."""

    __slots__ = ("context", "images")

    def __init__(self, context: VarContext, images: Iterable[Poly]):
        images = tuple(images)
        if len(images) != context.nvars:
            raise ValueError("one image per context variable is required")
        for g in images:
            if g.context != context:
                raise ContextMismatchError("endomorphism images leave the context")
        self.context = context
        self.images = images

    @classmethod
    def identity(cls, context: VarContext) -> "RingEndomorphism":
        return cls(context, [context.var(i) for i in range(context.nvars)])

    @property
    def is_identity(self) -> bool:
        return all(g == self.context.var(i) for i, g in enumerate(self.images))

    def __call__(self, f: Poly) -> Poly:
        """Substitute the images for the variables of f and expand."""
        if f.context != self.context:
            raise ContextMismatchError("polynomial is not in the endomorphism's context")
        # cache image powers across terms
        powers = [{0: self.context.one} for _ in range(self.context.nvars)]

        def power(i, e):
            cache = powers[i]
            if e not in cache:
                cache[e] = power(i, e - 1) * self.images[i]
            return cache[e]

        result = self.context.zero
        for m, c in f._terms.items():
            term = self.context.const(c)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    def injectivity(self) -> InjectivityStatus:
        """Decide injectivity where the theory allows.

        Characteristic 0: injective iff the Jacobian determinant of the
        images is not identically zero (algebraic-independence criterion).
        Characteristic p: only the variable-permutation case is decided;
        everything else is Unknown.
        """
        n = self.context.nvars
        if self.context.field.characteristic != 0:
            seen = set()
            for g in self.images:
                items = list(g._terms.items())
                if len(items) != 1:
                    return InjectivityStatus.UNKNOWN
                mono, coeff = items[0]
                if sum(mono) != 1 or not coeff.is_one():
                    return InjectivityStatus.UNKNOWN
                seen.add(mono.index(1))
            if seen == set(range(n)):
                return InjectivityStatus.INJECTIVE
            return InjectivityStatus.NOT_INJECTIVE
        jac = [[self.images[i].partial(j) for j in range(n)] for i in range(n)]
        det = det_fraction_free(jac, self.context)
        if det.is_zero():
            return InjectivityStatus.NOT_INJECTIVE
        return InjectivityStatus.INJECTIVE

    def __eq__(self, other):
        return (isinstance(other, RingEndomorphism)
                and self.context == other.context
                and self.images == other.images)

    def __hash__(self):
        return hash((self.context, self.images))

    def __str__(self):
        pairs = ", ".join(f"{n} -> {g}" for n, g in
                          zip(self.context.names, self.images))
        return pairs


def apply_endo(phi: RingEndomorphism, f: Poly) -> Poly:
    return phi(f)


def exact_div(f: Poly, g: Poly, order: TermOrder = TermOrder.GREVLEX) -> Poly:
    """The quotient f/g when g divides f exactly; otherwise raises."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if f.context != g.context:
        raise ContextMismatchError("exact_div operands share no context")
    mg, cg = g.leading_term(order)
    quotient = f.context.zero
    rem = f
    while not rem.is_zero():
        m, c = rem.leading_term(order)
        if not monomial_divides(mg, m):
            raise InexactDivisionError(f"({g}) does not divide ({f})")
        t = Poly._raw(f.context, {monomial_div(m, mg): c / cg})
        quotient = quotient + t
        rem = rem - t * g
    return quotient


def det_fraction_free(matrix, context: VarContext) -> Poly:
    """Determinant of a square Poly matrix via fraction-free elimination.

    Bareiss one-step elimination: every division is exact inside the
    polynomial ring, so no fraction-field arithmetic is needed.
    """
    n = len(matrix)
    if n == 0:
        return context.one
    work = [list(row) for row in matrix]
    if any(len(row) != n for row in work):
        raise ValueError("determinant needs a square matrix")
    sign = 1
    prev = context.one
    for k in range(n - 1):
        if work[k][k].is_zero():
            for r in range(k + 1, n):
                if not work[r][k].is_zero():
                    work[k], work[r] = work[r], work[k]
                    sign = -sign
                    break
            else:
                return context.zero
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = work[i][j] * work[k][k] - work[i][k] * work[k][j]
                work[i][j] = exact_div(num, prev) if not num.is_zero() else context.zero
            work[i][k] = context.zero
        prev = work[k][k]
    det = work[n - 1][n - 1]
    return -det if sign < 0 else det
