"""Derivations of polynomial and quotient rings.

A derivation is stored extensionally: one image polynomial per ring
generator.  On f it acts through the chain rule,

    d(f) = sum_i  (df/dx_i) * d(x_i),

which is additive and Leibniz by construction.  Derivations of a quotient
ring R/I revalidate d(I) <= I at construction; a silently non-invariant
derivation would corrupt every downstream check, so there is no unchecked
path.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    ContextMismatchError,
    NotInjectiveError,
    NotInvariantError,
)
from .groebner import (
    DEFAULT_BUDGET,
    IdealHandle,
    QuotientRing,
    TermOrder,
    groebner_basis,
    normal_form,
)
from .poly import InjectivityStatus, Poly, RingEndomorphism, VarContext


def _as_ring(ring) -> QuotientRing:
    if isinstance(ring, QuotientRing):
        return ring
    if isinstance(ring, VarContext):
        return QuotientRing.trivial(ring)
    raise TypeError(f"not a ring handle: {ring!r}")


class Derivation:
    """A derivation of a polynomial or quotient ring, given by generator images."""

    __slots__ = ("ring", "images")

    def __init__(self, ring, images: Iterable[Poly]):
        ring = _as_ring(ring)
        images = tuple(images)
        if len(images) != ring.context.nvars:
            raise ValueError("one image per ring generator is required")
        for g in images:
            if g.context != ring.context:
                raise ContextMismatchError("derivation image outside the ring")
        if not ring.is_trivial:
            images = tuple(ring.reduce(g) for g in images)
            for g in ring.defining.generators or ring.basis.polys:
                lifted = _chain_rule(g, images)
                if not ring.reduce(lifted).is_zero():
                    raise NotInvariantError(
                        f"derivation does not preserve the defining ideal: "
                        f"image of {g} is {lifted}",
                        generator=g, image=lifted)
        self.ring = ring
        self.images = images

    @classmethod
    def partial(cls, ring, i: int) -> "Derivation":
        """The i-th partial derivative (or its induced quotient map)."""
        ring = _as_ring(ring)
        n = ring.context.nvars
        one = ring.context.one
        zero = ring.context.zero
        return cls(ring, [one if j == i else zero for j in range(n)])

    @classmethod
    def zero(cls, ring) -> "Derivation":
        ring = _as_ring(ring)
        z = ring.context.zero
        return cls(ring, [z] * ring.context.nvars)

    def apply(self, f: Poly) -> Poly:
        if f.context != self.ring.context:
            raise ContextMismatchError("element outside the derivation's ring")
        return self.ring.reduce(_chain_rule(f, self.images))

    __call__ = apply

    def is_zero(self) -> bool:
        return all(g.is_zero() for g in self.images)

    def __eq__(self, other):
        return (isinstance(other, Derivation)
                and self.ring == other.ring
                and self.images == other.images)

    def __hash__(self):
        return hash((self.ring, self.images))

    def __str__(self):
        names = self.ring.context.names
        return ", ".join(f"{n} -> {g}" for n, g in zip(names, self.images))

    def __repr__(self):
        return f"Derivation({self})"


def _chain_rule(f: Poly, images: Sequence[Poly]) -> Poly:
    total = f.context.zero
    for i, g in enumerate(images):
        if g.is_zero():
            continue
        p = f.partial(i)
        if not p.is_zero():
            total = total + p * g
    return total


def commutator(d1: Derivation, d2: Derivation) -> Derivation:
    """The derivation d1 o d2 - d2 o d1; zero iff d1 and d2 commute."""
    if d1.ring != d2.ring:
        raise ContextMismatchError("commutator operands live on different rings")
    images = [d1.apply(d2.images[i]) - d2.apply(d1.images[i])
              for i in range(d1.ring.context.nvars)]
    return Derivation(d1.ring, images)


@dataclass(frozen=True)
class CommuteReport:
    """Outcome of a pairwise commutation check over a derivation list."""

    commute: bool
    first: int | None = None
    second: int | None = None
    generator: int | None = None
    witness: Poly | None = None


def commuting_set_check(derivations: Sequence[Derivation]) -> CommuteReport:
    """True iff every pair commutes; otherwise reports the first violation."""
    derivations = list(derivations)
    for d in derivations[1:]:
        if d.ring != derivations[0].ring:
            raise ContextMismatchError("derivations live on different rings")
    for i in range(len(derivations)):
        for j in range(i + 1, len(derivations)):
            c = commutator(derivations[i], derivations[j])
            for g, img in enumerate(c.images):
                if not img.is_zero():
                    return CommuteReport(False, i, j, g, img)
    return CommuteReport(True)


def d_ideal_check(ideal: IdealHandle, derivations: Sequence[Derivation],
                  order: TermOrder = TermOrder.GREVLEX,
                  budget: int = DEFAULT_BUDGET) -> bool:
    """True iff d(I) <= I for every derivation in the list.

    Checking the generators suffices: by the Leibniz rule the image of any
    combination sum(a_i g_i) is sum(d(a_i) g_i + a_i d(g_i)), which stays in
    I once every d(g_i) does.
    """
    basis = groebner_basis(ideal, order, budget)
    for g in ideal.generators:
        for d in derivations:
            if d.ring.context != ideal.context:
                raise ContextMismatchError("derivation outside the ideal's context")
            image = _chain_rule(g, d.images)
            if not normal_form(image, basis).is_zero():
                return False
    return True


def induce_on_quotient(d: Derivation, ring: QuotientRing) -> Derivation:
    """Push an ambient derivation down to R/I when d(I) <= I; else raise."""
    if not d.ring.is_trivial:
        raise ContextMismatchError("induce_on_quotient expects an ambient derivation")
    if d.ring.context != ring.context:
        raise ContextMismatchError("ambient and quotient contexts differ")
    for g in ring.defining.generators or ring.basis.polys:
        image = _chain_rule(g, d.images)
        if not ring.reduce(image).is_zero():
            raise NotInvariantError(
                f"derivation does not preserve the defining ideal: "
                f"image of {g} is {image}",
                generator=g, image=image)
    return Derivation(ring, [ring.reduce(g) for g in d.images])


class SkewDerivation:
    """The twisted-Leibniz family d(r) = c * (phi(r) - r).

    For an injective endomorphism phi this satisfies
    d(ab) = a*d(b) + d(a)*phi(b) exactly, which is the defining identity of a
    skew derivation with respect to phi.  Arbitrary generator images are not
    accepted: over a commutative ring the identity forces compatibility
    constraints with no general solution theory, so only this family (and the
    zero map) is constructible.
    """

    __slots__ = ("endo", "scale")

    def __init__(self, endo: RingEndomorphism, scale: Poly):
        if scale.context != endo.context:
            raise ContextMismatchError("scale polynomial outside the context")
        if endo.injectivity() is InjectivityStatus.NOT_INJECTIVE:
            raise NotInjectiveError("the twisting endomorphism must be injective")
        self.endo = endo
        self.scale = scale
        self._verify_identity()

    def _verify_identity(self, trials: int = 5):
        # spot-check d(ab) = a d(b) + d(a) phi(b) on seeded random pairs
        rng = random.Random(20240)
        ctx = self.endo.context
        for _ in range(trials):
            a = _random_poly(rng, ctx, max_degree=2, max_terms=3)
            b = _random_poly(rng, ctx, max_degree=2, max_terms=3)
            lhs = self.apply(a * b)
            rhs = a * self.apply(b) + self.apply(a) * self.endo(b)
            if lhs != rhs:
                raise AssertionError("skew-derivation identity failed")

    @property
    def context(self) -> VarContext:
        return self.endo.context

    def apply(self, r: Poly) -> Poly:
        if r.context != self.context:
            raise ContextMismatchError("element outside the skew derivation's ring")
        return self.scale * (self.endo(r) - r)

    __call__ = apply

    def is_zero(self) -> bool:
        return self.scale.is_zero() or self.endo.is_identity

    def __str__(self):
        return f"r -> ({self.scale}) * (phi(r) - r) with phi: {self.endo}"


def family_skew_derivation(scale: Poly, endo: RingEndomorphism) -> SkewDerivation:
    """Build the c*(phi - id) skew derivation; non-injective phi is rejected."""
    return SkewDerivation(endo, scale)


def _random_poly(rng: random.Random, context: VarContext,
                 max_degree: int, max_terms: int) -> Poly:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        mono = [0] * context.nvars
        if context.nvars:
            for _ in range(rng.randint(0, max_degree)):
                mono[rng.randrange(context.nvars)] += 1
        terms[tuple(mono)] = context.field.element(rng.randint(-3, 3))
    return Poly(context, terms)
