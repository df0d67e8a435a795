"""Apartment points, value sets of root-group valuations, filtration
membership for root parameters, and the reductive-quotient root set."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, inf

from wondercell.concave import ConcaveFn, Level
from wondercell.fieldarith import FieldElem, H0Elem
from wondercell.rootdata import RelativeForm

Q = Fraction
INF = inf


@dataclass(frozen=True)
class ApartmentPoint:
    """Offset from the fixed base valuation, in coroot-basis coordinates."""

    form: RelativeForm
    offset: tuple

    def __post_init__(self):
        object.__setattr__(self, "offset", tuple(Q(c) for c in self.offset))
        if len(self.offset) != self.form.rank:
            raise ValueError("offset has wrong rank")

    def pairing(self, a: tuple) -> Fraction:
        """<a, v> for a relative root a; the valuation shift at a."""
        return sum(
            v * self.form.cartan_pairing(tuple(a), s)
            for v, s in zip(self.offset, self.form.relative_simple)
        )


@dataclass(frozen=True)
class ValueSet:
    """Arithmetic progression shift + step*Z of root-group valuation values."""

    root: tuple
    step: Fraction
    shift: Fraction
    primed: bool

    def contains(self, r) -> bool:
        return ((Q(r) - self.shift) / self.step).denominator == 1

    def round_up(self, r, strict: bool = False) -> Fraction:
        """Least element >= r (or > r)."""
        q = (Q(r) - self.shift) / self.step
        k = floor(q) + 1 if (strict and q.denominator == 1) else ceil(q)
        return self.shift + k * self.step

    def elements_in(self, lo, hi) -> list:
        lo, hi = Q(lo), Q(hi)
        out = []
        x = self.round_up(lo)
        while x <= hi:
            out.append(x)
            x += self.step
        return out


def gamma_set(x: ApartmentPoint, a: tuple, primed: bool = False, mu: Fraction = Q(0)) -> ValueSet:
    """The value set of the root-group valuation at x for the root a.

    Non-multipliable, non-divisible a: (1/e_a)Z + <a, x>.
    Divisible a = 2b: valuations of trace-zero elements, Z + 1/2 - mu + <a, x>.
    Multipliable a: the sup-corrected set (1/2)Z + mu/2 + <a, x> when primed,
    else the raw quarter-lattice of (1/2)*omega(v)-values.
    """
    a = tuple(a)
    form = x.form
    shift = x.pairing(a)
    if form.is_divisible(a):
        return ValueSet(a, Q(1), Q(1, 2) - mu + shift, primed)
    if form.is_multipliable(a):
        if primed:
            return ValueSet(a, Q(1, 2), mu / 2 + shift, True)
        return ValueSet(a, Q(1, 4), -mu / 2 + shift, False)
    e = form.ramification_index(a)
    return ValueSet(a, Q(1, e), shift, primed)


def filtration_contains(
    x: ApartmentPoint,
    f: ConcaveFn,
    a: tuple,
    param,
    mu: Fraction = Q(0),
) -> bool:
    """Whether a root-group parameter lies in the level-f filtration at x.

    Non-multipliable a with a FieldElem u: omega(u) >= f(a) - <a, x>.
    Divisible a with a trace-zero FieldElem v: omega(v) >= f(a) + mu - <a, x>.
    Multipliable a with an H0Elem (u, v): omega(u) >= f(a) + gamma - <a, x>
    and omega(v) >= f(2a) + mu - <2a, x>, with gamma = -mu/2.
    Strict inequalities when the level carries a plus flag.
    """
    a = tuple(a)
    form = x.form
    if form.is_multipliable(a):
        if not isinstance(param, H0Elem):
            raise TypeError("multipliable root needs an H0 parameter (u, v)")
        two_a = tuple(2 * c for c in a)
        gamma = -mu / 2
        lu = f(a)
        lv = f(two_a)
        return _val_meets(param.u, lu, gamma - x.pairing(a)) and _val_meets(
            param.v, lv, mu - x.pairing(two_a)
        )
    if not isinstance(param, FieldElem):
        raise TypeError("non-multipliable root needs a FieldElem parameter")
    if form.is_divisible(a):
        return _val_meets(param, f(a), mu - x.pairing(a))
    return _val_meets(param, f(a), -x.pairing(a))


def _val_meets(elem: FieldElem, level: Level, correction: Fraction) -> bool:
    if level.is_infinite():
        return elem.is_zero() and elem.is_exact()
    return elem.val_ge(level.value + correction, strict=level.plus)


def phi_xf(x: ApartmentPoint, f: ConcaveFn, mu: Fraction = Q(0)):
    """Roots a with f(a) + f(-a) = 0 and f(a) in the primed value set, plus
    the induced simple roots; asserted reflection-stable."""
    form = x.form
    out = []
    for a in form.relative_roots:
        neg = tuple(-c for c in a)
        fa = f(a)
        if fa.is_infinite() or fa.plus or f(neg).plus:
            continue
        if fa.value + f(neg).value != 0:
            continue
        if gamma_set(x, a, primed=True, mu=mu).contains(fa.value):
            out.append(a)
    phi = tuple(sorted(out))
    phi_set = set(phi)
    for a in phi:
        assert tuple(-c for c in a) in phi_set, "phi_xf is not symmetric"
        for b in phi:
            refl = form.reflect(b, a)
            assert refl in phi_set, "phi_xf is not reflection-stable"
    delta = tuple(s for s in form.relative_simple if s in phi_set)
    return phi, delta


def jump_set(x: ApartmentPoint, a: tuple, window, mu: Fraction = Q(0)) -> list:
    """Elements of the primed value set within a bounded window [lo, hi]."""
    lo, hi = window
    return gamma_set(x, a, primed=True, mu=mu).elements_in(lo, hi)
