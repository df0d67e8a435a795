"""Exact truncated Laurent/Puiseux arithmetic over F_p or Q coefficients.

Elements are finite sums  sum c_e * t^e  with rational exponents whose
denominators divide the configured ramification index.  The base field is
kappa((t)) with the normalized valuation omega(t) = 1; the ramified extension
of degree e adjoins t^(1/e).  Every element carries a precision bound
``known_to``: digits at exponents >= known_to are unknown and never reported.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import inf

Q = Fraction
INF = inf


class PrecisionError(ArithmeticError):
    """An answer would depend on digits beyond the tracked precision."""


@dataclass(frozen=True)
class FieldConfig:
    """Coefficient field F_p (p = residue_char) or Q (residue_char = 0),
    default precision (terms kept past the leading exponent), and the
    ramification index bounding exponent denominators."""

    residue_char: int = 0
    precision: int = 12
    ramification: int = 1

    def __post_init__(self):
        if self.precision < 1:
            raise ValueError("precision must be >= 1")
        if self.ramification < 1:
            raise ValueError("ramification must be >= 1")
        if self.residue_char and self.residue_char < 2:
            raise ValueError("residue characteristic must be 0 or a prime")

    # -- coefficient arithmetic (int mod p, or Fraction) --

    def coeff(self, c):
        if self.residue_char:
            if isinstance(c, Fraction):
                num, den = c.numerator, c.denominator
                if den % self.residue_char == 0:
                    raise ZeroDivisionError("denominator not invertible mod p")
                return num * pow(den, -1, self.residue_char) % self.residue_char
            return int(c) % self.residue_char
        return Q(c)

    def coeff_inv(self, c):
        if self.residue_char:
            return pow(c, -1, self.residue_char)
        return 1 / c

    def zero(self) -> FieldElem:
        return FieldElem(self, {})

    def one(self) -> FieldElem:
        return self.elem(1)

    def elem(self, value) -> FieldElem:
        """Coerce an int, Fraction, literal string or FieldElem."""
        if isinstance(value, FieldElem):
            if value.config != self:
                raise ValueError("element from a different field configuration")
            return value
        if isinstance(value, str):
            return parse_series(self, value)
        c = self.coeff(value)
        return FieldElem(self, {Q(0): c} if c else {})

    def t(self, exponent=1) -> FieldElem:
        """Monomial t^exponent; exponent denominator must divide e."""
        return FieldElem(self, {Q(exponent): self.coeff(1)})

    def random_integral(self, rng, max_exp: int = 4, unit: bool = False) -> FieldElem:
        """Seeded random element of the ring of integers (exponent lattice (1/e)Z)."""
        e = self.ramification
        terms = {}
        for j in range(0, max_exp * e + 1):
            c = rng.randrange(self.residue_char) if self.residue_char else Q(rng.randrange(-9, 10))
            c = self.coeff(c)
            if c:
                terms[Q(j, e)] = c
        x = FieldElem(self, terms)
        if unit:
            lead = self.coeff(rng.randrange(1, self.residue_char) if self.residue_char else rng.choice([1, 2, 3, -1, -2]))
            x = FieldElem(self, {**x.terms, Q(0): lead})
        return x


class FieldElem:
    """Truncated Puiseux series; immutable by convention."""

    __slots__ = ("config", "terms", "known_to")

    def __init__(self, config: FieldConfig, terms: dict, known_to=INF):
        clean = {}
        e = config.ramification
        for exp, c in terms.items():
            exp = Q(exp)
            if exp >= known_to:
                continue
            if e % exp.denominator != 0:
                raise ValueError(f"exponent {exp} not in (1/{e})Z")
            c = config.coeff(c)
            if c:
                clean[exp] = c
        self.config = config
        self.terms = clean
        self.known_to = known_to

    # -- structure --

    def is_exact(self) -> bool:
        return self.known_to == INF

    def is_zero(self) -> bool:
        """No nonzero digit within the known range."""
        return not self.terms

    def val_bound(self):
        """A lower bound for the valuation, exact when a term is visible."""
        if self.terms:
            return min(self.terms)
        return self.known_to

    def valuation(self, exact: bool = True):
        """Least exponent present; INF for exact zero.

        Raises PrecisionError for an element that is zero only to precision
        when ``exact`` is demanded.
        """
        if self.terms:
            return min(self.terms)
        if self.is_exact():
            return INF
        if exact:
            raise PrecisionError("zero to working precision; valuation unknown")
        return self.known_to

    def val_ge(self, r, strict: bool = False) -> bool:
        """Decide omega(self) >= r (or > r).  Sound for truncated zeros."""
        v = self.val_bound()
        if v == INF:
            return True
        if not self.terms and not (v > r or (not strict and v >= r)):
            raise PrecisionError(f"cannot compare valuation >= {r} at precision {v}")
        return v > r if strict else v >= r

    def is_unit(self) -> bool:
        return bool(self.terms) and min(self.terms) == 0

    def coefficient(self, exp):
        exp = Q(exp)
        if exp >= self.known_to:
            raise PrecisionError(f"digit at t^{exp} beyond precision {self.known_to}")
        return self.terms.get(exp, self.config.coeff(0) if self.config.residue_char else Q(0))

    def residue_tuple(self, e: int | None = None) -> tuple:
        """Coefficients at 0, 1/e, ..., (e-1)/e: the Weil-restriction residues."""
        if not self.val_ge(0):
            raise ValueError("element is not integral")
        e = e or self.config.ramification
        if self.known_to <= Q(e - 1, e):
            raise PrecisionError("precision too low for a residue tuple")
        return tuple(self.coefficient(Q(j, e)) for j in range(e))

    # -- arithmetic --

    def _binary(self, other):
        if not isinstance(other, FieldElem):
            other = self.config.elem(other)
        return other

    def __add__(self, other):
        other = self._binary(other)
        known = min(self.known_to, other.known_to)
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            s = terms.get(exp)
            terms[exp] = c if s is None else self.config.coeff(s + c)
        return FieldElem(self.config, terms, known)

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.config, {e: -c for e, c in self.terms.items()}, self.known_to)

    def __sub__(self, other):
        return self + (-self._binary(other))

    def __rsub__(self, other):
        return self._binary(other) + (-self)

    def __mul__(self, other):
        other = self._binary(other)
        if (self.is_exact() and self.is_zero()) or (other.is_exact() and other.is_zero()):
            return self.config.zero()
        known = min(self.known_to + other.val_bound(), other.known_to + self.val_bound())
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                if e >= known:
                    continue
                s = terms.get(e)
                prod = self.config.coeff(c1 * c2)
                terms[e] = prod if s is None else self.config.coeff(s + prod)
        return FieldElem(self.config, terms, known)

    __rmul__ = __mul__

    def shift(self, r) -> FieldElem:
        """Multiply by the exact monomial t^r."""
        r = Q(r)
        known = INF if self.known_to == INF else self.known_to + r
        return FieldElem(self.config, {e + r: c for e, c in self.terms.items()}, known)

    def inv(self) -> FieldElem:
        """Series inverse, truncated to the configured precision."""
        if not self.terms:
            if self.is_exact():
                raise ZeroDivisionError("inverse of exact zero")
            raise PrecisionError("inverse of an element indistinguishable from 0")
        v = min(self.terms)
        known = min(self.known_to - 2 * v, -v + self.config.precision)
        lead = self.terms[v]
        lead_inv = self.config.coeff_inv(lead)
        # self = lead*t^v * (1 + y) with omega(y) > 0; invert the unit part.
        y_terms = {e - v: self.config.coeff(c * lead_inv) for e, c in self.terms.items() if e != v}
        y = FieldElem(self.config, y_terms, known + v if known != INF else INF)
        acc = self.config.one()
        power = self.config.one()
        bound = known + v  # relative precision of the unit-part inverse
        steps = 0
        while True:
            power = power * y
            steps += 1
            if power.is_zero() or power.val_bound() >= bound or steps > 4 * self.config.precision * self.config.ramification:
                break
            acc = acc + (power if steps % 2 == 0 else -power)
        scaled = {e: self.config.coeff(c * lead_inv) for e, c in acc.terms.items()}
        return FieldElem(self.config, scaled, bound).shift(-v)

    def __truediv__(self, other):
        return self * self._binary(other).inv()

    def __eq__(self, other):
        if not isinstance(other, (FieldElem, int, Fraction)):
            return NotImplemented
        diff = self - self._binary(other)
        return diff.is_zero()

    def __hash__(self):
        raise TypeError("FieldElem is precision-truncated; not hashable")

    # -- display --

    def __repr__(self):
        return f"<{format_series(self)}>"

    def __str__(self):
        return format_series(self)


def format_series(x: FieldElem) -> str:
    if not x.terms:
        return "0"
    parts = []
    for exp in sorted(x.terms):
        c = x.terms[exp]
        if exp == 0:
            parts.append(str(c))
        else:
            # negative or fractional exponents are parenthesized for re-parsing
            if exp == 1:
                e_str = "t"
            elif exp.denominator == 1 and exp > 0:
                e_str = f"t^{exp}"
            else:
                e_str = f"t^({exp})"
            if c == 1:
                parts.append(e_str)
            elif c == -1:
                parts.append(f"-{e_str}")
            else:
                parts.append(f"{c}*{e_str}")
    return " + ".join(parts).replace("+ -", "- ")


_TERM_RE = re.compile(
    r"^(?P<coeff>\d+(?:/\d+)?)?\*?"
    r"(?P<t>t(?:\^(?:\((?P<pexp>-?\d+(?:/\d+)?)\)|(?P<exp>-?\d+(?:/\d+)?)))?)?$"
)


def parse_series(config: FieldConfig, text: str) -> FieldElem:
    """Parse literals like '1 + 2*t + 3*t^(3/2) - t^-1'; 'inf' is rejected here."""
    text = text.replace(" ", "")
    if not text:
        raise ValueError("empty series literal")
    chunks = [c for c in re.split(r"(?=[+-](?![^(]*\)))", text) if c]
    terms: dict = {}
    for chunk in chunks:
        sign = 1
        if chunk[0] in "+-":
            sign = -1 if chunk[0] == "-" else 1
            chunk = chunk[1:]
        m = _TERM_RE.match(chunk)
        if not m or (m.group("coeff") is None and m.group("t") is None):
            raise ValueError(f"cannot parse term {chunk!r}")
        c = sign * Q(m.group("coeff") or 1)
        exp = Q(0)
        if m.group("t"):
            raw = m.group("pexp") or m.group("exp")
            exp = Q(raw) if raw is not None else Q(1)
        c = config.coeff(c)
        prev = terms.get(exp)
        terms[exp] = c if prev is None else config.coeff(prev + c)
    return FieldElem(config, terms)


# ---------------------------------------------------------------------------
# Ramified quadratic extension L' = L(t^(1/2)) with sigma: t^(1/2) -> -t^(1/2)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadExt:
    """The ramified quadratic extension of kappa((t)); carries sigma, trace, norm.

    Elements of both L and L' are FieldElems over ``ext`` (ramification 2);
    L is the subfield of integer exponents.
    """

    base: FieldConfig

    def __post_init__(self):
        if self.base.residue_char == 2:
            raise ValueError("residue characteristic 2 is out of scope")
        if self.base.ramification != 1:
            raise ValueError("base configuration must be unramified")

    @property
    def ext(self) -> FieldConfig:
        return FieldConfig(self.base.residue_char, self.base.precision, 2)

    def uniformizer(self) -> FieldElem:
        return self.ext.t(Q(1, 2))

    def sigma(self, x: FieldElem) -> FieldElem:
        """The involution t^(1/2) -> -t^(1/2): negate odd half-exponent digits."""
        terms = {e: (-c if e.denominator == 2 else c) for e, c in x.terms.items()}
        return FieldElem(x.config, terms, x.known_to)

    def trace(self, x: FieldElem) -> FieldElem:
        return x + self.sigma(x)

    def norm(self, x: FieldElem) -> FieldElem:
        return x * self.sigma(x)

    def in_base(self, x: FieldElem) -> bool:
        return all(e.denominator == 1 for e in x.terms)

    def split(self, x: FieldElem):
        """x = even + odd with even in L and odd in t^(1/2)*L."""
        even = FieldElem(x.config, {e: c for e, c in x.terms.items() if e.denominator == 1}, x.known_to)
        odd = FieldElem(x.config, {e: c for e, c in x.terms.items() if e.denominator == 2}, x.known_to)
        return even, odd


def quad_ops(ext: QuadExt, x: FieldElem, which: str) -> FieldElem:
    """Dispatcher: sigma / trace / norm of an element of L'."""
    if which == "sigma":
        return ext.sigma(x)
    if which == "trace":
        return ext.trace(x)
    if which == "norm":
        return ext.norm(x)
    raise ValueError(f"unknown quadratic operation {which!r}")


def mu_constant(ext: QuadExt) -> Fraction:
    """sup of omega over trace-1 elements of L'.

    For the ramified quadratic in residue characteristic != 2 the supremum is
    attained at 1/2 (the trace-zero part only lowers the valuation), so mu = 0.
    """
    if ext.base.residue_char == 2:
        raise ValueError("residue characteristic 2 is out of scope")
    return Q(0)


def gamma_constant(ext: QuadExt) -> Fraction:
    """-mu/2; the valuation correction for multipliable-root parameters."""
    return -mu_constant(ext) / 2


# ---------------------------------------------------------------------------
# The parameter group H0(L', L) = {(u, v) : u*sigma(u) = v + sigma(v)}
# ---------------------------------------------------------------------------


@dataclass
class H0Elem:
    """Root-group parameter (u, v) for a multipliable root."""

    ext: QuadExt
    u: FieldElem
    v: FieldElem

    def __post_init__(self):
        defect = self.ext.norm(self.u) - self.ext.trace(self.v)
        if not defect.is_zero():
            raise ValueError(f"H0 relation violated: u*sigma(u) - Tr(v) = {defect}")

    def __eq__(self, other):
        return isinstance(other, H0Elem) and self.u == other.u and self.v == other.v

    def __repr__(self):
        return f"H0({self.u}, {self.v})"


def h0_identity(ext: QuadExt) -> H0Elem:
    return H0Elem(ext, ext.ext.zero(), ext.ext.zero())


def h0_compose(ext: QuadExt, a: H0Elem, b: H0Elem) -> H0Elem:
    """Group law pulled back from upper-triangular matrix multiplication."""
    return H0Elem(ext, a.u + b.u, a.v + b.v + ext.sigma(a.u) * b.u)


def h0_inverse(ext: QuadExt, a: H0Elem) -> H0Elem:
    return H0Elem(ext, -a.u, ext.sigma(a.v))


def h0_random(ext: QuadExt, rng, max_exp: int = 3, min_val=Q(0)) -> H0Elem:
    """Seeded random H0 element with omega(u) >= min_val, omega(v) >= 2*min_val."""
    F = ext.ext
    u = F.random_integral(rng, max_exp).shift(min_val)
    half = F.elem(Q(1, 2))
    v_even = ext.norm(u) * half
    odd = F.random_integral(rng, max_exp).shift(Q(1, 2) + 2 * min_val)
    v_odd = FieldElem(F, {e: c for e, c in odd.terms.items() if e.denominator == 2}, odd.known_to)
    return H0Elem(ext, u, v_even + v_odd)


def arith(x: FieldElem, y: FieldElem | None, op: str) -> FieldElem:
    """Dispatcher over {add, mul, inv, neg} matching the CLI surface."""
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "neg":
        return -x
    if op == "inv":
        return x.inv()
    raise ValueError(f"unknown arithmetic operation {op!r}")
