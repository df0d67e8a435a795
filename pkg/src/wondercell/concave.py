"""Levels with a strictness flag (the ordered monoid R x {0,1} with infinity)
and concave functions on the relative roots together with zero."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import inf

from wondercell.rootdata import RelativeForm

Q = Fraction
INF = inf


@dataclass(frozen=True, order=False)
class Level:
    """A filtration level r or r+ (strict), or infinity.

    Ordering: r < r+ < s for r < s; infinity is absorbing and maximal.
    Addition: (r, p) + (s, q) = (r + s, p or q).
    """

    value: object = Q(0)  # Fraction, or INF
    plus: bool = False

    def __post_init__(self):
        if self.value != INF:
            object.__setattr__(self, "value", Q(self.value))
        else:
            object.__setattr__(self, "plus", False)

    @staticmethod
    def of(x) -> "Level":
        if isinstance(x, Level):
            return x
        if x == INF or x == "inf":
            return Level(INF)
        if isinstance(x, str):
            if x.endswith("+"):
                return Level(Q(x[:-1]), True)
            return Level(Q(x))
        return Level(Q(x))

    def is_infinite(self) -> bool:
        return self.value == INF

    def _key(self):
        return (self.value, self.plus) if not self.is_infinite() else (INF, False)

    def __lt__(self, other):
        return self._key() < Level.of(other)._key()

    def __le__(self, other):
        return self._key() <= Level.of(other)._key()

    def __gt__(self, other):
        return self._key() > Level.of(other)._key()

    def __ge__(self, other):
        return self._key() >= Level.of(other)._key()

    def __add__(self, other):
        other = Level.of(other)
        if self.is_infinite() or other.is_infinite():
            return Level(INF)
        return Level(self.value + other.value, self.plus or other.plus)

    def sharpened(self) -> "Level":
        return self if self.is_infinite() else Level(self.value, True)

    def __str__(self):
        if self.is_infinite():
            return "inf"
        return f"{self.value}+" if self.plus else f"{self.value}"

    __repr__ = __str__


ZERO_LEVEL = Level(Q(0))


class ConcaveFn:
    """A concave function on the relative roots and 0, with rational values."""

    def __init__(self, form: RelativeForm, values: dict, check: bool = True):
        self.form = form
        zero = tuple(0 for _ in range(form.rank))
        vals = {zero: Level.of(values.get(zero, values.get("0", Q(0))))}
        for r in form.relative_roots:
            if r not in values:
                raise ValueError(f"missing value for root {r}")
            vals[r] = Level.of(values[r])
        self.values = vals
        self.zero_key = zero
        if check and not is_concave(form, vals):
            raise ValueError("values are not concave")

    def __call__(self, root) -> Level:
        key = tuple(root)
        if key not in self.values:
            raise KeyError(f"{root} is not in the domain")
        return self.values[key]

    @property
    def at_zero(self) -> Level:
        return self.values[self.zero_key]

    def __eq__(self, other):
        return isinstance(other, ConcaveFn) and self.values == other.values

    def __repr__(self):
        entries = ", ".join(f"{k}:{v}" for k, v in sorted(self.values.items()))
        return f"ConcaveFn({entries})"


def is_concave(form: RelativeForm, values: dict) -> bool:
    """f(a+b) <= f(a) + f(b) over all pairs from the roots and 0."""
    zero = tuple(0 for _ in range(form.rank))
    domain = set(form.relative_roots) | {zero}
    for a in domain:
        if a not in values:
            raise ValueError(f"missing value for {a}")
    for a in domain:
        for b in domain:
            s = tuple(x + y for x, y in zip(a, b))
            if s in domain:
                fa, fb, fs = Level.of(values[a]), Level.of(values[b]), Level.of(values[s])
                if not fs <= fa + fb:
                    return False
    return True


def f_plus(f: ConcaveFn) -> ConcaveFn:
    """Add a strictness flag exactly where f(a) + f(-a) = 0 (and at 0 when
    f(0) = 0); concavity of the result is re-checked."""
    out = {}
    for key, level in f.values.items():
        neg = tuple(-c for c in key)
        if f.values[key] + f.values[neg] == ZERO_LEVEL:
            out[key] = level.sharpened()
        else:
            out[key] = level
    return ConcaveFn(f.form, out)


def standard_concave(form: RelativeForm, kind: str, custom: dict | None = None) -> ConcaveFn:
    """Named concave functions: 'zero', 'moy-prasad:r', or 'custom'."""
    zero = tuple(0 for _ in range(form.rank))
    if kind == "zero":
        vals = {r: Q(0) for r in form.relative_roots}
        vals[zero] = Q(0)
        return ConcaveFn(form, vals)
    if kind.startswith("moy-prasad") or kind.startswith("moy_prasad"):
        r = Q(kind.split(":", 1)[1]) if ":" in kind else Q(custom)
        if r < 0:
            raise ValueError("moy-prasad level must be >= 0")
        vals = {root: r for root in form.relative_roots}
        vals[zero] = r
        return ConcaveFn(form, vals)
    if kind == "custom":
        if custom is None:
            raise ValueError("custom values required")
        return ConcaveFn(form, {tuple(k): v for k, v in custom.items()})
    raise ValueError(f"unknown concave function kind {kind!r}")
