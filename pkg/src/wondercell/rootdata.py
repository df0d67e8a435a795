"""Based root systems, diagram-automorphism forms, and relative root systems.

Roots are integer coordinate vectors over the simple-root basis.  The relative
system of a quasi-split form is obtained by summing coordinates over Galois
orbits of simple roots; it may be non-reduced (type BC1 for the order-2 form
of A2).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

Q = Fraction

# cartan[i][j] = <alpha_j, alpha_i^vee>; d[i] = half the squared length of alpha_i
_CARTAN = {
    "A1": ([[2]], [1]),
    "A2": ([[2, -1], [-1, 2]], [1, 1]),
    "A3": ([[2, -1, 0], [-1, 2, -1], [0, -1, 2]], [1, 1, 1]),
    "B2": ([[2, -1], [-2, 2]], [2, 1]),
    "G2": ([[2, -3], [-1, 2]], [1, 3]),
}

_EXPECTED_COUNT = {"A1": 2, "A2": 6, "A3": 12, "B2": 8, "G2": 12}


@dataclass(frozen=True)
class RootSystem:
    """Absolute based root system of one of the supported Cartan types."""

    cartan_type: str
    cartan: tuple
    lengths: tuple  # d_i = (alpha_i, alpha_i)/2
    roots: tuple  # all roots, coordinate vectors over the simple roots
    simple_roots: tuple

    @property
    def rank(self) -> int:
        return len(self.simple_roots)

    def pairing(self, beta: tuple, i: int) -> int:
        """<beta, alpha_i^vee> for a root beta = sum c_j alpha_j."""
        return sum(c * self.cartan[i][j] for j, c in enumerate(beta))

    def inner(self, a: tuple, b: tuple):
        """Exact W-invariant inner product (a, b)."""
        return sum(
            Q(a[i]) * Q(b[j]) * self.lengths[i] * self.cartan[i][j]
            for i in range(self.rank)
            for j in range(self.rank)
        )

    def coroot_pairing(self, beta: tuple, gamma: tuple) -> Fraction:
        """<beta, gamma^vee> = 2 (beta, gamma) / (gamma, gamma)."""
        return 2 * self.inner(beta, gamma) / self.inner(gamma, gamma)

    def reflect(self, beta: tuple, i: int) -> tuple:
        """Simple reflection s_i applied to beta."""
        c = self.pairing(beta, i)
        out = list(beta)
        out[i] -= c
        return tuple(out)

    def positive(self, beta: tuple) -> bool:
        return any(c > 0 for c in beta)

    def height(self, beta: tuple) -> int:
        return sum(beta)


def build_root_system(cartan_type: str) -> RootSystem:
    """Reflection closure of the simple roots for a supported type label."""
    label = cartan_type.strip().upper().replace("₁", "1").replace("₂", "2").replace("₃", "3")
    if label not in _CARTAN:
        raise ValueError(f"unsupported Cartan type {cartan_type!r}")
    cartan, lengths = _CARTAN[label]
    rank = len(cartan)
    simple = [tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank)]
    rs_stub = RootSystem(label, tuple(map(tuple, cartan)), tuple(lengths), (), tuple(simple))
    roots = set(simple)
    frontier = list(simple)
    while frontier:
        beta = frontier.pop()
        for i in range(rank):
            img = rs_stub.reflect(beta, i)
            if img not in roots:
                roots.add(img)
                frontier.append(img)
    roots |= {tuple(-c for c in r) for r in roots}
    ordered = tuple(sorted(roots, key=lambda r: (sum(r), r)))
    rs = RootSystem(label, tuple(map(tuple, cartan)), tuple(lengths), ordered, tuple(simple))
    if len(ordered) != _EXPECTED_COUNT[label]:
        raise AssertionError(f"reflection closure of {label} gave {len(ordered)} roots")
    return rs


@dataclass(frozen=True)
class RelativeForm:
    """A (quasi-)split form: absolute system + diagram automorphism + the
    relative root system with multipliable/divisible flags and orbit data."""

    base: RootSystem
    action: tuple  # permutation of simple-root indices
    relative_roots: tuple  # vectors over the relative simple-root basis (orbits)
    relative_simple: tuple
    orbits: tuple  # tuple of sorted index-tuples partitioning the absolute simples
    rel_cartan: tuple  # <alpha_j, alpha_i^vee> for the reduced relative simples

    @property
    def rank(self) -> int:
        return len(self.relative_simple)

    @property
    def split(self) -> bool:
        return all(len(o) == 1 for o in self.orbits)

    def restrict(self, alpha: tuple) -> tuple:
        """Restriction of an absolute root to the relative character lattice."""
        return tuple(sum(alpha[i] for i in orbit) for orbit in self.orbits)

    def is_multipliable(self, a: tuple) -> bool:
        return tuple(2 * c for c in a) in set(self.relative_roots)

    def is_divisible(self, a: tuple) -> bool:
        return all(c % 2 == 0 for c in a) and tuple(c // 2 for c in a) in set(self.relative_roots)

    def reduced_roots(self) -> tuple:
        return tuple(r for r in self.relative_roots if not self.is_divisible(r))

    def positive_roots(self) -> tuple:
        return tuple(r for r in self.relative_roots if any(c > 0 for c in r))

    def lift(self, a: tuple) -> tuple:
        """The fixed absolute lift: lexicographically least preimage of a."""
        pre = sorted(alpha for alpha in self.base.roots if self.restrict(alpha) == a)
        if not pre:
            raise ValueError(f"{a} is not a relative root")
        return pre[0]

    def lift_orbit(self, a: tuple) -> tuple:
        """Galois orbit of the fixed lift of a."""
        lift = self.lift(a)
        orbit = {lift}
        frontier = [lift]
        while frontier:
            alpha = frontier.pop()
            img = self.apply_action(alpha)
            if img not in orbit:
                orbit.add(img)
                frontier.append(img)
        return tuple(sorted(orbit))

    def apply_action(self, alpha: tuple) -> tuple:
        """Diagram automorphism on an absolute root (permutes coordinates)."""
        out = [0] * len(alpha)
        for i, c in enumerate(alpha):
            out[self.action[i]] = c
        return tuple(out)

    def ramification_index(self, a: tuple) -> int:
        """e_a = [k_a : k] = orbit size of the fixed lift (totally ramified)."""
        return len(self.lift_orbit(a))

    def field_label(self, a: tuple) -> str:
        e = self.ramification_index(a)
        return "k" if e == 1 else f"k[{e}]"

    def pairing(self, a: tuple, i: int) -> int:
        """<a, alpha_i^vee> over the reduced relative simple roots."""
        return sum(c * self.rel_cartan[i][j] for j, c in enumerate(a))

    def cartan_pairing(self, b: tuple, a: tuple) -> int:
        """<b, a^vee> for relative roots, an integer."""
        return _int(self._rel_coroot_pairing(b, a))

    def _rel_inner(self, a: tuple, b: tuple):
        """W-invariant inner product on X*(S) x Q: a relative root embeds into
        the absolute character space as the Galois average of any lift."""
        avg_a = _average(self.lift_orbit(a))
        avg_b = _average(self.lift_orbit(b))
        return sum(
            avg_a[i] * avg_b[j] * self.base.lengths[i] * self.base.cartan[i][j]
            for i in range(self.base.rank)
            for j in range(self.base.rank)
        )

    def _rel_coroot_pairing(self, b: tuple, a: tuple) -> Fraction:
        return 2 * self._rel_inner(b, a) / self._rel_inner(a, a)

    def reflect(self, beta: tuple, a: tuple) -> tuple:
        """Reflection of a relative root beta along the relative root a."""
        c = self._rel_coroot_pairing(beta, a)
        if c.denominator != 1:
            raise AssertionError("non-integral Cartan pairing")
        return tuple(b - int(c) * x for b, x in zip(beta, a))


def _average(vectors) -> tuple:
    n = len(vectors)
    acc = [Q(0)] * len(vectors[0])
    for v in vectors:
        for i, x in enumerate(v):
            acc[i] += x
    return tuple(c / n for c in acc)


def build_relative_form(rs: RootSystem, action) -> RelativeForm:
    """Relative root system of the form defined by a diagram automorphism.

    ``action`` is a permutation of simple-root indices ('trivial'/'swap'
    accepted as labels) and must preserve the Cartan matrix.
    """
    rank = rs.rank
    if action == "trivial" or action is None:
        perm = tuple(range(rank))
    elif action == "swap":
        if rank != 2:
            raise ValueError("'swap' automorphism needs two simple roots")
        perm = (1, 0)
    else:
        perm = tuple(action)
        if sorted(perm) != list(range(rank)):
            raise ValueError(f"{action!r} is not a permutation of the simple roots")
    for i in range(rank):
        for j in range(rank):
            if rs.cartan[perm[i]][perm[j]] != rs.cartan[i][j]:
                raise ValueError("automorphism does not preserve the Dynkin diagram")

    # Galois orbits of absolute simple roots, ordered by least member.
    seen, orbits = set(), []
    for i in range(rank):
        if i in seen:
            continue
        orbit = {i}
        j = perm[i]
        while j not in orbit:
            orbit.add(j)
            j = perm[j]
        seen |= orbit
        orbits.append(tuple(sorted(orbit)))
    orbits = tuple(sorted(orbits))

    def restrict(alpha):
        return tuple(sum(alpha[i] for i in orbit) for orbit in orbits)

    rel_roots = tuple(sorted({restrict(alpha) for alpha in rs.roots}, key=lambda r: (sum(r), r)))
    rel_simple = tuple(
        tuple(1 if k == idx else 0 for k in range(len(orbits))) for idx in range(len(orbits))
    )
    stub = RelativeForm(rs, perm, rel_roots, rel_simple, orbits, ())
    rel_cartan = tuple(
        tuple(_int(stub._rel_coroot_pairing(rel_simple[j], rel_simple[i])) for j in range(len(orbits)))
        for i in range(len(orbits))
    )
    form = RelativeForm(rs, perm, rel_roots, rel_simple, orbits, rel_cartan)

    # Base of the relative system: restrictions of the absolute simples.
    base_set = {restrict(rs.simple_roots[i]) for i in range(rank)}
    if base_set != set(rel_simple):
        raise AssertionError("restriction of the absolute base is not the relative base")
    return form


def _int(x: Fraction) -> int:
    if x.denominator != 1:
        raise AssertionError(f"expected integer Cartan pairing, got {x}")
    return int(x)


def weyl_positive_systems(form: RelativeForm) -> list:
    """All positive systems, as frozensets: Weyl orbit of the base system."""
    base = frozenset(form.positive_roots())
    seen = {base}
    frontier = [base]
    simples = form.relative_simple
    while frontier:
        psi = frontier.pop()
        for a in simples:
            img = frozenset(form.reflect(r, a) for r in psi)
            if img not in seen:
                seen.add(img)
                frontier.append(img)
    return sorted(seen, key=sorted)


def is_positive_system(form: RelativeForm, psi) -> bool:
    """True iff psi is the set of roots nonnegative on some regular functional.

    Decided by closure: psi and -psi partition the roots and psi is closed
    under addition inside the root system; the Weyl-chamber enumeration
    (weyl_positive_systems) is the independent cross-check used in tests.
    """
    psi = frozenset(psi)
    roots = set(form.relative_roots)
    if not psi <= roots:
        raise ValueError("psi contains non-roots")
    neg = {tuple(-c for c in r) for r in psi}
    if psi & neg or (psi | neg) != roots:
        return False
    for a in psi:
        for b in psi:
            s = tuple(x + y for x, y in zip(a, b))
            if s in roots and s not in psi:
                return False
    return True
