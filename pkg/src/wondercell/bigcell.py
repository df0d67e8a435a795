"""Concrete matrix models (split PGL_n and the SU3-quotient quasi-split form),
big-cell coordinates with the compactified torus slice, and the exact
lower-torus-upper factorization."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import inf

from wondercell.concave import ConcaveFn, Level
from wondercell.fieldarith import FieldConfig, FieldElem, H0Elem, PrecisionError, QuadExt, h0_random
from wondercell.filtration import ApartmentPoint, filtration_contains, gamma_set
from wondercell.matrices import Mat
from wondercell.rootdata import RelativeForm, build_relative_form, build_root_system

Q = Fraction
INF = inf


class FactorFailure(Exception):
    """Big-cell factorization failed: a leading minor vanishes exactly."""

    def __init__(self, minor_index: int, message: str | None = None):
        self.minor_index = minor_index
        super().__init__(message or f"leading {minor_index}x{minor_index} minor vanishes")


def neg(a: tuple) -> tuple:
    return tuple(-c for c in a)


# ---------------------------------------------------------------------------
# Split model: PGL_n for n = 2, 3, 4 (types A1, A2, A3)
# ---------------------------------------------------------------------------


class SplitModel:
    """PGL_n with the standard pinning chi_a(u) = 1 + u E_ij (positive a) and
    chi_{-a}(u) = 1 - u E_ji; matrices are compared modulo scalars."""

    kind = "split"

    def __init__(self, n: int, config: FieldConfig):
        if not 2 <= n <= 4:
            raise ValueError("split models cover PGL_2..PGL_4")
        if config.ramification != 1:
            raise ValueError("split model needs an unramified configuration")
        self.n = n
        self.config = config
        self.form = build_relative_form(build_root_system(f"A{n - 1}"), "trivial")
        # positive root sum(alpha_i..alpha_{j-1}) <-> matrix slot (i, j)
        self._slot = {}
        for i in range(n):
            for j in range(i + 1, n):
                root = tuple(1 if i <= k < j else 0 for k in range(n - 1))
                self._slot[root] = (i, j)
        self.pos_reduced = tuple(sorted(self._slot, key=lambda r: (sum(r), r)))

    # -- pinning --

    def chi(self, a: tuple, param: FieldElem) -> Mat:
        """Root-group element for a signed reduced root."""
        positive = any(c > 0 for c in a)
        slot_root = a if positive else neg(a)
        i, j = self._slot[slot_root]
        m = Mat.identity(self.config, self.n)
        if positive:
            m.rows[i][j] = self.config.elem(param)
        else:
            m.rows[j][i] = -self.config.elem(param)
        return m

    def param_at(self, m: Mat, a: tuple, positive: bool) -> FieldElem:
        """Read the parameter of a positive reduced root from a unipotent
        matrix on the requested side."""
        i, j = self._slot[a]
        return m[i, j] if positive else -m[j, i]

    def torus(self, diag) -> Mat:
        entries = [self.config.elem(d) for d in diag]
        if len(entries) == self.n - 1:
            entries.append(self.config.one())
        m = Mat.identity(self.config, self.n)
        for i, d in enumerate(entries):
            m.rows[i][i] = d
        return m

    def cochar(self, i: int, k: int) -> Mat:
        """alpha_i^vee(t^k) as a torus matrix."""
        diag = [self.config.one() for _ in range(self.n)]
        diag[i] = self.config.t(k)
        diag[i + 1] = self.config.t(-k)
        return self.torus(diag)

    def nu(self, torus: Mat) -> dict:
        """T-bar coordinates alpha |-> alpha(t)^{-1} = d_{i+1}/d_i."""
        out = {}
        for idx, alpha in enumerate(self.form.relative_simple):
            out[alpha] = torus[idx + 1, idx + 1] * torus[idx, idx].inv()
        return out

    def m_monomial(self, t_bar: dict, a: tuple) -> FieldElem:
        """The t-bar monomial attached to the positive root a (the value of the
        extended multiplication map at the negative lift)."""
        out = self.config.one()
        for alpha, c in zip(self.form.relative_simple, a):
            for _ in range(c):
                out = out * t_bar[alpha]
        return out

    def slice_pass_upper(self, u: Mat, t_bar: dict) -> Mat:
        """chi_word * [t-bar] = [t-bar] * (this); integral monomial multipliers."""
        simples = self.form.relative_simple

        def mult(i, j, x):
            if i >= j or x.is_zero():
                return x
            for l in range(i, j):
                x = x * t_bar[simples[l]]
            return x

        return u.map(mult)

    def slice_pass_lower(self, l: Mat, t_bar: dict) -> Mat:
        """[t-bar] * chi_word = (this) * [t-bar]."""
        simples = self.form.relative_simple

        def mult(i, j, x):
            if i <= j or x.is_zero():
                return x
            for k in range(j, i):
                x = x * t_bar[simples[k]]
            return x

        return l.map(mult)

    def coroot_fold(self, a: tuple, s: FieldElem, t_bar: dict) -> dict:
        """Fold the torus correction along the coroot of a into T-bar coordinates:
        each coordinate picks up s^{-<alpha, a^vee>}."""
        out = dict(t_bar)
        s_inv = None
        for alpha in self.form.relative_simple:
            k = self.form.cartan_pairing(alpha, a)
            if k > 0:
                if s_inv is None:
                    s_inv = s.inv()
                for _ in range(k):
                    out[alpha] = out[alpha] * s_inv
            else:
                for _ in range(-k):
                    out[alpha] = out[alpha] * s
        return out

    def factor(self, g: Mat):
        """g = L * T * U with L/U unit-triangular, T diagonal; exact Doolittle."""
        n = self.n
        a = [[x for x in row] for row in g.rows]
        L = Mat.identity(self.config, n)
        U = Mat.identity(self.config, n)
        diag = []
        for k in range(n):
            piv = a[k][k]
            if piv.is_zero():
                # decide exactly on the original matrix: its minors need no division
                witness = g.leading_minor(k + 1)
                if witness.is_zero() and witness.is_exact():
                    raise FactorFailure(k + 1)
                raise PrecisionError(f"leading minor {k + 1} is zero to precision")
            inv = piv.inv()
            for i in range(k + 1, n):
                L.rows[i][k] = a[i][k] * inv
            for j in range(k + 1, n):
                U.rows[k][j] = a[k][j] * inv
            diag.append(piv)
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = a[i][j] - a[i][k] * inv * a[k][j]
        return L, self.torus(diag), U

    def word(self, params: dict, positive: bool, order=None) -> Mat:
        order = order or self.pos_reduced
        m = Mat.identity(self.config, self.n)
        for a in order:
            m = m * self.chi(a if positive else neg(a), params[a])
        return m

    def extract_word(self, m: Mat, positive: bool, order=None) -> dict:
        """Parameters of a unipotent matrix as a product in the given root order
        (fixpoint over the height filtration; exact)."""
        order = order or self.pos_reduced
        params = {a: self.param_at(m, a, positive) for a in order}
        for _ in range(6):
            built = self.word(params, positive, order)
            if built == m:
                return params
            defect = built.inv() * m
            for a in order:
                params[a] = params[a] + self.param_at(defect, a, positive)
        raise AssertionError("unipotent word extraction did not converge")

    def random_unit(self, rng) -> FieldElem:
        lead = rng.randrange(1, self.config.residue_char) if self.config.residue_char else rng.choice([1, 2, -1, 3])
        x = self.config.random_integral(rng, max_exp=2).shift(1)
        return self.config.elem(lead) + x

    def su_check(self, m: Mat) -> bool:  # uniform interface; no constraint mod center
        return True


# ---------------------------------------------------------------------------
# Quasi-split model: SU3 matrices modulo center (relative type BC1)
# ---------------------------------------------------------------------------


class UnitaryModel:
    """The rank-one quasi-split form: SU3 of the hermitian form
    sigma(x_{-1}) x_1 + sigma(x_0) x_0 + sigma(x_1) x_{-1} over the ramified
    quadratic extension, taken modulo its (trivial at our fields) center."""

    kind = "unitary"
    n = 3

    def __init__(self, ext: QuadExt):
        self.ext = ext
        self.config = ext.ext
        self.form = build_relative_form(build_root_system("A2"), "swap")
        self.pos_reduced = ((1,),)
        self.simple = (1,)

    # -- pinning --

    def chi(self, a: tuple, param: H0Elem) -> Mat:
        sg = self.ext.sigma
        u, v = param.u, param.v
        one, zero = self.config.one(), self.config.zero()
        if a == (1,):
            return Mat(self.config, [[one, -sg(u), -v], [zero, one, u], [zero, zero, one]])
        if a == (-1,):
            return Mat(self.config, [[one, zero, zero], [sg(u), one, zero], [-v, -u, one]])
        raise ValueError(f"{a} is not a reduced root of the unitary model")

    def torus(self, s: FieldElem) -> Mat:
        sg = self.ext.sigma
        zero = self.config.zero()
        s = self.config.elem(s)
        return Mat(
            self.config,
            [[s, zero, zero], [zero, sg(s) * s.inv(), zero], [zero, zero, sg(s).inv()]],
        )

    def cochar(self, i: int, k: int) -> Mat:
        return self.torus(self.config.t(k))

    def nu(self, torus: Mat) -> dict:
        s = torus[0, 0]
        sg = self.ext.sigma
        return {self.simple: s * (sg(s) * sg(s)).inv()}

    def m_monomial(self, t_bar: dict, a: tuple) -> FieldElem:
        tb = t_bar[self.simple]
        c = a[0]
        if c == 1:
            return tb
        if c == 2:
            return tb * self.ext.sigma(tb)
        raise ValueError(f"{a} is not a positive relative root")

    def _multipliers(self, t_bar: dict):
        """Integral monomial picked up when crossing the torus slice: entry
        (i, j) of an upper word (left to right) or (j, i) of a lower word
        (right to left) multiplies by this."""
        tb = t_bar[self.simple]
        sg = self.ext.sigma(tb)
        return {(0, 1): sg, (0, 2): tb * sg, (1, 2): tb}

    def slice_pass_upper(self, u: Mat, t_bar: dict) -> Mat:
        mult = self._multipliers(t_bar)
        return u.map(lambda i, j, x: x * mult[(i, j)] if i < j else x)

    def slice_pass_lower(self, l: Mat, t_bar: dict) -> Mat:
        mult = self._multipliers(t_bar)
        return l.map(lambda i, j, x: x * mult[(j, i)] if i > j else x)

    def coroot_fold(self, a: tuple, s: FieldElem, t_bar: dict) -> dict:
        sg = self.ext.sigma
        return {self.simple: t_bar[self.simple] * s * sg(s * s).inv()}

    def factor(self, g: Mat):
        h = g[0, 0]
        if h.is_zero():
            if h.is_exact():
                raise FactorFailure(1)
            raise PrecisionError("leading entry is zero to precision")
        sg = self.ext.sigma
        h_inv = h.inv()
        A = sg(g[1, 0] * h_inv)
        B = -g[2, 0] * h_inv
        C = -sg(g[0, 1] * h_inv)
        D = -g[0, 2] * h_inv
        lower = self.chi((-1,), H0Elem(self.ext, A, B))
        upper = self.chi((1,), H0Elem(self.ext, C, D))
        torus = self.torus(h)
        if not (lower * torus * upper) == g:
            raise AssertionError("unitary big-cell factorization is inconsistent")
        return lower, torus, upper

    def param_at(self, m: Mat, a: tuple, positive: bool) -> H0Elem:
        sg = self.ext.sigma
        if positive:
            return H0Elem(self.ext, m[1, 2], -m[0, 2])
        return H0Elem(self.ext, -m[2, 1], -m[2, 0])

    def word(self, params: dict, positive: bool, order=None) -> Mat:
        a = (1,) if positive else (-1,)
        return self.chi(a, params[(1,)])

    def extract_word(self, m: Mat, positive: bool, order=None) -> dict:
        p = self.param_at(m, (1,), positive)
        if not self.word({(1,): p}, positive) == m:
            raise AssertionError("matrix is not a root-group element")
        return {(1,): p}

    def random_unit(self, rng) -> FieldElem:
        lead = rng.randrange(1, self.config.residue_char) if self.config.residue_char else rng.choice([1, 2, -1])
        return self.config.elem(lead) + self.config.random_integral(rng, max_exp=2).shift(Q(1, 2))

    def su_check(self, m: Mat) -> bool:
        """sigma-conjugate-transpose against the antidiagonal Gram matrix."""
        sg = self.ext.sigma
        j = Mat(self.config, [[0, 0, 1], [0, 1, 0], [1, 0, 0]])
        star = Mat(self.config, [[sg(m[j2, i2]) for j2 in range(3)] for i2 in range(3)])
        return (star * j * m) == j and m.det() == self.config.one()


# ---------------------------------------------------------------------------
# Big-cell points
# ---------------------------------------------------------------------------


@dataclass
class BigCellPoint:
    """Coordinates (u^-, t-bar, u^+): parameters for the reduced negative and
    positive root groups, and one compactified torus coordinate per simple root."""

    model: object
    u_minus: dict
    t_bar: dict
    u_plus: dict

    def lower_matrix(self, order=None) -> Mat:
        return self.model.word(self.u_minus, positive=False, order=order)

    def upper_matrix(self, order=None) -> Mat:
        return self.model.word(self.u_plus, positive=True, order=order)

    def tbar_list(self):
        return [self.t_bar[alpha] for alpha in self.model.form.relative_simple]

    def __eq__(self, other):
        if not isinstance(other, BigCellPoint):
            return NotImplemented
        return (
            all(self.u_minus[a] == other.u_minus[a] for a in self.model.pos_reduced)
            and all(self.u_plus[a] == other.u_plus[a] for a in self.model.pos_reduced)
            and all(x == y for x, y in zip(self.tbar_list(), other.tbar_list()))
        )

    def __repr__(self):
        um = {a: str(p) for a, p in self.u_minus.items()}
        up = {a: str(p) for a, p in self.u_plus.items()}
        tb = [str(x) for x in self.tbar_list()]
        return f"BigCellPoint(u-={um}, t-bar={tb}, u+={up})"


def identity_point(model) -> BigCellPoint:
    zero = _zero_param(model)
    return BigCellPoint(
        model,
        {a: zero for a in model.pos_reduced},
        {alpha: model.config.one() for alpha in model.form.relative_simple},
        {a: zero for a in model.pos_reduced},
    )


def _zero_param(model):
    if model.kind == "unitary":
        return H0Elem(model.ext, model.config.zero(), model.config.zero())
    return model.config.zero()


def nu_bar(model, torus: Mat) -> dict:
    """T-bar coordinates of a torus element: alpha |-> alpha(t)^{-1}."""
    return model.nu(torus)


def m_alpha(model, t_bar: dict, alpha_abs: tuple) -> FieldElem:
    """Value of the extended torus-multiplication morphism on an absolute
    nonpositive root alpha = sum n_i (-alpha~_i), as a packaged field element."""
    if any(c > 0 for c in alpha_abs):
        raise ValueError("alpha must be a nonpositive combination of absolute simples")
    coords = tuple(-c for c in alpha_abs)
    if model.kind == "split":
        return model.m_monomial(t_bar, coords)
    # unitary: components (sigma(t-bar), t-bar) for the two absolute simples
    tb = t_bar[model.simple]
    out = model.config.one()
    factors = (model.ext.sigma(tb), tb)
    for c, f in zip(coords, factors):
        for _ in range(c):
            out = out * f
    return out


def factor_big_cell(model, g: Mat) -> BigCellPoint:
    """Factor a group element through the big cell; FactorFailure carries the
    index of the vanishing leading minor."""
    lower, torus, upper = model.factor(g)
    return BigCellPoint(
        model,
        model.extract_word(lower, positive=False),
        model.nu(torus),
        model.extract_word(upper, positive=True),
    )


def point_matrix(point: BigCellPoint) -> Mat:
    """The group element of an interior point (all torus coordinates units)."""
    model = point.model
    if model.kind == "split":
        simples = model.form.relative_simple
        diag = []
        for i in range(model.n):
            d = model.config.one()
            for l in range(i, model.n - 1):
                d = d * point.t_bar[simples[l]]
            diag.append(d)
        torus = model.torus(diag)
    else:
        raise ValueError("unitary torus coordinates do not lift canonically; build the matrix directly")
    return point.lower_matrix() * torus * point.upper_matrix()


def membership(
    point: BigCellPoint,
    x: ApartmentPoint,
    f: ConcaveFn,
    which: str = "omega_bar",
    mu: Fraction = Q(0),
) -> bool:
    """Integral membership of a big-cell point: every root parameter passes the
    level-f filtration and the torus coordinates satisfy the integrality
    (omega_bar) or congruence/unit (omega) condition."""
    if which not in ("omega", "omega_bar"):
        raise ValueError("which must be 'omega' or 'omega_bar'")
    model = point.model
    for a in model.pos_reduced:
        if not filtration_contains(x, f, neg(a), point.u_minus[a], mu=mu):
            return False
        if not filtration_contains(x, f, a, point.u_plus[a], mu=mu):
            return False
    f0 = f.at_zero
    for alpha in model.form.relative_simple:
        tb = point.t_bar[alpha]
        e = model.form.ramification_index(alpha)
        if f0.value == 0 and not f0.plus:
            if which == "omega":
                if not tb.is_unit():
                    return False
            elif not tb.val_ge(0):
                return False
        else:
            bound = Q(_level_ceil(f0, e), e)
            if not (tb - model.config.one()).val_ge(bound):
                return False
    return True


def _level_ceil(level: Level, e: int) -> int:
    """Smallest integer m with m >= e*r (strictly greater for a plus level)."""
    from math import ceil, floor

    q = level.value * e
    if level.plus and q.denominator == 1:
        return int(q) + 1
    return ceil(q)


def random_level_param(model, x: ApartmentPoint, f: ConcaveFn, a: tuple, rng, mu=Q(0)):
    """Seeded random parameter passing the level-f filtration at the root a."""
    from math import ceil

    form = model.form
    if form.is_multipliable(a):
        two_a = tuple(2 * c for c in a)
        gamma = -mu / 2
        u_thr = _lattice_up(f(a), Q(1, 2), gamma - x.pairing(a))
        v_thr = _lattice_up(f(two_a), Q(1, 2), mu - x.pairing(two_a))
        # the even part of v is forced to be N(u)/2, so omega(u) must also
        # clear half the v-threshold
        u_min = max(u_thr, Q(ceil(v_thr), 2))
        h = h0_random(model.ext, rng, max_exp=2, min_val=u_min)
        # pad v with a trace-zero term on the half-odd lattice above the threshold
        odd_exp = Q(ceil(v_thr - Q(1, 2))) + Q(1, 2)
        c = rng.randrange(model.config.residue_char) if model.config.residue_char else Q(rng.randrange(-3, 4))
        pad = model.config.t(odd_exp) * model.config.elem(c)
        return H0Elem(model.ext, h.u, h.v + pad)
    level = f(a)
    e = form.ramification_index(a)
    corr = (mu if form.is_divisible(a) else Q(0)) - x.pairing(a)
    thr = _lattice_up(level, Q(1, e), corr)
    return model.config.random_integral(rng, max_exp=3).shift(thr)


def _lattice_up(level: Level, step: Fraction, correction: Fraction) -> Fraction:
    """Least lattice element meeting the (possibly strict) level + correction."""
    if level.is_infinite():
        raise ValueError("cannot sample at an infinite level")
    from math import ceil, floor

    r = level.value + correction
    q = r / step
    k = floor(q) + 1 if (level.plus and q.denominator == 1) else ceil(q)
    return k * step


def random_parahoric(model, x: ApartmentPoint, f: ConcaveFn, rng, mu=Q(0)) -> Mat:
    """Seeded random element of the integral model: u^- t u^+ at level f."""
    lower = Mat.identity(model.config, model.n)
    upper = Mat.identity(model.config, model.n)
    for a in model.pos_reduced:
        lower = lower * model.chi(neg(a), random_level_param(model, x, f, neg(a), rng, mu))
        upper = upper * model.chi(a, random_level_param(model, x, f, a, rng, mu))
    f0 = f.at_zero
    if model.kind == "split":
        diag = []
        for i in range(model.n - 1):
            u = model.random_unit(rng)
            if f0.value > 0 or f0.plus:
                m = _level_ceil(f0, 1)
                u = model.config.one() + model.config.random_integral(rng, max_exp=2).shift(m)
            diag.append(u)
        torus = model.torus(diag + [model.config.one()])
    else:
        u = model.random_unit(rng)
        if f0.value > 0 or f0.plus:
            m = _level_ceil(f0, 2)
            u = model.config.one() + model.config.random_integral(rng, max_exp=2).shift(Q(m, 2))
        torus = model.torus(u)
    return lower * torus * upper
