"""Univariate polynomials and rational functions over a finite field.

Polynomials are dense coefficient tuples (constant term first, no trailing
zeros); rational functions are kept reduced with a monic denominator, which
makes structural equality the same as mathematical equality.  Evaluation is
over the projective line: a rational function takes values in F_q plus a
single point at infinity.
"""

from __future__ import annotations

import random
from typing import Union

from . import limits
from .errors import ConstantInputError, SpecMismatchError, ValidationError
from .gf_core import FieldElement, FieldSpec, _same_spec, prime_factors


class _Infinity:
    """The extra point of the projective line; compares equal only to itself."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "inf"


INFINITY = _Infinity()

PointOrInf = Union[FieldElement, _Infinity]


class Poly:
    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: FieldSpec, coeffs: tuple[FieldElement, ...]):
        # private: callers go through from_coeffs / from_ints
        self.spec = spec
        self.coeffs = coeffs

    @classmethod
    def from_coeffs(cls, spec: FieldSpec, coeffs) -> "Poly":
        cs = [spec.element(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        return cls(spec, tuple(cs))

    @classmethod
    def from_ints(cls, spec: FieldSpec, ints) -> "Poly":
        return cls.from_coeffs(spec, [spec.element(int(c)) for c in ints])

    @classmethod
    def zero(cls, spec: FieldSpec) -> "Poly":
        return cls(spec, ())

    @classmethod
    def one(cls, spec: FieldSpec) -> "Poly":
        return cls(spec, (spec.one(),))

    @classmethod
    def x(cls, spec: FieldSpec) -> "Poly":
        return cls(spec, (spec.zero(), spec.one()))

    @classmethod
    def constant(cls, value: FieldElement) -> "Poly":
        return cls.from_coeffs(value.spec, (value,))

    # -- structure -----------------------------------------------------------

    @property
    def degree(self) -> int:
        # -1 marks the zero polynomial (its true degree is minus infinity,
        # and -1 never collides with the degree of a nonzero polynomial)
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 1

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def lc(self) -> FieldElement:
        if not self.coeffs:
            raise ValidationError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return _same_spec(self.spec, other.spec) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.spec.p, tuple(c.coeffs for c in self.coeffs)))

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        return _poly_str(self)

    def index_key(self) -> tuple[int, ...]:
        """Deterministic sort key: coefficient indices, constant term first."""
        return tuple(c.index for c in self.coeffs)

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if not _same_spec(self.spec, other.spec):
                raise SpecMismatchError("mixing polynomials over different fields")
            return other
        if isinstance(other, (FieldElement, int)):
            return Poly.from_coeffs(self.spec, (self.spec.element(other),))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        while out and out[-1].is_zero():
            out.pop()
        return Poly(self.spec, tuple(out))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Poly(self.spec, tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (FieldElement, int)):
            c = self.spec.element(other)
            if c.is_zero():
                return Poly.zero(self.spec)
            return Poly(self.spec, tuple(a * c for a in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero(self.spec)
        zero = self.spec.zero()
        out = [zero] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if not ai.is_zero():
                for j, bj in enumerate(b):
                    out[i + j] = out[i + j] + ai * bj
        while out and out[-1].is_zero():
            out.pop()
        return Poly(self.spec, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValidationError("negative polynomial power")
        result = Poly.one(self.spec)
        acc = self
        while e:
            if e & 1:
                result = result * acc
            e >>= 1
            if e:
                acc = acc * acc
        return result

    def __divmod__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        spec = self.spec
        inv_lc = other.lc().inverse()
        r = list(self.coeffs)
        db = other.degree
        q = [spec.zero()] * max(0, len(r) - db)
        while len(r) - 1 >= db:
            c = r[-1] * inv_lc
            shift = len(r) - 1 - db
            q[shift] = c
            for i, bi in enumerate(other.coeffs):
                r[shift + i] = r[shift + i] - c * bi
            while r and r[-1].is_zero():
                r.pop()
        return Poly(spec, tuple(q)), Poly(spec, tuple(r))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        if self.is_zero() or self.lc() == 1:
            return self
        return self * self.lc().inverse()

    def derivative(self) -> "Poly":
        cs = [c * i for i, c in enumerate(self.coeffs)][1:]
        return Poly.from_coeffs(self.spec, cs)

    def __call__(self, x: FieldElement) -> FieldElement:
        acc = self.spec.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, other: "Poly") -> "Poly":
        acc = Poly.zero(self.spec)
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; gcd(a, 0) is the monic normalization of a."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_powmod(base: Poly, e: int, mod: Poly) -> Poly:
    if mod.is_constant():
        raise ValidationError("powmod modulus must be nonconstant")
    result = Poly.one(base.spec)
    acc = base % mod
    while e:
        if e & 1:
            result = result * acc % mod
        e >>= 1
        if e:
            acc = acc * acc % mod
    return result


# --------------------------------------------------------------------------
# factorization: squarefree split, then distinct degree, then equal degree.


def _pth_root(f: Poly) -> Poly:
    # f = g(X^p); the coefficient p-th root is Frobenius applied k-1 times
    spec = f.spec
    p, k = spec.p, spec.k
    e = p ** (k - 1)
    out = []
    for i in range(0, len(f.coeffs), p):
        out.append(f.coeffs[i] ** e)
    return Poly.from_coeffs(spec, out)


def _squarefree_parts(f: Poly) -> list[tuple[Poly, int]]:
    # monic f; returns pairwise coprime squarefree polys with multiplicities
    p = f.spec.p
    res: list[tuple[Poly, int]] = []
    df = f.derivative()
    if df.is_zero():
        for g, m in _squarefree_parts(_pth_root(f)):
            res.append((g, m * p))
        return res
    c = poly_gcd(f, df)
    w = f // c
    i = 1
    while not w.is_one():
        y = poly_gcd(w, c)
        z = w // y
        if not z.is_one():
            res.append((z, i))
        w = y
        c = c // y
        i += 1
    if not c.is_one():
        for g, m in _squarefree_parts(_pth_root(c)):
            res.append((g, m * p))
    return res


def _distinct_degree_parts(f: Poly) -> list[tuple[Poly, int]]:
    # monic squarefree f; returns (product of irreducibles of degree d, d)
    spec = f.spec
    q = spec.order
    x = Poly.x(spec)
    res = []
    v = f
    h = x
    d = 0
    while v.degree > 0:
        d += 1
        if 2 * d > v.degree:
            res.append((v, v.degree))
            break
        h = poly_powmod(h, q, v)
        g = poly_gcd(h - x, v)
        if g.degree > 0:
            res.append((g, d))
            v = v // g
            h = h % v
    return res


def _factor_seed(f: Poly, d: int) -> str:
    spec = f.spec
    parts = [str(spec.p), str(spec.k)]
    parts.extend(str(c) for c in spec.modulus)
    parts.append("|")
    parts.extend(str(c.index) for c in f.coeffs)
    parts.append(f"d{d}")
    return ":".join(parts)


def _random_poly(rng: random.Random, spec: FieldSpec, deg_below: int) -> Poly:
    q = spec.order
    cs = [spec.from_index(rng.randrange(q)) for _ in range(deg_below)]
    return Poly.from_coeffs(spec, cs)


def _equal_degree_parts(f: Poly, d: int) -> list[Poly]:
    # monic squarefree f, all irreducible factors of degree d
    spec = f.spec
    if f.degree == d:
        return [f]
    rng = random.Random(_factor_seed(f, d))
    q = spec.order
    out: list[Poly] = []
    stack = [f]
    while stack:
        g = stack.pop()
        if g.degree == d:
            out.append(g)
            continue
        for _ in range(256):
            a = _random_poly(rng, spec, g.degree)
            if a.is_constant():
                continue
            if spec.p == 2:
                t = a % g
                acc = t
                for _ in range(spec.k * d - 1):
                    t = t * t % g
                    acc = acc + t
                b = acc
            else:
                b = poly_powmod(a, (q**d - 1) // 2, g) - 1
            c = poly_gcd(b, g)
            if 0 < c.degree < g.degree:
                stack.append(c.monic())
                stack.append((g // c).monic())
                break
        else:  # pragma: no cover
            raise RuntimeError("equal-degree splitting failed to converge")
    out.sort(key=lambda h: h.index_key())
    return out


def factor(a: Poly) -> tuple[FieldElement, list[tuple[Poly, int]]]:
    """Full factorization into monic irreducibles with multiplicities.

    Returns (unit, factors) with factors sorted by (degree, coefficients),
    so the result is deterministic; the random splitting inside is seeded
    from the input's coefficients.
    """
    if a.is_zero():
        raise ValidationError("cannot factor the zero polynomial")
    unit = a.lc()
    if a.is_constant():
        return unit, []
    f = a.monic()
    found: list[tuple[Poly, int]] = []
    for g, mult in _squarefree_parts(f):
        for h, d in _distinct_degree_parts(g):
            for irr in _equal_degree_parts(h, d):
                found.append((irr, mult))
    found.sort(key=lambda fm: (fm[0].degree, fm[0].index_key()))
    return unit, found


def is_irreducible(f: Poly) -> bool:
    n = f.degree
    if n <= 0:
        return False
    if n == 1:
        return True
    spec = f.spec
    q = spec.order
    x = Poly.x(spec)
    if poly_powmod(x, q**n, f) != x % f:
        return False
    for r in prime_factors(n):
        g = poly_gcd(poly_powmod(x, q ** (n // r), f) - x, f)
        if g.degree != 0:
            return False
    return True


def roots(f: Poly) -> list[FieldElement]:
    """Distinct roots of f in the base field, sorted by coordinate index."""
    if f.is_zero():
        raise ValidationError("zero polynomial has every root")
    if f.is_constant():
        return []
    spec = f.spec
    x = Poly.x(spec)
    u = poly_gcd(poly_powmod(x, spec.order, f) - x, f)
    if u.degree == 0:
        return []
    linears = _equal_degree_parts(u.monic(), 1)
    rs = [-g.coeffs[0] for g in linears]
    rs.sort(key=lambda e: e.index)
    return rs


def num_distinct_roots(f: Poly) -> int:
    """Count of distinct roots in the base field without extracting them."""
    if f.is_zero():
        raise ValidationError("zero polynomial has every root")
    if f.is_constant():
        return 0
    if f.degree == 1:
        return 1
    spec = f.spec
    x = Poly.x(spec)
    return poly_gcd(poly_powmod(x, spec.order, f) - x, f).degree


# --------------------------------------------------------------------------
# rational functions


class RatFun:
    """Reduced rational function: gcd(num, den) = 1, den monic and nonzero."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly):
        # private: use make()
        self.num = num
        self.den = den

    @classmethod
    def make(cls, num: Poly, den: Poly) -> "RatFun":
        if not _same_spec(num.spec, den.spec):
            raise SpecMismatchError("numerator and denominator over different fields")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = poly_gcd(num, den)
        if g.degree > 0:
            num = num // g
            den = den // g
        c = den.lc().inverse()
        if c != 1:
            num = num * c
            den = den * c
        return cls(num, den)

    @classmethod
    def from_poly(cls, p: Poly) -> "RatFun":
        return cls(p, Poly.one(p.spec))

    @property
    def spec(self) -> FieldSpec:
        return self.den.spec

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree)

    def is_constant(self) -> bool:
        return self.degree <= 0

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatFun):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"RatFun({self})"

    def __str__(self) -> str:
        if self.den.is_one():
            return str(self.num)
        return f"{self.num} / {self.den}"

    def index_key(self) -> tuple:
        return (self.num.index_key(), self.den.index_key())

    def eval(self, x: PointOrInf) -> PointOrInf:
        """Value on the projective line; poles map to infinity."""
        if x is INFINITY:
            dn, dd = self.num.degree, self.den.degree
            if dn > dd:
                return INFINITY
            if dn < dd:
                return self.spec.zero()
            return self.num.lc() / self.den.lc()
        b = self.den(x)
        if b.is_zero():
            # reducedness guarantees the numerator does not vanish here
            return INFINITY
        a = self.num(x)
        if self.den.is_one():
            return a
        return a / b


def rat_compose(g: RatFun, h: RatFun) -> RatFun:
    """g(h(X)) as a reduced rational function.

    Degrees multiply whenever both inputs are nonconstant.  Raises if the
    composition is the constant infinity (h constant at a pole of g).
    """
    if not _same_spec(g.spec, h.spec):
        raise SpecMismatchError("composing rational functions over different fields")
    spec = g.spec
    delta = g.degree
    n_pows = [Poly.one(spec)]
    d_pows = [Poly.one(spec)]
    for _ in range(delta):
        n_pows.append(n_pows[-1] * h.num)
        d_pows.append(d_pows[-1] * h.den)
    num = Poly.zero(spec)
    den = Poly.zero(spec)
    for i, c in enumerate(g.num.coeffs):
        if not c.is_zero():
            num = num + n_pows[i] * d_pows[delta - i] * c
    for i, c in enumerate(g.den.coeffs):
        if not c.is_zero():
            den = den + n_pows[i] * d_pows[delta - i] * c
    if den.is_zero():
        raise ValidationError("composition is identically infinite")
    out = RatFun.make(num, den)
    if not g.is_constant() and not h.is_constant():
        assert out.degree == g.degree * h.degree
    return out


def fiber(g: RatFun, v: PointOrInf) -> set[FieldElement]:
    """{x in F_q : g(x) = v}, computed by root-finding."""
    spec = g.spec
    limits.check_enumerable(spec.order, "fiber computation")
    if v is INFINITY:
        u = g.den
    else:
        u = g.num - g.den * spec.element(v)
    if u.is_zero():
        # g is the constant v
        return set(spec.elements())
    return set(roots(u))


def require_nonconstant(f: RatFun, name: str) -> None:
    if f.is_constant():
        raise ConstantInputError(f"{name} must be nonconstant")


# --------------------------------------------------------------------------
# plain-text rendering (parsing lives in the cli-facing module)


def _coeff_str(c: FieldElement) -> str:
    if c.spec.k == 1:
        return str(c.coeffs[0])
    return "[" + ",".join(str(v) for v in c.coeffs) + "]"


def _poly_str(f: Poly, var: str = "X") -> str:
    if f.is_zero():
        return "0"
    parts = []
    for e in range(f.degree, -1, -1):
        c = f.coeffs[e]
        if c.is_zero():
            continue
        if e == 0:
            parts.append(_coeff_str(c))
        else:
            xs = var if e == 1 else f"{var}^{e}"
            if c == 1:
                parts.append(xs)
            else:
                parts.append(f"{_coeff_str(c)}*{xs}")
    return "+".join(parts)
