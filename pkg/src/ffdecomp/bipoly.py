"""Bivariate polynomials over a finite field: curves, counting, factoring.

A polynomial is a sparse map from exponent pairs (i, j) to nonzero
coefficients, where i is the X-exponent and j the Y-exponent.  The module
covers what the decomposition machinery needs: building the curve
A(X)Q(Y) - B(X)P(Y) from two rational functions, counting its affine and
projective points exactly, and factoring via substitution Y -> X^D so that
the univariate machinery does the heavy lifting.
"""

from __future__ import annotations

import itertools

from . import limits
from .errors import SizeLimitError, SpecMismatchError, ValidationError
from .gf_core import (
    FieldElement,
    FieldEmbedding,
    FieldSpec,
    _same_spec,
    extend_field,
    prime_factors,
)
from .upoly import (
    Poly,
    RatFun,
    _coeff_str,
    factor,
    num_distinct_roots,
    require_nonconstant,
)

# Factoring enumerates sub-multisets of a univariate factorization, so both
# the curve degree and the number of candidate subsets need hard stops.
DEGREE_CAP = 24
_MAX_SUBSETS = 1 << 20


class BiPoly:
    __slots__ = ("spec", "terms")

    def __init__(self, spec: FieldSpec, terms: dict[tuple[int, int], FieldElement]):
        # private: callers go through from_terms and friends
        self.spec = spec
        self.terms = terms

    @classmethod
    def from_terms(cls, spec: FieldSpec, terms) -> "BiPoly":
        out: dict[tuple[int, int], FieldElement] = {}
        for (i, j), c in dict(terms).items():
            if i < 0 or j < 0:
                raise ValidationError("exponents must be nonnegative")
            c = spec.element(c)
            if c.is_zero():
                continue
            key = (int(i), int(j))
            if key in out:
                c = out[key] + c
                if c.is_zero():
                    del out[key]
                    continue
            out[key] = c
        return cls(spec, out)

    @classmethod
    def zero(cls, spec: FieldSpec) -> "BiPoly":
        return cls(spec, {})

    @classmethod
    def constant(cls, value: FieldElement) -> "BiPoly":
        return cls.from_terms(value.spec, {(0, 0): value})

    @classmethod
    def x(cls, spec: FieldSpec) -> "BiPoly":
        return cls(spec, {(1, 0): spec.one()})

    @classmethod
    def y(cls, spec: FieldSpec) -> "BiPoly":
        return cls(spec, {(0, 1): spec.one()})

    @classmethod
    def from_x_poly(cls, f: Poly) -> "BiPoly":
        return cls(f.spec, {(e, 0): c for e, c in enumerate(f.coeffs) if not c.is_zero()})

    @classmethod
    def from_y_poly(cls, f: Poly) -> "BiPoly":
        return cls(f.spec, {(0, e): c for e, c in enumerate(f.coeffs) if not c.is_zero()})

    @classmethod
    def from_y_coeffs(cls, coeffs: list[Poly]) -> "BiPoly":
        """Assemble sum_j coeffs[j](X) * Y^j."""
        if not coeffs:
            raise ValidationError("need at least one coefficient")
        spec = coeffs[0].spec
        terms: dict[tuple[int, int], FieldElement] = {}
        for j, cj in enumerate(coeffs):
            if not _same_spec(spec, cj.spec):
                raise SpecMismatchError("coefficients over different fields")
            for i, c in enumerate(cj.coeffs):
                if not c.is_zero():
                    terms[(i, j)] = c
        return cls(spec, terms)

    # -- structure -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(k == (0, 0) for k in self.terms)

    def deg_x(self) -> int:
        return max((i for i, _ in self.terms), default=-1)

    def deg_y(self) -> int:
        return max((j for _, j in self.terms), default=-1)

    def total_degree(self) -> int:
        return max((i + j for i, j in self.terms), default=-1)

    def coeff(self, i: int, j: int) -> FieldElement:
        return self.terms.get((i, j), self.spec.zero())

    def leading_key(self) -> tuple[int, int]:
        """Largest exponent pair in lexicographic (X-major) order."""
        if not self.terms:
            raise ValidationError("zero polynomial has no leading term")
        return max(self.terms)

    def index_key(self) -> tuple:
        """Deterministic sort key over the sparse terms."""
        return tuple(sorted((i, j, c.index) for (i, j), c in self.terms.items()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiPoly):
            return NotImplemented
        return _same_spec(self.spec, other.spec) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.spec.p, self.spec.modulus, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other) -> "BiPoly":
        if isinstance(other, BiPoly):
            if not _same_spec(self.spec, other.spec):
                raise SpecMismatchError("mixing polynomials over different fields")
            return other
        if isinstance(other, (FieldElement, int)):
            return BiPoly.constant(self.spec.element(other))
        raise TypeError(f"cannot combine BiPoly with {type(other).__name__}")

    def __add__(self, other) -> "BiPoly":
        other = self._coerce(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            s = terms.get(k, self.spec.zero()) + c
            if s.is_zero():
                terms.pop(k, None)
            else:
                terms[k] = s
        return BiPoly(self.spec, terms)

    __radd__ = __add__

    def __neg__(self) -> "BiPoly":
        return BiPoly(self.spec, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "BiPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "BiPoly":
        return (-self) + self._coerce(other)

    def __mul__(self, other) -> "BiPoly":
        if isinstance(other, (FieldElement, int)):
            c = self.spec.element(other)
            if c.is_zero():
                return BiPoly.zero(self.spec)
            return BiPoly(self.spec, {k: v * c for k, v in self.terms.items()})
        other = self._coerce(other)
        terms: dict[tuple[int, int], FieldElement] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                k = (i1 + i2, j1 + j2)
                prod = c1 * c2
                if k in terms:
                    s = terms[k] + prod
                    if s.is_zero():
                        del terms[k]
                    else:
                        terms[k] = s
                elif not prod.is_zero():
                    terms[k] = prod
        return BiPoly(self.spec, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BiPoly":
        if n < 0:
            raise ValidationError("negative power of a polynomial")
        result = BiPoly.constant(self.spec.one())
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- evaluation and views --------------------------------------------------

    def __call__(self, x: FieldElement, y: FieldElement):
        x = self.spec.element(x)
        y = self.spec.element(y)
        acc = self.spec.zero()
        for (i, j), c in self.terms.items():
            acc = acc + c * x**i * y**j
        return acc

    def specialize_x(self, x: FieldElement) -> Poly:
        """The univariate polynomial F(x, Y)."""
        x = self.spec.element(x)
        if not self.terms:
            return Poly.zero(self.spec)
        xpows = [self.spec.one()]
        for _ in range(self.deg_x()):
            xpows.append(xpows[-1] * x)
        out = [self.spec.zero()] * (self.deg_y() + 1)
        for (i, j), c in self.terms.items():
            out[j] = out[j] + c * xpows[i]
        return Poly.from_coeffs(self.spec, out)

    def specialize_y(self, y: FieldElement) -> Poly:
        return self.swap_vars().specialize_x(y)

    def as_y_coeffs(self) -> list[Poly]:
        """Coefficients c_j(X) with F = sum_j c_j(X) Y^j; empty for zero."""
        if not self.terms:
            return []
        rows: list[list[FieldElement]] = [
            [self.spec.zero()] * (self.deg_x() + 1) for _ in range(self.deg_y() + 1)
        ]
        for (i, j), c in self.terms.items():
            rows[j][i] = c
        return [Poly.from_coeffs(self.spec, row) for row in rows]

    def swap_vars(self) -> "BiPoly":
        return BiPoly(self.spec, {(j, i): c for (i, j), c in self.terms.items()})

    def top_form(self) -> "BiPoly":
        """Terms of maximal total degree (the highest homogeneous part)."""
        d = self.total_degree()
        return BiPoly(self.spec, {k: c for k, c in self.terms.items() if k[0] + k[1] == d})

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (i, j) in sorted(self.terms, reverse=True):
            c = self.terms[(i, j)]
            mono = "*".join(
                s
                for s in (
                    "X" if i == 1 else f"X^{i}" if i else "",
                    "Y" if j == 1 else f"Y^{j}" if j else "",
                )
                if s
            )
            if not mono:
                parts.append(_coeff_str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{_coeff_str(c)}*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += "+" + p
        return out

    def __repr__(self) -> str:
        return f"BiPoly({self.spec.descriptor}, {self})"


# --------------------------------------------------------------------------
# the curve attached to a pair of rational functions


def build_F(f: RatFun, g: RatFun) -> BiPoly:
    """The curve A(X)Q(Y) - B(X)P(Y) for f = A/B and g = P/Q.

    Its affine points are exactly the pairs (x, y) with f(x) = g(y) as
    values on the projective line, because both representations are reduced
    so numerator and denominator never vanish together.
    """
    if not _same_spec(f.spec, g.spec):
        raise SpecMismatchError("f and g must live over the same field")
    require_nonconstant(f, "f")
    require_nonconstant(g, "g")
    a = BiPoly.from_x_poly(f.num)
    b = BiPoly.from_x_poly(f.den)
    p = BiPoly.from_y_poly(g.num)
    q = BiPoly.from_y_poly(g.den)
    return a * q - b * p


# --------------------------------------------------------------------------
# exact point counts


def count_affine(F: BiPoly) -> int:
    """Number of (x, y) in F_q x F_q with F(x, y) = 0."""
    if F.is_zero():
        raise ValidationError("the zero polynomial does not define a curve")
    spec = F.spec
    limits.check_enumerable(spec.order, "affine point count")
    total = 0
    for x in spec.elements():
        u = F.specialize_x(x)
        if u.is_zero():
            total += spec.order
        else:
            total += num_distinct_roots(u)
    return total


def count_projective(F: BiPoly) -> int:
    """Points of the projectivized curve in P^2(F_q).

    Affine points (x : y : 1) are counted first; the points at infinity are
    the zeros (x : 1 : 0) of the top form with Y = 1, plus (1 : 0 : 0) when
    the coefficient of X^d vanishes (d the total degree).
    """
    if F.is_zero():
        raise ValidationError("the zero polynomial does not define a curve")
    if F.is_constant():
        return 0
    total = count_affine(F)
    d = F.total_degree()
    top = F.top_form()
    t_at_y1 = top.swap_vars().specialize_x(F.spec.one())  # T(X, 1) as poly in X
    if t_at_y1.is_zero():
        # top form divisible by ... impossible: top form is homogeneous and
        # nonzero, so T(X, 1) keeps every coefficient
        raise AssertionError("homogeneous top form cannot vanish at Y=1")
    total += num_distinct_roots(t_at_y1)
    if top.coeff(d, 0).is_zero():
        total += 1
    return total


# --------------------------------------------------------------------------
# factorization through the substitution Y -> X^D


def kronecker_image(F: BiPoly, D: int) -> Poly:
    """F(X, X^D) as a univariate polynomial."""
    if F.is_zero():
        return Poly.zero(F.spec)
    out = [F.spec.zero()] * (F.deg_x() + D * F.deg_y() + 1)
    for (i, j), c in F.terms.items():
        e = i + D * j
        out[e] = out[e] + c
    return Poly.from_coeffs(F.spec, out)


def kronecker_lift(u: Poly, D: int) -> BiPoly:
    """Split exponents e = i + D*j with i < D back into pairs (i, j)."""
    terms = {}
    for e, c in enumerate(u.coeffs):
        if not c.is_zero():
            terms[divmod(e, D)[::-1]] = c
    return BiPoly(u.spec, terms)


def exact_div(F: BiPoly, G: BiPoly):
    """Quotient F / G when G divides F exactly, else None.

    Repeated leading-term elimination in lexicographic order: if G divides
    F the leading term of every intermediate remainder is divisible by the
    leading term of G, so hitting a non-divisible leading term proves
    non-divisibility.
    """
    if G.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if F.is_zero():
        return BiPoly.zero(F.spec)
    (gi, gj) = G.leading_key()
    glc = G.terms[(gi, gj)]
    quot: dict[tuple[int, int], FieldElement] = {}
    rem = F
    while not rem.is_zero():
        (ri, rj) = rem.leading_key()
        if ri < gi or rj < gj:
            return None
        k = (ri - gi, rj - gj)
        c = rem.terms[(ri, rj)] / glc
        quot[k] = c
        rem = rem - G * BiPoly(F.spec, {k: c})
    return BiPoly(F.spec, quot)


def _normalized(G: BiPoly) -> tuple[FieldElement, BiPoly]:
    """Scale so the lexicographically first nonzero coefficient is one."""
    c = G.terms[min(G.terms)]
    return c, G * c.inverse()


def _submultisets_by_degree(facs: list[tuple[Poly, int]]):
    """All nonempty choices of multiplicities, ordered by product degree."""
    ranges = [range(m + 1) for _, m in facs]
    count = 1
    for r in ranges:
        count *= len(r)
    if count > _MAX_SUBSETS:
        raise SizeLimitError(
            f"factor recombination would test {count} subsets "
            f"(limit {_MAX_SUBSETS})"
        )
    degs = [p.degree for p, _ in facs]
    vectors = [
        v
        for v in itertools.product(*ranges)
        if any(v)
    ]
    vectors.sort(key=lambda v: (sum(m * d for m, d in zip(v, degs)), v))
    return vectors


def kronecker_factor(F: BiPoly) -> tuple[FieldElement, list[tuple[BiPoly, int]]]:
    """Factor into irreducibles over the coefficient field.

    Returns (unit, [(factor, multiplicity), ...]) with each factor scaled so
    its lexicographically first coefficient is one, sorted deterministically.  The
    substitution Y -> X^D with D = deg_X F + 1 is injective on the monomials
    of every divisor of F, so each bivariate factor corresponds to a
    sub-multiset of the univariate factorization of F(X, X^D); testing the
    sub-multisets in order of increasing product degree means the first one
    whose lift divides F is irreducible (a proper divisor of the lift would
    have shown up earlier).
    """
    if F.is_zero():
        raise ValidationError("cannot factor the zero polynomial")
    if F.is_constant():
        return F.coeff(0, 0), []
    if F.total_degree() > DEGREE_CAP:
        raise SizeLimitError(
            f"factoring degree {F.total_degree()} exceeds the cap {DEGREE_CAP}"
        )
    spec = F.spec
    D = F.deg_x() + 1
    _, ufacs = factor(kronecker_image(F, D))
    remaining = [[p, m] for p, m in ufacs]
    current = F
    found: list[tuple[BiPoly, int]] = []
    while not current.is_constant():
        facs = [(p, m) for p, m in remaining if m > 0]
        hit = None
        for v in _submultisets_by_degree(facs):
            prod = Poly.one(spec)
            for (p, _), mult in zip(facs, v):
                if mult:
                    prod = prod * p**mult
            cand = kronecker_lift(prod, D)
            if exact_div(current, cand) is not None:
                hit = (v, facs, cand)
                break
        if hit is None:
            raise AssertionError("the full sub-multiset always divides")
        v, facs, cand = hit
        _, g = _normalized(cand)
        mult = 0
        while True:
            quot = exact_div(current, g)
            if quot is None:
                break
            current = quot
            mult += 1
            for (p, _), used in zip(facs, v):
                if used:
                    for slot in remaining:
                        if slot[0] == p:
                            slot[1] -= used
                            assert slot[1] >= 0
                            break
        found.append((g, mult))
    unit = current.coeff(0, 0)
    found.sort(key=lambda fm: (fm[0].total_degree(), fm[0].index_key()))
    return unit, found


def map_coeffs(F: BiPoly, emb: FieldEmbedding) -> BiPoly:
    """Apply a field embedding to every coefficient."""
    if not _same_spec(F.spec, emb.source):
        raise SpecMismatchError("embedding source does not match the polynomial")
    return BiPoly(emb.target, {k: emb(c) for k, c in F.terms.items()})


def is_absolutely_irreducible(F: BiPoly) -> bool:
    """Irreducible over the coefficient field and every extension of it.

    A polynomial irreducible over F_q splits over the algebraic closure into
    a Galois orbit of s conjugate factors with s dividing the total degree,
    and it then splits over F_{q^r} for every prime r dividing s.  So it is
    enough to re-factor over F_{q^r} for the primes r dividing the degree.
    """
    if F.is_zero() or F.is_constant():
        raise ValidationError("constants are not curves")
    _, facs = kronecker_factor(F)
    if len(facs) != 1 or facs[0][1] != 1:
        return False
    for r in prime_factors(F.total_degree()):
        _, emb = extend_field(F.spec, r)
        _, efacs = kronecker_factor(map_coeffs(F, emb))
        if len(efacs) != 1 or efacs[0][1] != 1:
            return False
    return True
