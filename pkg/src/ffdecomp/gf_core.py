"""Finite fields F_{p^k} with exact coordinate arithmetic.

A field is realized as F_p[X]/(m(X)) for a deterministically chosen monic
irreducible m (the lexicographically smallest one, reading the coefficient
tuple from the constant term up).  Elements are length-k coordinate vectors
over the power basis, so equal inputs always produce equal outputs and
nothing here depends on process state.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Union

from . import limits
from .errors import SpecMismatchError, ValidationError

# --------------------------------------------------------------------------
# integer helpers

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far past any enumerable field size."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n == b:
            return True
        if n % b == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for b in _MR_BASES:
        x = pow(b, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime divisors of n, ascending."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# --------------------------------------------------------------------------
# dense F_p[X] arithmetic on plain int lists (constant term first).
# Only used to build and validate moduli and for element inversion.


def _ptrim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _ptrim([c % p for c in out])


def _psub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [0] * n
    for i, ai in enumerate(a):
        out[i] = ai
    for i, bi in enumerate(b):
        out[i] = (out[i] - bi) % p
    return _ptrim(out)


def _pdivmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lc = pow(b[-1], p - 2, p)
    r = [c % p for c in a]
    _ptrim(r)
    q = [0] * max(0, len(r) - len(b) + 1)
    while len(r) >= len(b):
        c = r[-1] * inv_lc % p
        shift = len(r) - len(b)
        q[shift] = c
        for i, bi in enumerate(b):
            r[shift + i] = (r[shift + i] - c * bi) % p
        _ptrim(r)
    return _ptrim(q), r


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def _pxgcd(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    """Return (g, u) with u*a = g mod b, g the monic gcd."""
    r0, r1 = [c % p for c in a], [c % p for c in b]
    _ptrim(r0), _ptrim(r1)
    s0, s1 = [1], []
    while r1:
        q, r = _pdivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1, p), p)
    if r0:
        inv = pow(r0[-1], p - 2, p)
        r0 = [c * inv % p for c in r0]
        s0 = [c * inv % p for c in s0]
    return r0, s0


def _ppowmod(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    acc = _pdivmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = _pdivmod(_pmul(result, acc, p), mod, p)[1]
        e >>= 1
        if e:
            acc = _pdivmod(_pmul(acc, acc, p), mod, p)[1]
    return result


def _is_irreducible_mod_p(f: list[int], p: int) -> bool:
    # f irreducible of degree k over F_p  iff  X^{p^k} = X mod f and
    # gcd(X^{p^{k/r}} - X, f) = 1 for every prime r | k.
    k = len(f) - 1
    if k < 1:
        return False
    x = [0, 1]
    if _ppowmod(x, p**k, f, p) != _pdivmod(x, f, p)[1]:
        return False
    for r in prime_factors(k):
        h = _psub(_ppowmod(x, p ** (k // r), f, p), _pdivmod(x, f, p)[1], p)
        g = _pgcd(h, f, p)
        if len(g) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def _lex_smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    # Coefficient tuples (c_0, ..., c_{k-1}, 1) in lexicographic order with
    # the constant term most significant.
    for j in range(p**k):
        digits = []
        t = j
        for pos in range(k - 1, -1, -1):
            digits.append(t // p**pos)
            t %= p**pos
        if digits[0] == 0 and k > 1:
            continue  # divisible by X
        f = digits + [1]
        if _is_irreducible_mod_p(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


# --------------------------------------------------------------------------


class FieldSpec:
    """Description of F_{p^k}: characteristic, degree, and modulus."""

    __slots__ = ("p", "k", "order", "modulus", "_red", "_elems")

    def __init__(self, p: int, k: int, modulus: tuple[int, ...]):
        self.p = p
        self.k = k
        self.order = p**k
        self.modulus = modulus
        self._red = modulus[:k]  # X^k = -sum(red[i] X^i) mod m
        self._elems: list[FieldElement] | None = None

    @property
    def descriptor(self) -> str:
        return str(self.p) if self.k == 1 else f"{self.p}^{self.k}"

    def __repr__(self) -> str:
        return f"GF({self.descriptor})"

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return (
            isinstance(other, FieldSpec)
            and self.p == other.p
            and self.modulus == other.modulus
        )

    def __hash__(self) -> int:
        return hash((self.p, self.modulus))

    # -- element constructors ------------------------------------------------

    def zero(self) -> "FieldElement":
        return FieldElement(self, (0,) * self.k)

    def one(self) -> "FieldElement":
        return FieldElement(self, (1,) + (0,) * (self.k - 1))

    def element(self, value: Union[int, Iterable[int], "FieldElement"]) -> "FieldElement":
        if isinstance(value, FieldElement):
            if not _same_spec(value.spec, self):
                raise SpecMismatchError(f"element of {value.spec!r} used in {self!r}")
            return value
        if isinstance(value, int):
            coeffs = (value % self.p,) + (0,) * (self.k - 1)
            return FieldElement(self, coeffs)
        coeffs = tuple(int(c) % self.p for c in value)
        if len(coeffs) != self.k:
            raise ValidationError(
                f"expected {self.k} coordinates for {self!r}, got {len(coeffs)}"
            )
        return FieldElement(self, coeffs)

    def from_index(self, i: int) -> "FieldElement":
        if not 0 <= i < self.order:
            raise ValidationError(f"index {i} out of range for {self!r}")
        coeffs = []
        for _ in range(self.k):
            i, c = divmod(i, self.p)
            coeffs.append(c)
        return FieldElement(self, tuple(coeffs))

    def elements(self) -> list["FieldElement"]:
        """All field elements in coordinate order (constant coordinate fastest)."""
        limits.check_enumerable(self.order, f"enumerating {self!r}")
        if self._elems is not None:
            return self._elems
        elems = [self.from_index(i) for i in range(self.order)]
        if self.order <= 1 << 16:
            self._elems = elems
        return elems

    # -- coordinate arithmetic -----------------------------------------------

    def _mul_coeffs(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        p, k = self.p, self.k
        if k == 1:
            return (a[0] * b[0] % p,)
        conv = [0] * (2 * k - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    conv[i + j] += ai * bj
        red = self._red
        for i in range(2 * k - 2, k - 1, -1):
            c = conv[i] % p
            if c:
                base = i - k
                for j, rj in enumerate(red):
                    if rj:
                        conv[base + j] -= c * rj
        return tuple(c % p for c in conv[:k])

    def _inv_coeffs(self, a: tuple[int, ...]) -> tuple[int, ...]:
        p, k = self.p, self.k
        if not any(a):
            raise ZeroDivisionError(f"inversion of zero in {self!r}")
        if k == 1:
            return (pow(a[0], p - 2, p),)
        g, u = _pxgcd(list(a), list(self.modulus), p)
        assert g == [1]
        u = u + [0] * (k - len(u))
        return tuple(u[:k])


def _same_spec(a: FieldSpec, b: FieldSpec) -> bool:
    return a is b or (a.p == b.p and a.modulus == b.modulus)


class FieldElement:
    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: FieldSpec, coeffs: tuple[int, ...]):
        self.spec = spec
        self.coeffs = coeffs

    # -- structure -----------------------------------------------------------

    @property
    def index(self) -> int:
        i = 0
        for c in reversed(self.coeffs):
            i = i * self.spec.p + c
        return i

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return _same_spec(self.spec, other.spec) and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == self.spec.element(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.spec.p, self.coeffs))

    def __repr__(self) -> str:
        if self.spec.k == 1:
            return str(self.coeffs[0])
        return "[" + ",".join(str(c) for c in self.coeffs) + "]"

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if not _same_spec(self.spec, other.spec):
                raise SpecMismatchError(
                    f"mixing elements of {self.spec!r} and {other.spec!r}"
                )
            return other
        if isinstance(other, int):
            return self.spec.element(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.spec.p
        return FieldElement(
            self.spec, tuple((x + y) % p for x, y in zip(self.coeffs, other.coeffs))
        )

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.spec.p
        return FieldElement(
            self.spec, tuple((x - y) % p for x, y in zip(self.coeffs, other.coeffs))
        )

    def __rsub__(self, other):
        return self.spec.element(other) - self

    def __neg__(self):
        p = self.spec.p
        return FieldElement(self.spec, tuple((-x) % p for x in self.coeffs))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.spec, self.spec._mul_coeffs(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.spec.element(other) / self

    def inverse(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec._inv_coeffs(self.coeffs))

    def __pow__(self, e: int) -> "FieldElement":
        if e < 0:
            return self.inverse() ** (-e)
        result = self.spec.one()
        acc = self
        while e:
            if e & 1:
                result = result * acc
            e >>= 1
            if e:
                acc = acc * acc
        return result

    def frobenius(self) -> "FieldElement":
        return self ** self.spec.p


# --------------------------------------------------------------------------


def build_field(p: int, k: int = 1, modulus: tuple[int, ...] | None = None) -> FieldSpec:
    """Construct F_{p^k}.

    Without an explicit modulus the lexicographically smallest monic
    irreducible of degree k is used, so repeated calls agree.
    """
    if not isinstance(p, int) or not is_prime(p):
        raise ValidationError(f"characteristic {p!r} is not prime")
    if not isinstance(k, int) or k < 1:
        raise ValidationError(f"extension degree {k!r} must be a positive integer")
    limits.check_enumerable(p**k, f"field of order {p}^{k}")
    if modulus is None:
        modulus = _lex_smallest_irreducible(p, k)
    else:
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise ValidationError("modulus must be monic of degree k")
        if not _is_irreducible_mod_p(list(modulus), p):
            raise ValidationError("modulus is reducible")
    return FieldSpec(p, k, modulus)


class FieldEmbedding:
    """Ring homomorphism F_{p^k} -> F_{p^{k r}} fixing the prime field."""

    __slots__ = ("source", "target", "powers")

    def __init__(self, source: FieldSpec, target: FieldSpec, powers: list[FieldElement]):
        self.source = source
        self.target = target
        self.powers = powers  # images of 1, x, ..., x^{k-1}

    def __call__(self, a: FieldElement) -> FieldElement:
        if not _same_spec(a.spec, self.source):
            raise SpecMismatchError(f"element of {a.spec!r} fed to embedding of {self.source!r}")
        acc = self.target.zero()
        for c, w in zip(a.coeffs, self.powers):
            if c:
                acc = acc + w * c
        return acc


def extend_field(spec: FieldSpec, r: int) -> tuple[FieldSpec, FieldEmbedding]:
    """Build F_{q^r} together with the embedding F_q -> F_{q^r}.

    The embedding sends the generator of F_q to the smallest root (in
    coordinate order) of the source modulus inside the extension, which makes
    it reproducible.
    """
    if not isinstance(r, int) or r < 1:
        raise ValidationError(f"extension exponent {r!r} must be a positive integer")
    if r == 1:
        powers = [spec.from_index(spec.p**i) for i in range(spec.k)]
        return spec, FieldEmbedding(spec, spec, powers)
    target = build_field(spec.p, spec.k * r)
    from . import upoly  # deferred: upoly builds on this module

    f = upoly.Poly.from_ints(target, spec.modulus)
    rs = upoly.roots(f)
    assert rs, "source modulus must split in the extension"
    beta = min(rs, key=lambda e: e.index)
    powers = [target.one()]
    for _ in range(spec.k - 1):
        powers.append(powers[-1] * beta)
    return target, FieldEmbedding(spec, target, powers)
