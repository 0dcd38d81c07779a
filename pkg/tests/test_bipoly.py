import itertools
import random

import pytest
import sympy

from ffdecomp.bipoly import (
    BiPoly,
    build_F,
    count_affine,
    count_projective,
    exact_div,
    is_absolutely_irreducible,
    kronecker_factor,
    kronecker_image,
    kronecker_lift,
)
from ffdecomp.errors import SizeLimitError, ValidationError
from ffdecomp.gf_core import build_field
from ffdecomp.upoly import Poly, RatFun

F2 = build_field(2)
F3 = build_field(3)
F4 = build_field(2, 2)
F5 = build_field(5)
F7 = build_field(7)
F9 = build_field(3, 2)

SX, SY = sympy.symbols("X Y")


def rand_bipoly(rng, spec, max_total):
    terms = {}
    for i in range(max_total + 1):
        for j in range(max_total + 1 - i):
            terms[(i, j)] = spec.from_index(rng.randrange(spec.order))
    return BiPoly.from_terms(spec, terms)


def rand_ratfun(rng, spec, max_deg):
    while True:
        num = Poly.from_coeffs(
            spec, [spec.from_index(rng.randrange(spec.order)) for _ in range(max_deg + 1)]
        )
        den = Poly.from_coeffs(
            spec, [spec.from_index(rng.randrange(spec.order)) for _ in range(max_deg + 1)]
        )
        if den.is_zero() or num.is_zero():
            continue
        f = RatFun.make(num, den)
        if not f.is_constant():
            return f


def to_sympy(F):
    assert F.spec.k == 1
    expr = sympy.Integer(0)
    for (i, j), c in F.terms.items():
        expr += c.index * SX**i * SY**j
    return sympy.Poly(expr, SX, SY, modulus=F.spec.p)


def sympy_divides(G, F):
    _, r = to_sympy(F).div(to_sympy(G))
    return r.is_zero


def brute_irreducible(F):
    """Exhaustive divisor scan over a prime field, via sympy division."""
    d = F.total_degree()
    assert d >= 1
    p = F.spec.p
    monos = [(i, j) for i in range(d) for j in range(d - i)]
    for coeffs in itertools.product(range(p), repeat=len(monos)):
        G = BiPoly.from_terms(F.spec, dict(zip(monos, coeffs)))
        if G.is_zero() or G.is_constant():
            continue
        if sympy_divides(G, F):
            return False
    return True


# -- construction ------------------------------------------------------------


def test_build_f_example():
    f = RatFun.from_poly(Poly.from_ints(F7, [0, 0, 1]))
    F = build_F(f, f)
    assert F == BiPoly.from_terms(F7, {(2, 0): 1, (0, 2): -1})


def test_build_f_zero_set_matches_projective_equality():
    rng = random.Random(41)
    for spec in [F3, F5]:
        for _ in range(25):
            f = rand_ratfun(rng, spec, 2)
            g = rand_ratfun(rng, spec, 2)
            F = build_F(f, g)
            for x in spec.elements():
                for y in spec.elements():
                    assert F(x, y).is_zero() == (f.eval(x) == g.eval(y))


def test_build_f_y_degree_is_deg_g():
    rng = random.Random(43)
    for _ in range(20):
        f = rand_ratfun(rng, F5, 3)
        g = rand_ratfun(rng, F5, 3)
        F = build_F(f, g)
        assert F.deg_y() == g.degree
        assert F.deg_x() == f.degree


def test_build_f_rejects_constants():
    f = RatFun.from_poly(Poly.x(F5))
    c = RatFun.from_poly(Poly.one(F5))
    with pytest.raises(ValidationError):
        build_F(f, c)


# -- arithmetic sanity -------------------------------------------------------


def test_bipoly_ring_ops():
    x = BiPoly.x(F5)
    y = BiPoly.y(F5)
    assert (x + y) * (x - y) == x**2 - y**2
    assert (x + y) ** 2 == x**2 + 2 * x * y + y**2
    assert str(x**2 - y**2) == "X^2+4*Y^2"


def test_specialize_matches_eval():
    rng = random.Random(47)
    for _ in range(30):
        F = rand_bipoly(rng, F5, 3)
        for a in F5.elements():
            u = F.specialize_x(a)
            v = F.specialize_y(a)
            for b in F5.elements():
                assert u(b) == F(a, b)
                assert v(b) == F(b, a)


def test_y_coeff_views_roundtrip():
    rng = random.Random(53)
    for _ in range(30):
        F = rand_bipoly(rng, F4, 4)
        if F.is_zero():
            continue
        assert BiPoly.from_y_coeffs(F.as_y_coeffs()) == F


# -- point counting ----------------------------------------------------------


def brute_affine(F):
    return sum(
        1
        for x in F.spec.elements()
        for y in F.spec.elements()
        if F(x, y).is_zero()
    )


def brute_projective(F):
    spec = F.spec
    d = F.total_degree()

    def hom(x, y, z):
        acc = spec.zero()
        for (i, j), c in F.terms.items():
            acc = acc + c * x**i * y**j * z ** (d - i - j)
        return acc

    reps = [(x, y, spec.one()) for x in spec.elements() for y in spec.elements()]
    reps += [(x, spec.one(), spec.zero()) for x in spec.elements()]
    reps += [(spec.one(), spec.zero(), spec.zero())]
    return sum(1 for r in reps if hom(*r).is_zero())


def test_count_affine_examples():
    for spec in [F3, F5, F7, F9]:
        parabola = BiPoly.from_terms(spec, {(0, 2): 1, (1, 0): -1})  # Y^2 - X
        assert count_affine(parabola) == spec.order
        hyperbola = BiPoly.from_terms(spec, {(1, 1): 1, (0, 0): -1})  # XY - 1
        assert count_affine(hyperbola) == spec.order - 1
    circle3 = BiPoly.from_terms(F3, {(2, 0): 1, (0, 2): 1})
    assert count_affine(circle3) == 1


def test_count_affine_matches_scan():
    rng = random.Random(59)
    for spec in [F3, F4, F5]:
        for _ in range(25):
            F = rand_bipoly(rng, spec, 3)
            if F.is_zero():
                continue
            assert count_affine(F) == brute_affine(F)


def test_count_affine_rejects_zero():
    with pytest.raises(ValidationError):
        count_affine(BiPoly.zero(F3))


def test_count_projective_examples():
    for spec in [F3, F5, F7, F9]:
        q = spec.order
        parabola = BiPoly.from_terms(spec, {(0, 1): 1, (2, 0): -1})  # Y - X^2
        assert count_projective(parabola) == q + 1
        line = BiPoly.from_terms(spec, {(1, 0): 1, (0, 1): 1})
        assert count_projective(line) == q + 1
    circle3 = BiPoly.from_terms(F3, {(2, 0): 1, (0, 2): 1})
    assert count_projective(circle3) == 1


def test_count_projective_matches_scan():
    rng = random.Random(61)
    for spec in [F3, F4, F5]:
        for _ in range(25):
            F = rand_bipoly(rng, spec, 3)
            if F.is_zero() or F.is_constant():
                continue
            assert count_projective(F) == brute_projective(F)


def test_counts_invariant_under_swap():
    rng = random.Random(67)
    for _ in range(20):
        F = rand_bipoly(rng, F5, 3)
        if F.is_zero() or F.is_constant():
            continue
        assert count_affine(F) == count_affine(F.swap_vars())
        assert count_projective(F) == count_projective(F.swap_vars())


# -- substitution-based factoring --------------------------------------------


def test_kronecker_image_lift_roundtrip():
    rng = random.Random(71)
    for _ in range(40):
        F = rand_bipoly(rng, F5, 4)
        D = F.deg_x() + 1
        assert kronecker_lift(kronecker_image(F, D), D) == F


def test_kronecker_image_multiplicative():
    rng = random.Random(73)
    for _ in range(40):
        F = rand_bipoly(rng, F3, 2)
        G = rand_bipoly(rng, F3, 2)
        D = (F * G).deg_x() + 1
        assert kronecker_image(F * G, D) == kronecker_image(F, D) * kronecker_image(G, D)


def test_exact_div_roundtrip():
    rng = random.Random(79)
    for spec in [F2, F4, F7]:
        for _ in range(40):
            F = rand_bipoly(rng, spec, 3)
            G = rand_bipoly(rng, spec, 2)
            if G.is_zero():
                continue
            assert exact_div(F * G, G) == F
            if not G.is_constant() and not F.is_zero():
                assert exact_div(F * G + 1, G) is None


def test_exact_div_matches_sympy():
    rng = random.Random(83)
    for _ in range(60):
        F = rand_bipoly(rng, F5, 3)
        G = rand_bipoly(rng, F5, 2)
        if F.is_zero() or G.is_zero():
            continue
        assert (exact_div(F, G) is not None) == sympy_divides(G, F)


def test_factor_difference_of_squares():
    F = BiPoly.from_terms(F7, {(2, 0): 1, (0, 2): -1})
    unit, facs = kronecker_factor(F)
    # each factor is scaled so its lexicographically first coefficient
    # (here the Y one) is 1, pushing the sign into the unit
    assert unit == F7.element(-1)
    assert facs == [
        (BiPoly.from_terms(F7, {(1, 0): 1, (0, 1): 1}), 1),
        (BiPoly.from_terms(F7, {(1, 0): -1, (0, 1): 1}), 1),
    ]


def test_factor_irreducible_circle():
    F = BiPoly.from_terms(F3, {(2, 0): 1, (0, 2): 1})
    unit, facs = kronecker_factor(F)
    assert unit == F3.one()
    assert facs == [(F, 1)]


def test_factor_with_multiplicity():
    g1 = BiPoly.from_terms(F5, {(1, 0): 1, (0, 1): 1})
    g2 = BiPoly.from_terms(F5, {(1, 0): -1, (0, 1): 1})  # canonical form of X-Y
    unit, facs = kronecker_factor(g1 * g1 * (-g2) * 3)
    assert unit == F5.element(-3)
    assert sorted(facs, key=lambda t: t[1]) == [(g2, 1), (g1, 2)]


def test_factor_reconstructs_product():
    rng = random.Random(89)
    for spec in [F2, F3, F4, F5]:
        for _ in range(20):
            F = rand_bipoly(rng, spec, 4)
            if F.is_zero():
                continue
            unit, facs = kronecker_factor(F)
            prod = BiPoly.constant(unit)
            for g, m in facs:
                assert g.terms[min(g.terms)] == 1
                prod = prod * g**m
            assert prod == F


def test_factor_irreducibility_against_divisor_scan():
    rng = random.Random(97)
    cases = []
    for _ in range(12):
        cases.append(rand_bipoly(rng, F2, 4))
        cases.append(rand_bipoly(rng, F3, 3))
    for F in cases:
        if F.is_zero() or F.is_constant():
            continue
        _, facs = kronecker_factor(F)
        trivial = len(facs) == 1 and facs[0][1] == 1
        assert trivial == brute_irreducible(F)


def test_factor_invariant_under_variable_swap():
    rng = random.Random(101)
    for _ in range(15):
        F = rand_bipoly(rng, F3, 3)
        if F.is_zero() or F.is_constant():
            continue
        _, facs = kronecker_factor(F)
        _, sfacs = kronecker_factor(F.swap_vars())

        def renorm(G):
            c = G.terms[min(G.terms)]
            return G * c.inverse()

        swapped_back = sorted(
            ((renorm(g.swap_vars()), m) for g, m in sfacs),
            key=lambda fm: (fm[0].total_degree(), fm[0].index_key()),
        )
        assert swapped_back == facs


def test_factor_deterministic():
    F = BiPoly.from_terms(F5, {(3, 0): 2, (1, 2): 1, (0, 1): 4, (2, 1): 3})
    assert kronecker_factor(F) == kronecker_factor(F)


def test_factor_pure_powers():
    F = BiPoly.from_terms(F2, {(2, 0): 1}) * BiPoly.from_terms(F2, {(0, 3): 1})
    _, facs = kronecker_factor(F)
    assert facs == [
        (BiPoly.y(F2), 3),
        (BiPoly.x(F2), 2),
    ]


def test_factor_degree_cap():
    with pytest.raises(SizeLimitError):
        kronecker_factor(BiPoly.from_terms(F2, {(25, 0): 1}))


def test_factor_rejects_zero():
    with pytest.raises(ValidationError):
        kronecker_factor(BiPoly.zero(F2))


def test_built_curve_factors_have_positive_y_degree():
    # every irreducible factor of A(X)Q(Y) - B(X)P(Y) involves Y, and the
    # Y-degrees across the multiset add up to deg g
    rng = random.Random(103)
    for _ in range(15):
        f = rand_ratfun(rng, F3, 2)
        g = rand_ratfun(rng, F3, 2)
        F = build_F(f, g)
        _, facs = kronecker_factor(F)
        assert all(h.deg_y() > 0 for h, _ in facs)
        assert sum(m * h.deg_y() for h, m in facs) == g.degree


# -- absolute irreducibility -------------------------------------------------


def test_absolute_irreducibility_known_cases():
    circle3 = BiPoly.from_terms(F3, {(2, 0): 1, (0, 2): 1})
    assert not is_absolutely_irreducible(circle3)  # splits over F_9
    circle5 = BiPoly.from_terms(F5, {(2, 0): 1, (0, 2): 1})
    assert not is_absolutely_irreducible(circle5)  # splits over F_5 already
    assert not is_absolutely_irreducible(BiPoly.from_terms(F7, {(2, 0): 1, (0, 2): -1}))
    cusp = BiPoly.from_terms(F5, {(0, 2): 1, (3, 0): -1})  # Y^2 - X^3
    assert is_absolutely_irreducible(cusp)
    parabola = BiPoly.from_terms(F7, {(0, 1): 1, (2, 0): -1})
    assert is_absolutely_irreducible(parabola)
    hyperbola = BiPoly.from_terms(F5, {(1, 1): 1, (0, 0): -1})
    assert is_absolutely_irreducible(hyperbola)


def test_norm_form_is_irreducible_but_not_absolutely():
    # with T^2 + T + 3 irreducible over F_7, the norm of N - alpha*M splits
    # only after extending the scalars
    n = BiPoly.from_terms(F7, {(1, 0): 1, (0, 0): 1})  # X + 1
    m = BiPoly.from_terms(F7, {(0, 1): 1, (0, 0): 2})  # Y + 2
    F = n * n + n * m + 3 * m * m
    _, facs = kronecker_factor(F)
    assert len(facs) == 1 and facs[0][1] == 1
    assert not is_absolutely_irreducible(F)


def test_absolute_irreducibility_rejects_constant():
    with pytest.raises(ValidationError):
        is_absolutely_irreducible(BiPoly.constant(F3.one()))
