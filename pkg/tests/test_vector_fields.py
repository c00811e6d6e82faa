from fractions import Fraction

import pytest

from adelab.core.errors import BadLinearPart, InvalidInput, NotIdempotent, UnknownName
from adelab.core.poly import PolyRing, SparsePoly
from adelab.core.series import TruncSeries
from adelab.services import vector_fields
from adelab.services.modular import T123, ab_polynomials, lift_to_t123
from adelab.services.vector_fields import Collinearity, Derivation, Membership


def _random_poly(rng, ring, terms=3, degree=2):
    return SparsePoly(
        ring,
        {tuple(rng.randint(0, degree) for _ in ring.names): rng.randrange(ring.modulus) for _ in range(terms)},
    )


def _field(ring, *components):
    return Derivation(ring, tuple(components))


def test_catalog_lookup_is_case_insensitive():
    assert vector_fields.catalog("Ramanujan-E").label == "ramanujan-e"
    assert vector_fields.catalog(" LIMITCYCLE ").ring.nvars == 2
    with pytest.raises(UnknownName):
        vector_fields.catalog("duffing")


def test_lorenz_parameters():
    v = vector_fields.catalog("lorenz")
    assert v.label == "lorenz(10,28,8/3)"
    assert v.ring_primes() == frozenset({3})
    w = vector_fields.catalog("lorenz", {"rho": Fraction(1, 7)})
    assert 7 in w.ring_primes()


def test_derivation_rejects_wrong_arity():
    ring = PolyRing(("x", "y"))
    with pytest.raises(InvalidInput):
        Derivation(ring, (ring.gen("x"),))


@pytest.mark.parametrize("p", [7, 11])
def test_frobenius_power_matches_sparse_iteration(p):
    v = vector_fields.catalog("limitcycle").reduce(p)
    w = vector_fields.frobenius_power(v, p)
    for i, name in enumerate(v.ring.names):
        assert w.components[i] == v.iterate(v.ring.gen(name), p)


def test_frobenius_power_is_a_derivation(rng):
    p = 5
    ring = PolyRing(("x", "y"), p)
    v = Derivation(ring, (_random_poly(rng, ring), _random_poly(rng, ring)))
    w = vector_fields.frobenius_power(v, p)
    for _ in range(20):
        f, g = _random_poly(rng, ring), _random_poly(rng, ring)
        assert w.apply(f * g) == f * w.apply(g) + g * w.apply(f)
        # v^p(f) совпадает с p-кратным применением v
        assert w.apply(f) == v.iterate(f, p)


@pytest.mark.parametrize("p", [5, 7, 11])
def test_commuting_fields_add_under_frobenius(rng, p):
    # v1 зависит только от x, v2 только от y: [v1, v2] = 0
    ring = PolyRing(("x", "y"), p)
    x, y = ring.gens()
    for _ in range(5):
        f = ring.one() + x * rng.randrange(p) + x**2 * rng.randrange(p)
        g = ring.one() * rng.randrange(1, p) + y**2 * rng.randrange(p)
        v1, v2 = _field(ring, f, ring.zero()), _field(ring, ring.zero(), g)
        for var in ring.names:
            h = ring.gen(var)
            assert v1.apply(v2.apply(h)) == v2.apply(v1.apply(h))
        lhs = vector_fields.frobenius_power(v1 + v2, p)
        assert lhs == vector_fields.frobenius_power(v1, p) + vector_fields.frobenius_power(v2, p)


@pytest.mark.parametrize("name", ["ramanujan-a", "ramanujan-e"])
@pytest.mark.parametrize("p", [5, 7, 11])
def test_ramanujan_frobenius_power_is_weighted_homogeneous(name, p):
    v = vector_fields.catalog(name).reduce(p)
    w = vector_fields.frobenius_power(v, p)
    assert any(not c.is_zero() for c in w.components)
    for weight, comp in zip(T123.weights, w.components):
        if not comp.is_zero():
            assert comp.homogeneous_degree() == weight + 2 * p


def test_minors_vanish_for_scaled_field(rng):
    ring = PolyRing(("x", "y", "z"), 7)
    for _ in range(10):
        v = Derivation(ring, tuple(_random_poly(rng, ring) for _ in range(3)))
        c = rng.randrange(1, 7)
        assert all(m.is_zero() for m in vector_fields.collinearity_minors(v, v.scale(c)).values())
        w = Derivation(ring, tuple(_random_poly(rng, ring) for _ in range(3)))
        minors = vector_fields.collinearity_minors(v, w)
        for (i, j), m in minors.items():
            assert minors[(j, i)] == -m


@pytest.mark.parametrize("p", [7, 11])
def test_minors_agree_with_pclosed_witness(p):
    v = vector_fields.catalog("limitcycle").reduce(p)
    report = vector_fields.is_pclosed(v, p)
    assert report.status == Collinearity.NOT_COLLINEAR
    minors = vector_fields.collinearity_minors(v, vector_fields.frobenius_power(v, p))
    assert minors[(report.witness.i, report.witness.j)] == report.witness.minor


def test_linear_fields_are_p_closed():
    ring = PolyRing(("x", "y"))
    x, y = ring.gens()
    euler = _field(ring, x, y)
    nilpotent = _field(ring, y, ring.zero())
    for p in (3, 5, 7):
        assert vector_fields.is_pclosed(euler, p).status == Collinearity.COLLINEAR
        assert vector_fields.is_pclosed(nilpotent, p).status == Collinearity.COLLINEAR


def test_limitcycle_scan():
    reports = {r.p: r for r in vector_fields.pclosed_scan(vector_fields.catalog("limitcycle"), 30)}
    assert reports[2].status == Collinearity.RING
    assert reports[5].status == Collinearity.RING
    assert reports[3].status == Collinearity.COLLINEAR
    for p in (7, 11, 13, 17, 19, 23, 29):
        assert reports[p].status == Collinearity.NOT_COLLINEAR
        assert reports[p].witness is not None


def test_pointwise_check():
    ring = PolyRing(("x", "y"))
    x, y = ring.gens()
    assert vector_fields.is_pclosed(_field(ring, x, y), 5, point=[1, 2]).status == Collinearity.COLLINEAR
    v = vector_fields.catalog("limitcycle")
    assert vector_fields.is_pclosed(v, 7, point=[Fraction(1, 7), 0]).status == Collinearity.RING


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_ramanujan_e_is_not_p_closed(p):
    assert vector_fields.is_pclosed(vector_fields.catalog("ramanujan-e"), p).status == Collinearity.NOT_COLLINEAR


@pytest.mark.slow
def test_lorenz_is_not_p_closed():
    v = vector_fields.catalog("lorenz")
    for report in vector_fields.pclosed_scan(v, 60, workers=2):
        if report.p == 3:
            assert report.status == Collinearity.RING
        else:
            assert report.status == Collinearity.NOT_COLLINEAR, report.p


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_ramanujan_first_integrals(p):
    v = vector_fields.catalog("ramanujan-e").reduce(p)
    assert vector_fields.first_integral_check(v, vector_fields.ramanujan_first_integral(p, "e"))
    va = vector_fields.catalog("ramanujan-a").reduce(p)
    assert vector_fields.first_integral_check(va, vector_fields.ramanujan_first_integral(p, "a"))


def test_first_integral_negative():
    v = vector_fields.catalog("ramanujan-e").reduce(5)
    assert not vector_fields.first_integral_check(v, T123.gen("t1").reduce(5))


@pytest.mark.parametrize("p", [5, 7, 11])
def test_bianchini_identity(p):
    assert vector_fields.bianchini_check(p)


@pytest.mark.parametrize("p", [5, 7])
def test_bianchini_signs_for_catalog_orientation(p):
    # каталожное поле идёт с -q d/dq: знаки при d/dt1 и h обратные
    v = vector_fields.catalog("ramanujan-a").reduce(p)
    w = vector_fields.frobenius_power(v, p)
    A, B = (lift_to_t123(x).reduce(p) for x in ab_polynomials(p, "a"))
    t1, t2, t3 = v.ring.gens()
    s = B * Fraction(1, 12) + t1 * A
    h = (t1 * 2, t2 * 4, t3 * 6)
    f = (v.ring.one(), v.ring.zero(), v.ring.zero())
    for i in range(3):
        assert w.components[i] == A * A * v.components[i] + s * s * f[i] - A * s * h[i]


def test_bianchini_rejects_small_characteristic():
    with pytest.raises(InvalidInput):
        vector_fields.bianchini_check(3)


@pytest.mark.parametrize("p", [5, 7])
@pytest.mark.parametrize("index", [0, 1, 2])
def test_frobenius_defect_lies_in_ramanujan_ideal(p, index):
    v = vector_fields.catalog("ramanujan-a").reduce(p)
    w = vector_fields.frobenius_power(v, p)
    result = vector_fields.ramanujan_ideal_membership(w.components[index] - v.components[index], p)
    assert result.status == Membership.DIVISIBLE
    assert result.remainder.is_zero()


def test_membership_remainder():
    result = vector_fields.ramanujan_ideal_membership(T123.gen("t1").reduce(5), 5)
    assert result.status == Membership.REMAINDER
    assert not result.remainder.is_zero()


def test_linearize_plane_field():
    ring = PolyRing(("x", "y"), 5)
    x, y = ring.gens()
    v = _field(ring, x + y**2 * 3, -y)
    A = vector_fields.linear_part(v)
    assert A == [[1, 0], [0, 4]]
    f = vector_fields.linearize_nd(v, A, 4)
    assert f == [x + y**2, y]
    for i in range(2):
        assert v.apply(f[i]) == f[0] * A[i][0] + f[1] * A[i][1]


def test_linearize_resonant_field_fails():
    ring = PolyRing(("x", "y"), 5)
    x, y = ring.gens()
    v = _field(ring, x, y * 2 + x**2)
    with pytest.raises(NotIdempotent):
        vector_fields.linearize_nd(v, [[1, 0], [0, 2]], 4)


def test_linearize_rejects_bad_linear_part():
    ring = PolyRing(("x", "y"), 5)
    x, y = ring.gens()
    v = _field(ring, x + y**2 * 3, -y)
    with pytest.raises(BadLinearPart):
        vector_fields.linearize_nd(v, [[2, 0], [0, 1]], 4)
    with pytest.raises(BadLinearPart):
        vector_fields.linearize_nd(v, [[1, 1], [0, 4]], 4)


def test_linearize_one_variable():
    a = TruncSeries.univariate([0, 1, -1, 0, 0, 0], modulus=5)
    f = vector_fields.linearize_1d(a, 1, 5)
    assert f.coefficients() == [0, 1, 1, 1, 1, 1]
    with pytest.raises(BadLinearPart):
        vector_fields.linearize_1d(a, 2, 5)


def test_reduce_by_principal_eliminates_then_divides():
    ring = PolyRing(("x", "y"))
    x, y = ring.gens()
    result = vector_fields.reduce_by_principal(x * y - y * y + x * y**2, [("x", y + 1)], y)
    assert result.status == Membership.DIVISIBLE
    assert result.reduced == y + y**2 * 2 + y**3 - y**2
    rest = vector_fields.reduce_by_principal(x - y, [("x", y + 1)], y)
    assert rest.status == Membership.REMAINDER
    assert rest.remainder == ring.one()
