import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torsred.arith import QuadraticField
from torsred.errors import ImpossibleTripleError, TorsredError, UnsupportedPrimeError
from torsred.families import x1_5_model, x1_11_model
from torsred.localization import (
    INF,
    SEMISTABILITY_DEGREE,
    LocalContext,
    ValuationTriple,
    base_change,
    classify,
    classify_model,
    classify_triple,
    injective_on_torsion,
    kernel_coordinate_valuations,
    local_valuations,
    minimalize,
    point_reduction,
    torsion_not_in_kernel,
)
from torsred.weierstrass import INFINITY, CurvePoint, WeierstrassModel, multiply

T = ValuationTriple

REPRESENTATIVES = {
    "I0": T(0, 0, 0),
    "In": T(0, 0, 5),
    "II": T(1, 1, 2),
    "III": T(1, 2, 3),
    "IV": T(2, 2, 4),
    "I0*": T(2, 3, 6),
    "In*": T(2, 3, 9),
    "IV*": T(3, 4, 8),
    "III*": T(3, 5, 9),
    "II*": T(5, 5, 10),
}


def table_oracle(t):
    """Kodaira type by pattern lookup in the p >= 5 valuation table."""
    a, b, d = t
    if d == 0:
        return "I0"
    if a == 0 and b == 0:
        return "In"
    rows = [
        ("II", lambda: a >= 1 and b == 1 and d == 2),
        ("III", lambda: a == 1 and b >= 2 and d == 3),
        ("IV", lambda: a >= 2 and b == 2 and d == 4),
        ("I0*", lambda: a >= 2 and b >= 3 and d == 6),
        ("In*", lambda: a == 2 and b == 3 and d >= 7),
        ("IV*", lambda: a >= 3 and b == 4 and d == 8),
        ("III*", lambda: a == 3 and b >= 5 and d == 9),
        ("II*", lambda: a >= 4 and b == 5 and d == 10),
    ]
    hits = [name for name, test in rows if test()]
    assert len(hits) == 1, (t, hits)
    return hits[0]


def test_local_valuations_examples():
    ctx = LocalContext(5)
    assert tuple(local_valuations(x1_5_model(3, 1), ctx)) == (1, 1, 2)
    assert tuple(local_valuations(x1_5_model(18, 1), ctx)) == (1, 2, 3)
    assert tuple(local_valuations(x1_5_model(3, 1), LocalContext(5, 3))) == (3, 3, 6)


@pytest.mark.parametrize("s, t", [(3, 1), (18, 1), (7, 2), (1, 5), (4, 9)])
@pytest.mark.parametrize("e", [1, 2, 3, 4])
def test_valuations_scale_with_e(s, t, e):
    base = local_valuations(x1_5_model(s, t), LocalContext(5))
    assert local_valuations(x1_5_model(s, t), LocalContext(5, e)) == base.scaled(e)


def test_denominators_cleared():
    E = WeierstrassModel.from_ainvs([0, 0, 0, Fraction(1, 25), Fraction(1, 125)])
    t = local_valuations(E, LocalContext(5))
    assert all(v >= 0 for v in t)
    assert min(v // w for v, w in zip(t, (4, 6, 12))) == 0


def test_quadratic_base_valuations():
    K, E = x1_11_model(8)
    assert classify_model(E, LocalContext(11, 2)).kodaira_type == "II"
    assert local_valuations(E, LocalContext(11, 4)) == local_valuations(E, LocalContext(11, 2)).scaled(2)
    with pytest.raises(TorsredError):
        local_valuations(E, LocalContext(11, 3))


def test_split_prime_rejected():
    K = QuadraticField(0, 1)
    E = WeierstrassModel(0, 0, 0, K.gen, 1, field=K)
    with pytest.raises(UnsupportedPrimeError):
        local_valuations(E, LocalContext(5))


def test_context_validation():
    for bad in (2, 3, 9):
        with pytest.raises(TorsredError):
            LocalContext(bad)


@pytest.mark.parametrize(
    "triple, k, minimal",
    [((4, 6, 12), 1, (0, 0, 0)), ((5, 5, 10), 0, (5, 5, 10)), ((1, 1, 2), 0, (1, 1, 2)),
     ((INF, 12, 24), 2, (INF, 0, 0)), ((8, 13, 24), 2, (0, 1, 0))],
)
def test_minimalize_examples(triple, k, minimal):
    got_k, got = minimalize(T(*triple))
    assert got_k == k
    assert tuple(got) == minimal


def test_minimalize_rejects_negative():
    with pytest.raises(TorsredError):
        minimalize(T(-1, 0, 0))


def test_classify_examples():
    r = classify(T(1, 1, 2))
    assert (r.kodaira_type, r.component_group_order, r.semistability_degree) == ("II", 1, 6)
    r = classify(T(5, 5, 10))
    assert (r.kodaira_type, r.component_group_order) == ("II*", 1)
    r = classify(T(0, 0, 7))
    assert (r.label, r.component_group_order, r.semistability_degree) == ("I7", 7, 1)
    assert not r.potentially_good


def test_classification_json():
    assert classify(T(5, 5, 10)).to_json() == {
        "type": "II*",
        "n": None,
        "label": "II*",
        "triple": [5, 5, 10],
        "u_valuation": 0,
        "component_group": 1,
        "semistability_degree": 6,
        "potentially_good": True,
    }
    assert classify(T(2, 3, 9)).to_json()["n"] == 3
    assert classify_triple(T(INF, 1, 2)).to_json()["triple"] == ["inf", 1, 2]


@pytest.mark.parametrize("triple", [(1, 1, 5), (3, 3, 7), (4, 5, 11), (1, 1, 1), (INF, INF, 3), (2, 2, 5)])
def test_impossible_triples(triple):
    with pytest.raises(ImpossibleTripleError):
        classify(T(*triple))


def test_nonminimal_rejected_by_classify():
    with pytest.raises(TorsredError):
        classify(T(4, 6, 12))


def test_record_tables():
    groups = {"I0": 1, "II": 1, "III": 2, "IV": 3, "I0*": 4, "In*": 4, "IV*": 3, "III*": 2, "II*": 1}
    for name, t in REPRESENTATIVES.items():
        r = classify(t)
        assert r.kodaira_type == name
        assert r.semistability_degree == SEMISTABILITY_DEGREE[name]
        expected_group = r.n if name == "In" else groups[name]
        assert r.component_group_order == expected_group
        assert r.potentially_good == (name not in ("In", "In*"))


valuations = st.one_of(st.integers(0, 14), st.just(INF))


def realizable(a, b, d):
    """Some c4, c6 with these valuations give v(c4^3 - c6^2) = d."""
    if a == INF and b == INF:
        return False
    if 3 * a != 2 * b:
        return d == min(3 * a, 2 * b)
    return d >= 3 * a


@settings(max_examples=1000, deadline=None)
@given(valuations, valuations, st.integers(0, 30))
def test_classify_agrees_with_table_oracle(a, b, d):
    k, m = minimalize(T(a, b, d))
    if not realizable(*m):
        with pytest.raises(ImpossibleTripleError):
            classify(m, k)
        return
    rec = classify(m, k)
    assert rec.kodaira_type == table_oracle(m)
    assert rec.u_valuation == k


def short_model_oracle(A, B, p):
    E = WeierstrassModel.from_ainvs([0, 0, 0, A, B])
    return classify_model(E, LocalContext(p))


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 8), st.integers(0, 10), st.integers(1, 40), st.integers(1, 40), st.sampled_from([5, 7, 11]))
def test_random_short_models_never_impossible(i, j, u, w, p):
    A, B = p**i * u, p**j * w
    if 4 * A**3 + 27 * B**2 == 0:
        return
    rec = short_model_oracle(A, B, p)
    assert rec.kodaira_type == table_oracle(rec.minimal_triple)


def test_x1_5_grid_never_impossible():
    ctx = LocalContext(5)
    for s in range(1, 51):
        for t in range(1, 51):
            try:
                model = x1_5_model(s, t)
            except TorsredError:
                continue
            classify_model(model, ctx)


def test_base_change_examples():
    assert base_change(T(1, 1, 2), 5).kodaira_type == "II*"
    assert base_change(T(1, 1, 2), 6).kodaira_type == "I0"
    r = base_change(T(2, 3, 7), 2)
    assert r.label == "I2"
    assert base_change(T(1, 2, 3), 3).kodaira_type == "III*"
    assert base_change(T(2, 2, 4), 2).kodaira_type == "IV*"


def test_wild_base_change_rejected():
    with pytest.raises(UnsupportedPrimeError, match="wild"):
        base_change(T(1, 1, 2), 10, p=5)
    with pytest.raises(TorsredError):
        base_change(T(1, 1, 2), 0)


@pytest.mark.parametrize("name", list(REPRESENTATIVES))
def test_semistability_degree_is_minimal(name):
    rec = classify(REPRESENTATIVES[name])
    deg = rec.semistability_degree
    for d in range(1, 7):
        semistable = base_change(rec.minimal_triple, d).kodaira_type in ("I0", "In")
        assert semistable == (d % deg == 0), (name, d)


@pytest.mark.parametrize("name", list(REPRESENTATIVES))
def test_base_change_coherence(name):
    t = REPRESENTATIVES[name]
    for d1 in range(1, 13):
        for d2 in range(1, 13):
            if (d1 * d2) % 7 == 0:
                continue
            once = base_change(t, d1 * d2, p=7)
            twice = base_change(base_change(t, d1, p=7).minimal_triple, d2, p=7)
            assert (once.kodaira_type, once.n) == (twice.kodaira_type, twice.n)
            assert once.minimal_triple == twice.minimal_triple


def test_point_reduction_examples():
    E = WeierstrassModel.from_ainvs([0, 0, 0, 0, 25])
    assert point_reduction(E, LocalContext(5), E.point(0, 5)) == {"in_kernel": False, "nonsingular_image": False}
    assert point_reduction(E, LocalContext(5), INFINITY) == {"in_kernel": True, "nonsingular_image": True}
    G = WeierstrassModel.from_ainvs([0, 0, 0, -1, 1])
    assert G.discriminant == -368
    assert point_reduction(G, LocalContext(5), G.point(1, 1)) == {"in_kernel": False, "nonsingular_image": True}


def test_point_reduction_kernel_point():
    E = WeierstrassModel.from_ainvs([0, 0, 1, -7, 6])
    P = E.point(0, 2)
    # some multiple lands in the kernel at 5 since E(F_5) is finite
    kernel = [point_reduction(E, LocalContext(5), multiply(E, n, P))["in_kernel"] for n in range(1, 20)]
    assert any(kernel)


def test_point_reduction_guards():
    E = WeierstrassModel.from_ainvs([0, 0, 0, 0, 25])
    with pytest.raises(UnsupportedPrimeError):
        point_reduction(E, LocalContext(5, 2), E.point(0, 5))
    nonminimal = WeierstrassModel.from_ainvs([0, 0, 0, 5**4, 5**6])
    with pytest.raises(TorsredError, match="minimal"):
        point_reduction(nonminimal, LocalContext(5), CurvePoint(Fraction(0), Fraction(5**3)))


def test_point_reduction_over_quadratic_field():
    K, E = x1_11_model(8)
    P = E.point(0, 0)
    r = point_reduction(E, LocalContext(11, 2), P)
    assert r["in_kernel"] is False


def test_good_reduction_points_nonsingular():
    E = WeierstrassModel.from_ainvs([0, 0, 1, -7, 6])  # discriminant 5077
    pts = []
    for x in range(-4, 9):
        for y in range(-30, 31):
            if y * y + y == x**3 - 7 * x + 6:
                pts.append(E.point(x, y))
    assert len(pts) > 6
    for p in (5, 7, 11, 13):
        for P in pts:
            assert point_reduction(E, LocalContext(p), P)["nonsingular_image"]


def test_kernel_coordinate_valuations():
    assert kernel_coordinate_valuations(60) == (-10, -15)
    assert kernel_coordinate_valuations(0) == (0, 0)
    assert kernel_coordinate_valuations(36) == (-6, -9)
    with pytest.raises(TorsredError):
        kernel_coordinate_valuations(10)


def test_torsion_predicates():
    assert torsion_not_in_kernel(6, 60, 5, 1)
    assert not torsion_not_in_kernel(20, 60, 5, 1)
    assert not torsion_not_in_kernel(6, 12, 7, 1)
    assert injective_on_torsion(2, 5, 1)
    assert not injective_on_torsion(4, 5, 1)
    assert injective_on_torsion(10, 5, 2)


def test_torsion_not_in_kernel_exact_comparison():
    rng = random.Random(5)
    for _ in range(500):
        v, dm, p, n = rng.randint(1, 200), rng.randint(1, 120), rng.choice([5, 7, 11]), rng.randint(1, 3)
        assert torsion_not_in_kernel(v, dm, p, n) == (12 * v < (p**n - p ** (n - 1)) * dm)
