import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import rel_gap
from minsurf import pq


def exact_pair(n, u, v):
    """Brute-force integer evaluation of the defining sums (u, v integers)."""
    p = sum(
        (-1) ** k * math.comb(n, 2 * k) * u ** (n - 2 * k) * v ** (2 * k)
        for k in range(n // 2 + 1)
    )
    q = sum(
        (-1) ** k * math.comb(n, 2 * k + 1) * u ** (n - 2 * k - 1) * v ** (2 * k + 1)
        for k in range((n - 1) // 2 + 1)
    )
    return p, q


@pytest.mark.parametrize(
    "n,u,v,p,q",
    [
        (5, 1.0, 0.0, 1.0, 0.0),
        (4, 1.0, 1.0, -4.0, 0.0),
        (5, 2.0, 1.0, -38.0, 41.0),
        (6, 0.0, 1.0, -1.0, 0.0),
    ],
)
def test_direct_known_values(n, u, v, p, q):
    got = pq.eval_direct(n, u, v)
    assert got.degree == n
    assert got.p == p
    assert got.q == q


def test_direct_matches_integer_brute_force():
    for n in range(0, 13):
        for u in range(-3, 4):
            for v in range(-3, 4):
                p, q = exact_pair(n, u, v)
                got = pq.eval_direct(n, float(u), float(v))
                # all values fit exactly in float64 at these sizes
                assert got.p == float(p)
                assert got.q == float(q)


def test_recurrence_known_values():
    seq = pq.eval_recurrence(1, 3.0, 7.0)
    assert [val.degree for val in seq] == [0, 1]
    assert (seq[-1].p, seq[-1].q) == (3.0, 7.0)

    seq = pq.eval_recurrence(2, 1.0, 1.0)
    assert (seq[-1].p, seq[-1].q) == (0.0, 2.0)

    seq = pq.eval_recurrence(5, 2.0, 1.0)
    assert (seq[-1].p, seq[-1].q) == (-38.0, 41.0)


def test_recurrence_seed_and_degree_two():
    # degree-2 members must come out as u^2 - v^2 and 2uv for either
    # index convention of the defining sums
    for u, v in [(0.3, -1.7), (2.0, 2.0), (-0.5, 0.25)]:
        seq = pq.eval_recurrence(2, u, v)
        assert (seq[0].p, seq[0].q) == (1.0, 0.0)
        direct = pq.eval_direct(2, u, v)
        assert math.isclose(direct.p, u * u - v * v, rel_tol=1e-15, abs_tol=1e-15)
        assert math.isclose(direct.q, 2.0 * u * v, rel_tol=1e-15, abs_tol=1e-15)
        assert seq[2].p == direct.p or math.isclose(seq[2].p, direct.p, rel_tol=1e-14)


def test_unit_point_is_fixed_for_every_degree():
    for n in range(0, 21):
        assert (pq.eval_direct(n, 1.0, 0.0).p, pq.eval_direct(n, 1.0, 0.0).q) == (1.0, 0.0)
        last = pq.eval_recurrence(n, 1.0, 0.0)[-1]
        assert (last.p, last.q) == (1.0, 0.0)
        cpx = pq.eval_complex_power(n, 1.0, 0.0)
        assert (cpx.p, cpx.q) == (1.0, 0.0)


def test_three_routes_agree_on_grid():
    axis = np.linspace(-2.0, 2.0, 10)
    for n in range(0, 17):
        floor = max(1.0, 2.0) ** n
        for u in axis:
            for v in axis:
                d = pq.eval_direct(n, u, v)
                r = pq.eval_recurrence(n, u, v)[-1]
                c = pq.eval_complex_power(n, u, v)
                for a, b in [(d, r), (d, c), (r, c)]:
                    assert rel_gap(a.p, b.p, floor) < 1e-12
                    assert rel_gap(a.q, b.q, floor) < 1e-12


@settings(max_examples=200, deadline=None)
@given(
    n=st.integers(min_value=0, max_value=16),
    u=st.floats(min_value=-3, max_value=3, allow_nan=False),
    v=st.floats(min_value=-3, max_value=3, allow_nan=False),
)
def test_parity_is_exact_on_multiplicative_routes(n, u, v):
    # sign flips commute exactly with the recurrence arithmetic
    base = pq.eval_recurrence(n, u, v)[-1]
    flip_u = pq.eval_recurrence(n, -u, v)[-1]
    flip_v = pq.eval_recurrence(n, u, -v)[-1]
    su = 1.0 if n % 2 == 0 else -1.0
    assert flip_u.p == su * base.p
    assert flip_u.q == -(su * base.q)
    assert flip_v.p == base.p
    assert flip_v.q == -base.q


@settings(max_examples=100, deadline=None)
@given(
    n=st.integers(min_value=0, max_value=16),
    u=st.floats(min_value=-3, max_value=3, allow_nan=False),
    v=st.floats(min_value=-3, max_value=3, allow_nan=False),
)
def test_parity_direct_route(n, u, v):
    # power evaluation rounds u**k through libm, so direct-summation
    # parity is checked to tolerance rather than bitwise
    floor = max(1.0, abs(u), abs(v)) ** n
    base = pq.eval_direct(n, u, v)
    flip_u = pq.eval_direct(n, -u, v)
    su = 1.0 if n % 2 == 0 else -1.0
    assert rel_gap(flip_u.p, su * base.p, floor) < 1e-12
    assert rel_gap(flip_u.q, -su * base.q, floor) < 1e-12


def test_jet_known_values():
    j = pq.jet(5, 2.0, 1.0)
    assert j.p_u == -35.0  # 5 * P_4(2, 1) with P_4(2, 1) = -7
    assert j.q_u == 120.0  # 5 * Q_4(2, 1) with Q_4(2, 1) = 24
    assert j.p_v == -120.0
    assert j.q_v == -35.0
    assert pq.jet(3, 1.0, 0.0).p_v == 0.0


@settings(max_examples=100, deadline=None)
@given(
    n=st.integers(min_value=0, max_value=16),
    u=st.floats(min_value=-2, max_value=2, allow_nan=False),
    v=st.floats(min_value=-2, max_value=2, allow_nan=False),
)
def test_jet_harmonicity_exact(n, u, v):
    j = pq.jet(n, u, v)
    assert j.p_uu + j.p_vv == 0.0
    assert j.q_uu + j.q_vv == 0.0


@pytest.mark.parametrize("n", [1, 3, 5, 9, 12])
@pytest.mark.parametrize("u,v", [(0.5, 0.5), (1.0, 0.0), (-1.3, 0.7), (2.0, -2.0)])
def test_jet_first_partials_match_finite_differences(n, u, v):
    h = 1e-5 * max(1.0, abs(u), abs(v))
    j = pq.jet(n, u, v)
    scale = max(1.0, abs(j.p_u), abs(j.p_v), abs(j.q_u), abs(j.q_v))
    fd_pu = (pq.eval_direct(n, u + h, v).p - pq.eval_direct(n, u - h, v).p) / (2 * h)
    fd_pv = (pq.eval_direct(n, u, v + h).p - pq.eval_direct(n, u, v - h).p) / (2 * h)
    fd_qu = (pq.eval_direct(n, u + h, v).q - pq.eval_direct(n, u - h, v).q) / (2 * h)
    fd_qv = (pq.eval_direct(n, u, v + h).q - pq.eval_direct(n, u, v - h).q) / (2 * h)
    assert abs(fd_pu - j.p_u) / scale < 1e-6
    assert abs(fd_pv - j.p_v) / scale < 1e-6
    assert abs(fd_qu - j.q_u) / scale < 1e-6
    assert abs(fd_qv - j.q_v) / scale < 1e-6


@pytest.mark.parametrize("n", [2, 4, 7, 11])
def test_jet_second_partials_match_differenced_first_partials(n):
    u, v = 0.8, -0.6
    h = 1e-5
    j = pq.jet(n, u, v)
    scale = max(1.0, abs(j.p_uu), abs(j.p_uv), abs(j.q_uu), abs(j.q_uv))
    fd_puu = (pq.jet(n, u + h, v).p_u - pq.jet(n, u - h, v).p_u) / (2 * h)
    fd_puv = (pq.jet(n, u, v + h).p_u - pq.jet(n, u, v - h).p_u) / (2 * h)
    fd_qvv = (pq.jet(n, u, v + h).q_v - pq.jet(n, u, v - h).q_v) / (2 * h)
    assert abs(fd_puu - j.p_uu) / scale < 1e-6
    assert abs(fd_puv - j.p_uv) / scale < 1e-6
    assert abs(fd_qvv - j.q_vv) / scale < 1e-6


def test_binomial_identity_examples():
    assert pq.binomial_identity_holds(3, 1)
    assert pq.binomial_identity_holds(0, 0)
    assert pq.binomial_identity_holds(10, 4)


def test_binomial_identity_exhaustive():
    for n in range(0, 31):
        for k in range(0, (n + 1) // 2 + 1):
            if 2 * k + 1 <= n + 1:
                assert pq.binomial_identity_holds(n, k)


def test_binomial_identity_rejects_out_of_range():
    with pytest.raises(ValueError):
        pq.binomial_identity_holds(3, 2)
    with pytest.raises(ValueError):
        pq.binomial_identity_holds(4, -1)
    with pytest.raises(ValueError):
        pq.binomial_identity_holds(-1, 0)


def test_input_validation():
    with pytest.raises(ValueError):
        pq.eval_direct(-1, 0.0, 0.0)
    with pytest.raises(TypeError):
        pq.eval_direct(2.5, 0.0, 0.0)
    with pytest.raises(ValueError):
        pq.eval_direct(3, float("nan"), 0.0)
    with pytest.raises(ValueError):
        pq.eval_recurrence(3, 0.0, float("inf"))


def test_high_degree_coefficients_stay_exact():
    # integer coefficient construction is exact far beyond the surface
    # degrees in use; spot-check degree 60 against the magnitude of the
    # summed terms, (|u| + |v|)^n
    d = pq.eval_direct(60, 1.01, 0.99)
    c = pq.eval_complex_power(60, 1.01, 0.99)
    floor = (1.01 + 0.99) ** 60
    assert rel_gap(d.p, c.p, floor) < 1e-12
    assert rel_gap(d.q, c.q, floor) < 1e-12
