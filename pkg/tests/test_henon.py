import random

import pytest

from padic_henon.henon import (
    Fate,
    HenonParams,
    PlanePoint,
    RegionTag,
    classify_region,
    classify_region_alt,
    filtration_radius,
    forward,
    involution,
    inverse,
    iterate,
    lambda_conjugate,
    lambda_inverse,
    orbit_fate,
    sector_of,
)
from padic_henon.errors import PrecisionExhausted
from padic_henon.localfield import HalfLogNorm, PadicNumber, norm, random_padic, reduce_mod


def P(a, b, p=3, N=20):
    return HenonParams.parse(a, b, p, N)


def pt(x, y, p=3, N=20):
    return PlanePoint.parse(x, y, p, N)


def test_forward_fixed_point():
    assert forward(P(8, 3), pt(4, 4)).agrees(pt(4, 4))


def test_forward_two_cycle_step():
    assert forward(P("1/9", 1), pt("1/3", "-1/3")).agrees(pt("-1/3", "1/3"))


def test_forward_origin():
    params = P("7/5", "2/9")
    assert forward(params, pt(0, 0)).agrees(PlanePoint(params.a, PadicNumber.zero(3)))


def test_inverse_examples():
    params = P(8, 3)
    assert inverse(params, pt(4, 4)).agrees(pt(4, 4))
    assert inverse(params, pt(8, 0), zero_ok=True).agrees(pt(0, 0))
    with pytest.raises(PrecisionExhausted):
        inverse(params, pt(8, 0))


def test_inverse_roundtrip_random():
    rng = random.Random(1)
    for _ in range(200):
        params = HenonParams(random_padic(rng, 5, 15, -2, 2), random_padic(rng, 5, 15, -2, 2))
        q = PlanePoint(random_padic(rng, 5, 15, -2, 2), random_padic(rng, 5, 15, -2, 2))
        assert inverse(params, forward(params, q)).agrees(q)


def test_iterate_constant_orbit():
    trace = iterate(P(8, 3), pt(4, 4), 10)
    assert trace.steps == 10
    assert all(q.agrees(pt(4, 4)) for q in trace.points)


def test_iterate_mod_three_trace():
    trace = iterate(P(2, 3), pt(0, 0), 3)
    got = [(reduce_mod(q.x, 1), reduce_mod(q.y, 1)) for q in trace.points]
    assert got == [(0, 0), (2, 0), (1, 2), (1, 1)]


def test_iterate_zero_steps():
    trace = iterate(P(2, 3), pt(1, 2), 0)
    assert trace.points == [pt(1, 2)]


def test_iterate_stops_on_escape():
    trace = iterate(P("1/9", 1), pt(9, 9), 20)
    assert trace.certificate is not None
    assert trace.certificate.fate is Fate.ESCAPES_FORWARD
    assert trace.steps == 1


def test_involution_example():
    star = involution(P(2, 3))
    assert star.a == P("2/9", "1/3").a and star.b == P("2/9", "1/3").b
    assert classify_region(P(2, 3)) is RegionTag.IIplus
    assert classify_region(star) is RegionTag.IIminus


def test_lambda_examples():
    params = P(5, 3)
    img = lambda_conjugate(params, pt(1, 0))
    assert img.agrees(pt(0, -3))
    q = pt("2/7", "4/9")
    assert lambda_inverse(params, lambda_conjugate(params, q)).agrees(q)
    assert lambda_conjugate(params, q).norm() == norm(params.b) * q.norm()


@pytest.mark.parametrize("a,b,tag", [(2, 3, RegionTag.IIplus), ("1/9", 1, RegionTag.III), (1, 1, RegionTag.I),
                                     (2, "1/3", RegionTag.IIminus), ("1/27", "1/3", RegionTag.III)])
def test_classify_examples(a, b, tag):
    assert classify_region(P(a, b)) is tag
    assert classify_region_alt(P(a, b)) is tag


def test_classify_agrees_with_alternate_and_involution():
    rng = random.Random(2)
    swap = {RegionTag.IIplus: RegionTag.IIminus, RegionTag.IIminus: RegionTag.IIplus,
            RegionTag.I: RegionTag.I, RegionTag.III: RegionTag.III}
    seen = set()
    for _ in range(1000):
        params = HenonParams(random_padic(rng, 3, 10, -4, 4, 0.05), random_padic(rng, 3, 10, -3, 3))
        tag = classify_region(params)
        seen.add(tag)
        assert classify_region_alt(params) is tag
        assert classify_region(involution(params)) is swap[tag]
    assert seen == set(RegionTag)


def test_filtration_radius_examples():
    assert filtration_radius(P("1/9", 1)) == HalfLogNorm.of_valuation(-1)
    assert filtration_radius(P(1, 1)) == HalfLogNorm(0)
    assert filtration_radius(P(2, 9)) == HalfLogNorm(0)
    assert filtration_radius(P("1/3", 1)) == HalfLogNorm(1)


def test_filtration_radius_under_involution():
    rng = random.Random(3)
    for _ in range(500):
        params = HenonParams(random_padic(rng, 7, 10, -4, 4, 0.05), random_padic(rng, 7, 10, -3, 3))
        assert filtration_radius(involution(params)) == filtration_radius(params) / norm(params.b)


def test_sector_examples():
    params = P("1/9", 1)
    assert sector_of(params, pt(0, 0)).in_SR
    flags = sector_of(params, pt("1/9", 1))
    assert flags.in_SRplus and not flags.in_SRminus
    both = sector_of(params, pt("1/9", "2/9"))
    assert both.in_SRplus and both.in_SRminus and not both.in_SR


def test_fate_bounded_at_origin():
    cert = orbit_fate(P(2, 3), pt(0, 0))
    assert (cert.fate, cert.step) == (Fate.BOUNDED_FORWARD, 0)


def test_fate_escapes_forward():
    cert = orbit_fate(P("1/9", 1), pt(9, 9))
    assert (cert.fate, cert.step) == (Fate.ESCAPES_FORWARD, 1)


def test_fate_region_three_nonsquare_escapes_quickly():
    params = P("1/3", 1)
    rng = random.Random(4)
    for _ in range(100):
        q = PlanePoint(random_padic(rng, 3, 20, 0, 4, 0.1), random_padic(rng, 3, 20, 0, 4, 0.1))
        cert = orbit_fate(params, q, 50)
        assert cert.fate in (Fate.ESCAPES_FORWARD, Fate.ESCAPES_BACKWARD)


def test_fate_fixed_point_in_region_three_is_undetermined():
    cert = orbit_fate(P("1/9", 1, N=16), pt("1/3", "1/3", N=16), 30)
    assert cert.fate is Fate.UNDETERMINED


def test_fate_rejects_bad_cap():
    with pytest.raises(ValueError):
        orbit_fate(P(2, 3), pt(0, 0), 0)


def test_params_validation():
    with pytest.raises(ValueError):
        P(1, 0)
    with pytest.raises(ValueError):
        HenonParams(PadicNumber.from_int(1, 3, 5), PadicNumber.from_int(1, 5, 5))
