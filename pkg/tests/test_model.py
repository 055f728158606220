import math
from fractions import Fraction

import numpy as np
import pytest

from harperlab.contfrac import expand, forge, golden, ConstantBeta
from harperlab.errors import (
    InvalidCoupling,
    Lambda2Zero,
    ResolventSingular,
    WindowEmpty,
)
from harperlab.model import (
    Admissibility,
    CouplingTriple,
    OperatorSample,
    RegionTag,
    ZeroKind,
    abs_c_function,
    build_truncation,
    c_function,
    c_tilde_function,
    c_zeros,
    classify,
    duality,
    green_function,
    orbit_phases,
    theta_admissible,
    zero_structure,
)

GOLD = (math.sqrt(5.0) - 1.0) / 2.0


# -- couplings and regions ---------------------------------------------------


def test_invalid_couplings():
    with pytest.raises(InvalidCoupling):
        CouplingTriple(-0.1, 0.5, 0.2)
    with pytest.raises(InvalidCoupling):
        CouplingTriple(0, 0, 0)
    with pytest.raises(InvalidCoupling):
        CouplingTriple.parse("0.1,0.5")


@pytest.mark.parametrize(
    "triple,tag",
    [
        ((0.1, 0.5, 0.2), RegionTag.REGION_I),
        ((0.25, 0.5, 0.25), RegionTag.REGION_I),  # c has a zero but region is I
        ((0.0, 0.5, 0.0), RegionTag.REGION_I),
        ((0.1, 2.0, 0.1), RegionTag.REGION_II),
        ((1.0, 0.5, 1.0), RegionTag.REGION_III_ISO),
        ((1.5, 0.5, 0.2), RegionTag.REGION_III_ANISO),
        ((1.0, 1.0, 1.0), RegionTag.REGION_III_ISO),
        ((0.5, 0.5, 0.5), RegionTag.LINE_I),  # sum = 1, lambda2 < 1
        ((0.25, 1.0, 0.25), RegionTag.LINE_II),
        ((0.5, 1.0, 0.5), RegionTag.LINE_II),  # corner goes to the fixed line
        ((1.0, 2.0, 1.0), RegionTag.LINE_III),
    ],
)
def test_classification_table(triple, tag):
    assert classify(CouplingTriple(*triple)).tag is tag


def test_classification_boundary_flags():
    assert classify(CouplingTriple(0.5, 0.5, 0.5)).boundary
    assert not classify(CouplingTriple(0.1, 0.5, 0.2)).boundary
    assert classify(CouplingTriple(0.1, 0.0, 0.2)).boundary  # lambda2 = 0 edge


def test_duality_componentwise():
    sigma = duality(CouplingTriple(0.1, 0.5, 0.2))
    assert sigma.astuple() == pytest.approx((0.4, 2.0, 0.2))


def test_duality_involution_random():
    rng = np.random.default_rng(3)
    for _ in range(100):
        l1, l3 = rng.uniform(0, 2, 2)
        l2 = rng.uniform(0.05, 2)
        c = CouplingTriple(l1, l2, l3)
        back = duality(duality(c))
        assert back.astuple() == pytest.approx(c.astuple(), abs=1e-14)


def test_duality_maps_region_I_to_II():
    rng = np.random.default_rng(4)
    for _ in range(50):
        s = rng.uniform(0, 0.95)
        f = rng.uniform(0, 1)
        c = CouplingTriple(s * f, rng.uniform(0.05, 0.95), s * (1 - f))
        if classify(c).tag is RegionTag.REGION_I:
            assert classify(duality(c)).tag is RegionTag.REGION_II


def test_duality_maps_lines():
    rng = np.random.default_rng(5)
    for _ in range(25):
        f = rng.uniform(0.1, 0.9)
        l2 = rng.uniform(0.1, 0.9)
        on_li = CouplingTriple(f, l2, 1 - f)  # sum = 1, lambda2 < 1
        assert classify(on_li).tag is RegionTag.LINE_I
        assert classify(duality(on_li)).tag is RegionTag.LINE_III
        s = rng.uniform(0.05, 0.95)
        on_lii = CouplingTriple(s * f, 1.0, s * (1 - f))
        assert classify(duality(on_lii)).tag is RegionTag.LINE_II


def test_duality_lambda2_zero():
    with pytest.raises(Lambda2Zero):
        duality(CouplingTriple(0.3, 0.0, 0.4))


# -- sampling functions and zeros ---------------------------------------------


def test_c_tilde_is_conjugate_and_abs_matches():
    rng = np.random.default_rng(6)
    thetas = rng.random(10**4)
    for triple in [(0.1, 0.5, 0.2), (0.25, 0.5, 0.25), (0.7, 0.3, 0.7)]:
        c = CouplingTriple(*triple)
        cv = c_function(c, GOLD, thetas)
        ctv = c_tilde_function(c, GOLD, thetas)
        av = abs_c_function(c, GOLD, thetas)
        assert np.max(np.abs(ctv - np.conj(cv))) < 1e-12
        assert np.max(np.abs(av - np.abs(cv))) < 1e-12


def test_zero_structure_classes():
    assert zero_structure(CouplingTriple(0.1, 0.7, 0.2)).kind is ZeroKind.NONE
    zs = zero_structure(CouplingTriple(0.25, 0.5, 0.25))
    assert zs.kind is ZeroKind.DOUBLE and zs.offsets == (0.5,)
    zs = zero_structure(CouplingTriple(0.2, 0.5, 0.3))
    assert zs.kind is ZeroKind.SINGLE and zs.offsets == (0.5,)
    zs = zero_structure(CouplingTriple(0.5, 0.5, 0.5))
    assert zs.kind is ZeroKind.PAIR
    assert zs.offsets == pytest.approx((1 / 3, 2 / 3))
    # AMO has no zeros; lambda2=0 with equal side hoppings has a pair at +-1/4
    assert zero_structure(CouplingTriple(0, 1.0, 0)).kind is ZeroKind.NONE
    zs = zero_structure(CouplingTriple(0.4, 0.0, 0.4))
    assert zs.offsets == pytest.approx((0.25, 0.75))


def test_c_vanishes_at_reported_zeros():
    rng = np.random.default_rng(7)

    def singles():
        l1, l3 = rng.uniform(0.05, 1, 2)
        return CouplingTriple(l1, l1 + l3, l3)

    def pairs():
        l1 = rng.uniform(0.1, 1)
        return CouplingTriple(l1, rng.uniform(0, 2 * l1 * 0.95), l1)

    def colliding():
        l1 = rng.uniform(0.1, 1)
        return CouplingTriple(l1, 2 * l1, l1)

    for maker in (singles, pairs, colliding):
        for _ in range(100):
            c = maker()
            zs = zero_structure(c)
            assert zs.kind is not ZeroKind.NONE
            alpha = rng.random()
            for pos in zs.positions(alpha):
                assert abs(c_function(c, alpha, pos)) < 1e-10


def test_theta_admissible_no_zero_case():
    assert (
        theta_admissible(CouplingTriple(0.1, 0.7, 0.2), 0.42)
        is Admissibility.IN_THETA
    )


def test_theta_admissible_golden_half():
    theta = GOLD / 2
    res = theta_admissible(CouplingTriple(0.2, 0.5, 0.3), theta, tol=1e-2)
    assert res is Admissibility.IN_THETA


def test_theta_admissible_forged_out():
    cf = forge(golden(), n0=2, schedule=ConstantBeta(0.5), levels=3)
    theta = float(cf.fraction(10**12)) / 2
    res = theta_admissible(CouplingTriple(0.2, 0.5, 0.3), theta, tol=1e-2)
    assert res is Admissibility.OUT


def test_theta_admissible_degenerate_undecided():
    res = theta_admissible(CouplingTriple(0.25, 0.5, 0.25), 0.3)
    assert res is Admissibility.UNDECIDED


def test_theta_admissible_pair_case():
    c = CouplingTriple(0.5, 0.5, 0.5)
    assert theta_admissible(c, GOLD / 2, tol=1e-2) in (
        Admissibility.IN_THETA,
        Admissibility.OUT,
        Admissibility.UNDECIDED,
    )


# -- truncations ----------------------------------------------------------------


def sample(triple=(0.1, 0.5, 0.2), theta=0.135):
    return OperatorSample(CouplingTriple(*triple), golden(), theta)


def test_truncation_one_site():
    tr = build_truncation(sample(), 0, 0)
    assert tr.size == 1
    assert tr.diag[0] == pytest.approx(2 * math.cos(2 * math.pi * 0.135))
    assert len(tr.offdiag) == 0


def test_truncation_two_site_offdiag():
    s = sample()
    tr = build_truncation(s, 0, 1)
    expect = c_function(s.coupling, s.alpha_float, 0.135)
    assert tr.offdiag[0] == pytest.approx(complex(expect), abs=1e-12)


def test_truncation_hermitian_dense():
    rng = np.random.default_rng(8)
    for _ in range(10):
        x1 = int(rng.integers(-50, 50))
        tr = build_truncation(sample(theta=float(rng.random())), x1, x1 + 20)
        h = tr.dense()
        assert np.max(np.abs(h - h.conj().T)) < 1e-14


def test_truncation_spectrum_real_complex_oracle():
    tr = build_truncation(sample(), 0, 63)
    eigs = np.linalg.eigvals(tr.dense())  # general-purpose complex oracle
    assert np.max(np.abs(eigs.imag)) < 1e-10


def test_truncation_empty_window():
    with pytest.raises(WindowEmpty):
        build_truncation(sample(), 3, 2)


def test_truncation_json_fields():
    import json

    tr = build_truncation(sample(), 0, 4)
    data = json.loads(tr.to_json())
    assert set(data) == {"diag", "offdiag_re", "offdiag_im"}
    assert len(data["diag"]) == 5 and len(data["offdiag_re"]) == 4


def test_gauge_symmetric_matches_dense_spectrum():
    tr = build_truncation(sample(), -5, 6)
    d, b = tr.gauge_symmetric()
    m = np.diag(d) + np.diag(b, 1) + np.diag(b, -1)
    sym = np.linalg.eigvalsh(m)
    herm = np.linalg.eigvalsh(tr.dense())
    assert np.max(np.abs(sym - herm)) < 1e-12


# -- Green's functions -------------------------------------------------------------


def test_green_one_site_scalar_inverse():
    tr = build_truncation(sample(), 5, 5)
    e = 0.3
    assert green_function(tr, e, 5, 5) == pytest.approx(1.0 / (tr.diag[0] - e))


def test_green_matches_dense_inverse():
    rng = np.random.default_rng(9)
    for _ in range(20):
        x1 = int(rng.integers(-30, 30))
        tr = build_truncation(sample(theta=float(rng.random())), x1, x1 + 5)
        e = float(rng.uniform(-3, 3))
        d, b = tr.gauge_symmetric()
        counts = np.linalg.eigvalsh(tr.dense())
        if np.min(np.abs(counts - e)) < 1e-6:
            continue
        dense = np.linalg.inv(tr.dense() - e * np.eye(tr.size))
        for x in range(x1, x1 + 6):
            for y in range(x1, x1 + 6):
                g = green_function(tr, e, x, y)
                assert abs(g - dense[x - x1, y - x1]) < 1e-10


def test_green_hermitian_symmetry():
    tr = build_truncation(sample(), 0, 11)
    for (x, y) in [(0, 7), (3, 11), (2, 2)]:
        g1 = green_function(tr, 0.45, x, y)
        g2 = green_function(tr, 0.45, y, x)
        assert g1 == pytest.approx(np.conj(g2), abs=1e-12)


def test_green_singular_energy_raises():
    tr = build_truncation(sample(), 0, 7)
    e = float(np.linalg.eigvalsh(tr.dense())[3])
    with pytest.raises(ResolventSingular):
        green_function(tr, e, 0, 5)


# -- orbits ------------------------------------------------------------------------


def test_orbit_phases_no_drift():
    g = golden()
    a = g.fraction(min_q=10**14)
    xs = orbit_phases(0.135, a, 0, 120_001)
    for n in [0, 9999, 59999, 120000]:
        exact = Fraction(0.135) + n * a
        exact -= exact.numerator // exact.denominator
        assert abs(xs[n] - float(exact)) < 1e-10


def test_sample_alpha_fraction_resolution():
    s = OperatorSample(CouplingTriple(0, 0.5, 0), golden(), 0.0)
    fr = s.alpha_fraction(n_sites=10**5, tol=1e-12)
    assert fr.denominator**2 >= 1000 * 10**5 / 1e-12 * 0.99
