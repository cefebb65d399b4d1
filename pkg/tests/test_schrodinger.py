from fractions import Fraction

import pytest

from qeuclid.qarith import QScalar, ONE, LAMBDA_PLUS
from qeuclid.starcalc import Poly, P_SECTOR
from qeuclid.schrodinger import (
    Hamiltonian,
    PLANE_WAVE_FAMILIES,
    PacketError,
    build_plane_wave,
    cq_coefficient,
    cq_recurrence_residual,
    cq_value,
    energy_residual,
    gaussian_packet,
    hamiltonian_momentum_commutator,
    heine_phase_report,
    momentum_residual,
    phase_factor,
    phase_factor_construction_residual,
    phase_group_law_residual,
    plane_wave_printed,
    propagator_defining_residual,
    propagator_momentum,
    psq_power,
    psq_star_power,
    schrodinger_residual,
    wave_below_shell,
    zwischen_reorder_residual,
)
from qeuclid.lattice import QLattice

MASS = Fraction(2)


def test_cq_values():
    assert cq_coefficient(0, 0).is_one()
    assert cq_coefficient(1, 0) == -LAMBDA_PLUS
    assert cq_coefficient(1, 1) == QScalar.q(-2)
    with pytest.raises(ValueError):
        cq_coefficient(1, 2)


def test_cq_recurrence():
    for k in range(1, 13):
        for l in range(k + 1):
            assert cq_recurrence_residual(k, l).is_zero()


def test_cq_numeric_evaluator():
    for k in range(7):
        for l in range(k + 1):
            exact = cq_coefficient(k, l).eval(1.17)
            assert abs(exact - cq_value(k, l, 1.17)) <= 1e-12 * max(1.0, abs(exact))


def test_psq_powers():
    assert psq_power(0) == Poly.one((P_SECTOR,))
    want = Poly.monomial((P_SECTOR,), ((1, 0, 1),), 0, -LAMBDA_PLUS) + Poly.monomial(
        (P_SECTOR,), ((0, 2, 0),), 0, QScalar.q(-2)
    )
    assert psq_power(1) == want
    for k in range(5):
        assert psq_power(k) == psq_star_power(k)


def test_hamiltonian_centrality_and_reality(rand_poly):
    h = Hamiltonian(MASS)
    for _ in range(5):
        f = rand_poly(deg=2, nterm=3)
        for a in ("+", "3", "-"):
            assert hamiltonian_momentum_commutator(h, f, a).is_zero()
        assert h.apply(f, "left").conjugate() == h.apply(f.conjugate(), "right_bar")


def test_plane_wave_matches_printed_formula():
    for N, K in ((2, 2), (3, 3)):
        w = build_plane_wave("u_lower", N, K, MASS)
        assert w.body == plane_wave_printed(N, K, MASS)


def test_plane_wave_time_slice_is_exponential():
    from qeuclid.qexp import build_exponential

    w = build_plane_wave("u_lower", 3, 2, MASS)
    t0_slice = w.body.filter_terms(lambda key: key[1] == 0)
    assert t0_slice == build_exponential("x_ip", 3).body


def test_plane_wave_conjugation_pairs():
    for N, K in ((2, 2),):
        u = build_plane_wave("u_lower", N, K, MASS)
        uu = build_plane_wave("u_upper", N, K, MASS)
        assert u.body.conjugate() == uu.body
        us = build_plane_wave("ustar_lower", N, K, MASS)
        usu = build_plane_wave("ustar_upper", N, K, MASS)
        assert us.body.conjugate() == usu.body


def test_all_residuals_below_shell():
    N, K = 3, 2
    for fam in PLANE_WAVE_FAMILIES:
        w = build_plane_wave(fam, N, K, MASS)
        assert wave_below_shell(schrodinger_residual(w), N, K, drop=1).is_zero(), fam
        for a in ("+", "3", "-"):
            assert wave_below_shell(momentum_residual(w, a), N).is_zero(), (fam, a)
        assert wave_below_shell(energy_residual(w), N, None, drop=1).is_zero(), fam


def test_reordering_rule():
    for k in (1, 2, 3):
        for n in ((1, 1, 1), (0, 2, 1), (2, 0, 3)):
            assert zwischen_reorder_residual(k, n).is_zero()


def test_phase_group_law():
    assert phase_group_law_residual(3, MASS, Fraction(1, 3), Fraction(1, 5)).is_zero()
    a = phase_factor(+1, 2, MASS, Fraction(1, 2))
    b = phase_factor(-1, 2, MASS, Fraction(1, 2))
    prod = a.star(b) - Poly.one((P_SECTOR,))
    assert prod.filter_terms(lambda key: sum(key[0][0]) <= 4).is_zero()


def test_propagators():
    for fam, sign in (("KR", 1), ("KL", -1)):
        for br in (1, -1):
            prop = propagator_momentum(fam, br, 6, MASS)
            assert prop.psq_sign() == sign
            res = propagator_defining_residual(prop)
            assert set(res.keys()) <= {-7}
    k0 = propagator_momentum("KR", 1, 0, MASS)
    assert k0.expanded()[-1] == Poly.scalar((P_SECTOR,), QScalar.i())


def test_propagator_json():
    data = propagator_momentum("KL", -1, 2, MASS).to_json()
    assert data["branch"] == "advanced"
    assert len(data["series"]) == 3


def test_heine_report_and_construction():
    rows = heine_phase_report(4, 1.1, 0.3, 2.0, [(0.8, 1.1, 0.9)])
    assert {r["k"] for r in rows} == set(range(5))
    # the two forms agree trivially at k = 0 and genuinely deviate from
    # k = 1 on (the finite-sum reading of the reciprocal Pochhammer fails
    # already there); the report states the discrepancy, asserting neither
    assert all(r["abs_discrepancy"] == 0.0 for r in rows if r["k"] == 0)
    assert all(r["abs_discrepancy"] > 1e-12 for r in rows if r["k"] >= 1)
    assert phase_factor_construction_residual(3, MASS).is_zero()


# -- wave packets --------------------------------------------------------------


@pytest.fixture(scope="module")
def packet():
    lat = QLattice(1.1, -12, 12)
    return gaussian_packet(
        lat, MASS, center_j=0.3, width_j=0.9, odd_fraction=0.35, phase_order=20
    )


def test_packet_norm(packet):
    assert packet.norm_check(0.0) <= 1e-12
    assert packet.boundary_mass() < 1e-12
    assert packet.norm_check(0.2) <= 1e-10


def test_momentum_expectations(packet):
    for a in ("+", "3", "-"):
        p0 = packet.expectation_momentum(a, 0.0)
        p1 = packet.expectation_momentum(a, 0.2)
        assert abs(p1 - p0) <= 1e-10
        pl = packet.expectation_momentum(a, 0.2, position="lower")
        assert abs(p1.conjugate() - pl) <= 1e-10
    assert abs(packet.expectation_momentum("3", 0.0).imag) <= 1e-10


def test_position_expectations(packet):
    for a in ("+", "3", "-"):
        for t in (0.0, 0.2):
            xu = packet.expectation_position(a, t)
            xl = packet.expectation_position(a, t, position="lower")
            assert abs(xu.conjugate() - xl) <= 1e-10
    drift = (
        packet.expectation_position("3", 0.2) - packet.expectation_position("3", 0.0)
    )
    assert abs(drift) > 1e-6  # position genuinely evolves


def test_orthogonality_surrogate():
    lat = QLattice(1.1, -12, 12)
    wp1 = gaussian_packet(lat, MASS, center_j=-3.2, width_j=0.55)
    wp2 = gaussian_packet(lat, MASS, center_j=3.2, width_j=0.55)
    assert abs(wp1.inner(wp2)) <= 1e-8


def test_unconverged_phase_rejected(packet):
    with pytest.raises(PacketError):
        packet.coefficients_at(50.0)


def test_degenerate_packet_rejected():
    from qeuclid.lattice import StructuredFn, STerm
    from qeuclid.schrodinger import WavePacket

    lat = QLattice(1.1, -12, 12)
    zero = StructuredFn(lat, "p", [])
    wp = WavePacket(lat, zero, zero, MASS)
    with pytest.raises(PacketError):
        wp.normalized()
