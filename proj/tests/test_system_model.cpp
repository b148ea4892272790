#include "zensim/system_model.hpp"

#include <doctest.h>

using namespace zensim;

namespace {

SpinSystem reduced(int n, TermToggles t = {})
{
    std::vector<bool> present(4, false);
    for (int i = 0; i < n; ++i) present[i] = true;
    return make_register_system({}, {}, Representation::Reduced, std::vector<int>(4, 1), present, t);
}

} // namespace

TEST_CASE("constants")
{
    QubitConstants qc;
    CHECK(qc.omega01 > 0);
    CHECK(qc.gamma_consistent());
    VanadiumConstants vc;
    CHECK(vc.omega_b() / vc.omega_a() == doctest::Approx(2.0));
    CHECK(vc.omega_c() / vc.omega_a() == doctest::Approx(3.0));
    CHECK(vc.omega_c() / kTwoPi * 1e3 == doctest::Approx(990.0));
    CHECK(vc.omega_c_bath() / kTwoPi * 1e3 == doctest::Approx(1027.8));
}

TEST_CASE("tabulated geometry and couplings")
{
    const auto geo = RegisterGeometry::tabulated();
    REQUIRE(geo.ions.size() == 6);
    const auto cs = coupling_constants(geo, {}, {});
    for (int i = 0; i < 2; ++i) {
        CHECK(geo.ions[i].r == doctest::Approx(3.1));
        CHECK(geo.ions[i].cls == Classification::BathByPosition);
        CHECK(cs.per_ion[i].jx == doctest::Approx(0.0));
        CHECK(cs.per_ion[i].jy == doctest::Approx(0.0));
    }
    const double mun = PhysicalConstants::muN_rad_per_us_per_G;
    for (int i = 2; i < 6; ++i) {
        CHECK(geo.ions[i].r == doctest::Approx(3.9));
        CHECK(std::abs(geo.ions[i].dir.z()) == doctest::Approx(0.40));
        CHECK(cs.per_ion[i].a_x == doctest::Approx(cs.per_ion[2].a_x).epsilon(1e-12));
        CHECK(cs.per_ion[i].a_z == doctest::Approx(cs.per_ion[2].a_z).epsilon(1e-12));
        CHECK(std::abs(cs.per_ion[i].a_x) == doctest::Approx(2 * mun * 0.6 * cs.per_ion[i].amp_x).epsilon(1e-12));
        // Reference values 6.7 and 3.1 come from rounded direction cosines.
        CHECK(cs.per_ion[i].amp_x == doctest::Approx(6.7).epsilon(0.05));
        CHECK(cs.per_ion[i].amp_z == doctest::Approx(3.1).epsilon(0.05));
    }
    CHECK_THROWS_AS(ion_coupling(0.0, Eigen::Vector3d(0, 0, 1), {}, {}), std::invalid_argument);
}

TEST_CASE("representations")
{
    CHECK(reduced(4).dim() == 32);
    CHECK(parse_representation("reduced") == Representation::Reduced);
    CHECK_THROWS_AS(parse_representation("bogus"), std::invalid_argument);
    CHECK(kept_projections(Representation::Mixed).size() == 3);
    const auto full = make_register_system({}, {}, Representation::Full, {1}, {true, false, false, false});
    CHECK(full.dim() == 16);
}

TEST_CASE("full Hamiltonian structure")
{
    const SpinSystem sys = reduced(2);
    const Matrix H0 = full_hamiltonian(sys, 0.0, 0.0);
    CHECK((H0 - Matrix(H0.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(is_hermitian(full_hamiltonian(sys, 1.3, -0.4)));
    // B_RF -> -B_RF: detuning even, interaction odd.
    const Matrix Hp = full_hamiltonian(sys, 0.0, 0.7) - H0;
    const Matrix Hm = full_hamiltonian(sys, 0.0, -0.7) - H0;
    const Matrix det = detuning(sys.qubit(), 0.7) * sys.sz();
    CHECK((0.5 * (Hp + Hm) - det).cwiseAbs().maxCoeff() < 1e-12);
    // Matrix element <1_g, 5/2| H |1_g, 7/2> at B_OH = 1 G is a_x <5/2|I_x|7/2> / 2.
    const SpinSystem one = reduced(1);
    const Matrix H1 = full_hamiltonian(one, 1.0, 0.0);
    const double ax = one.spins()[0].a_x;
    CHECK(std::abs(H1(one.index(0, {1}), one.index(0, {0}))) == doctest::Approx(0.5 * std::abs(ax) * std::sqrt(7.0) / 2));
}

TEST_CASE("extra terms")
{
    TermToggles only_edd{true, false, false, true};
    const SpinSystem sys = reduced(4, only_edd);
    const Matrix H = extra_terms(sys);
    for (int i = 0; i < 4; ++i) CHECK((H * sys.iz(i) - sys.iz(i) * H).cwiseAbs().maxCoeff() < 1e-14);
    // Ions 3 and 4 are 2 * 0.91 * 3.9 = 7.1 A apart along y.
    const auto geo = RegisterGeometry::tabulated();
    const double r = (geo.ions[2].position() - geo.ions[3].position()).norm();
    CHECK(r == doctest::Approx(7.098).epsilon(1e-3));
    const double hand = 1.25663706212e-6 / (4 * kPi) * std::pow(5.0507837461e-27 * 1.6, 2) / std::pow(r * 1e-10, 3)
                        / 1.054571817e-34 * 1e-6;
    CHECK(dipolar_prefactor({}, r) == doctest::Approx(hand).epsilon(1e-12));
    TermToggles none{true, false, false, false};
    CHECK(extra_terms(reduced(2, none)).norm() == 0.0);
}

TEST_CASE("Knight field operator")
{
    const SpinSystem sys = reduced(2);
    const Matrix a = knight_field_hamiltonian(sys, 1.2, YbState::Ground0);
    const Matrix b = knight_field_hamiltonian(sys, 1.2, YbState::Excited1);
    CHECK((a + b).norm() < 1e-15);
    CHECK(knight_field_hamiltonian(sys, 0.0, YbState::Ground0).norm() == 0.0);
    const double mun = PhysicalConstants::muN_rad_per_us_per_G;
    const double bare = mun * 1.6 * 1.2 * 3.5;
    const double amp = std::abs(a(sys.index(1, {0, 0}), sys.index(1, {0, 0}))) / 2;   // two ions at 7/2
    CHECK(amp / bare == doctest::Approx(3.1).epsilon(0.05));
}

TEST_CASE("direct drive Rabi frequency")
{
    const SpinSystem one = reduced(1);
    const double w = direct_drive_rabi(one, 1.0);
    const double mun = PhysicalConstants::muN_rad_per_us_per_G;
    const auto c = ion_coupling(3.9, RegisterGeometry::tabulated().ions[2].dir, {}, {});
    CHECK(w == doctest::Approx(std::sqrt(7.0) * mun * 0.6 * c.amp_x / 2).epsilon(1e-12));
    // B_osc implied by the 7.65 kHz observation is about 1.94 G.
    CHECK(kTwoPi * 7.65e-3 / w == doctest::Approx(1.94).epsilon(0.01));
}
