#include "zensim/spin_algebra.hpp"

#include <doctest.h>

#include <random>

using namespace zensim;

namespace {

Matrix random_hermitian(int n, std::mt19937_64& g, double scale)
{
    std::normal_distribution<double> d;
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = cplx(d(g), d(g));
    Matrix h = 0.5 * (a + a.adjoint());
    return h * (scale / h.norm());
}

// Truncated Taylor series for exp(-iHt), used only as an independent oracle.
Matrix series_exp(const Matrix& H, double t)
{
    Matrix term = Matrix::Identity(H.rows(), H.cols());
    Matrix sum = term;
    for (int k = 1; k < 60; ++k) {
        term = term * (H * cplx(0, -t)) / static_cast<double>(k);
        sum += term;
    }
    return sum;
}

} // namespace

TEST_CASE("spin operators: commutators and Casimir for every half-integer J")
{
    for (int twoJ = 1; twoJ <= 7; ++twoJ) {
        const double J = twoJ / 2.0;
        const auto s = spin_operators(J);
        const Matrix id = Matrix::Identity(s.dim(), s.dim());
        const cplx i(0, 1);
        CHECK((s.ix * s.iy - s.iy * s.ix - i * s.iz).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((s.iy * s.iz - s.iz * s.iy - i * s.ix).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((s.iz * s.ix - s.ix * s.iz - i * s.iy).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((s.ix * s.ix + s.iy * s.iy + s.iz * s.iz - J * (J + 1) * id).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(is_hermitian(s.ix));
        CHECK(is_hermitian(s.iy));
    }
}

TEST_CASE("spin operators: conventions")
{
    const auto h = spin_operators(0.5);
    CHECK(h.ix(0, 1).real() == doctest::Approx(0.5));
    CHECK(h.ix(0, 0).real() == doctest::Approx(0.0));
    const auto s = spin_operators(3.5);
    CHECK(std::abs(s.raising(0, 1)) == doctest::Approx(std::sqrt(7.0)).epsilon(1e-14));
    CHECK(std::abs(s.ix(0, 1)) == doctest::Approx(std::sqrt(7.0) / 2));
    for (int k = 0; k < 8; ++k) CHECK(s.iz(k, k).real() == doctest::Approx(3.5 - k));
    CHECK_THROWS_AS(spin_operators(0.3), std::invalid_argument);
    CHECK_THROWS_AS(spin_operators(-0.5), std::invalid_argument);
}

TEST_CASE("kron and embed")
{
    const Matrix i2 = Matrix::Identity(2, 2);
    CHECK((kron(std::vector<Matrix>{i2, i2}) - Matrix::Identity(4, 4)).norm() == 0.0);
    CHECK_THROWS_AS(kron(std::vector<Matrix>{Matrix::Zero(2, 3)}), std::invalid_argument);
    const auto h = spin_operators(0.5);
    const Matrix op = kron(std::vector<Matrix>{h.iz, i2});
    Vector psi = Vector::Zero(4);
    psi(0) = 0.6;
    psi(1) = cplx(0, 0.8);
    const Vector out = op * psi;
    CHECK(std::abs(out(0) - 0.3) < 1e-15);
    CHECK(std::abs(out(1) - cplx(0, 0.4)) < 1e-15);
    std::vector<Matrix> five(5, i2);
    CHECK(kron(five).rows() == 32);
    const std::vector<int> dims = {2, 3, 4};
    const auto s1 = spin_operators(1.0);
    const Matrix e = embed(s1.iz, 1, dims);
    const Matrix ref = kron(std::vector<Matrix>{i2, s1.iz, Matrix::Identity(4, 4)});
    CHECK((e - ref).norm() < 1e-15);
}

TEST_CASE("propagator: eigendecomposition vs truncated series")
{
    std::mt19937_64 g(7);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix H = random_hermitian(8, g, 1.0);
        const double t = 0.9;
        CHECK((propagator(H, t) - series_exp(H, t)).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(is_unitary(propagator(H, t)));
        CHECK((propagator(H, 0.3) * propagator(H, 0.5) - propagator(H, 0.8)).cwiseAbs().maxCoeff() < 1e-9);
    }
    CHECK((propagator(Matrix(Matrix::Zero(4, 4)), 3.0) - Matrix::Identity(4, 4)).norm() < 1e-15);
    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 1) = 1;
    CHECK_THROWS_AS(propagator(bad, 1.0), std::invalid_argument);
    const auto h = spin_operators(0.5);
    const Matrix U = propagator<double>(2.0 * h.ix, kPi / 2);   // Omega t = pi
    CHECK(std::norm(U(1, 0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rotation pulses act on the qubit operators as stated")
{
    const auto h = spin_operators(0.5);
    // (pi/2)_y: S_z -> -S_x.
    const Matrix Uy = rotation_pulse(Axis::Y, kPi / 2);
    CHECK((conjugate(Uy, h.iz) + h.ix).cwiseAbs().maxCoeff() < 1e-12);
    // pi_y: -S_x -> +S_x.
    const Matrix Upi = rotation_pulse(Axis::Y, kPi);
    CHECK((conjugate(Upi, Matrix(-h.ix)) - h.ix).cwiseAbs().maxCoeff() < 1e-12);
    // 2pi: -1, conjugation trivial.
    const Matrix U2 = rotation_pulse(Axis::X, 2 * kPi);
    CHECK((U2 + Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((conjugate(U2, h.iy) - h.iy).cwiseAbs().maxCoeff() < 1e-12);
    // Conjugation preserves trace and spectrum.
    std::mt19937_64 g(3);
    const Matrix A = random_hermitian(2, g, 1.0);
    const Matrix B = conjugate(rotation_pulse(Axis::MinusY, 0.37), A);
    CHECK(std::abs(A.trace() - B.trace()) < 1e-12);
    Eigen::SelfAdjointEigenSolver<Matrix> ea(A), eb(B);
    CHECK((ea.eigenvalues() - eb.eigenvalues()).norm() < 1e-12);
}
