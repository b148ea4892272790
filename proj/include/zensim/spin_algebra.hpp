#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace zensim {

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

using Matrix = CMatrix<double>;
using Vector = CVector<double>;
using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

template <typename Real>
struct SpinOperatorsT {
    Real spin{};
    CMatrix<Real> ix, iy, iz, raising, lowering;
    int dim() const { return static_cast<int>(ix.rows()); }
};
using SpinOperators = SpinOperatorsT<double>;

// Basis order |J>, |J-1>, ..., |-J>.
template <typename Real = double>
SpinOperatorsT<Real> spin_operators(Real J)
{
    const Real twoJ = 2 * J;
    if (!(J > 0) || std::abs(twoJ - std::round(twoJ)) > 1e-12)
        throw std::invalid_argument("spin_operators: J must be a positive half-integer");
    const int d = static_cast<int>(std::lround(twoJ)) + 1;
    using C = std::complex<Real>;
    SpinOperatorsT<Real> s;
    s.spin = J;
    s.iz = CMatrix<Real>::Zero(d, d);
    s.raising = CMatrix<Real>::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        const Real m = J - k;
        s.iz(k, k) = C(m, 0);
        if (k > 0) s.raising(k - 1, k) = C(std::sqrt(J * (J + 1) - m * (m + 1)), 0);
    }
    s.lowering = s.raising.adjoint();
    s.ix = (s.raising + s.lowering) * C(Real(0.5), 0);
    s.iy = (s.raising - s.lowering) * C(0, Real(-0.5));
    return s;
}

template <typename Real>
CMatrix<Real> kron(const CMatrix<Real>& a, const CMatrix<Real>& b)
{
    CMatrix<Real> out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

template <typename Real>
CMatrix<Real> kron(const std::vector<CMatrix<Real>>& ops)
{
    if (ops.empty()) throw std::invalid_argument("kron: empty operator list");
    for (const auto& op : ops)
        if (op.rows() != op.cols()) throw std::invalid_argument("kron: non-square factor");
    CMatrix<Real> out = ops.front();
    for (std::size_t k = 1; k < ops.size(); ++k) out = kron(out, ops[k]);
    return out;
}

// Embed a single-site operator at position `site` among sites of the given dimensions.
template <typename Real>
CMatrix<Real> embed(const CMatrix<Real>& op, int site, const std::vector<int>& dims)
{
    Eigen::Index left = 1, right = 1;
    for (int k = 0; k < site; ++k) left *= dims[k];
    for (std::size_t k = site + 1; k < dims.size(); ++k) right *= dims[k];
    CMatrix<Real> out = CMatrix<Real>::Zero(left * op.rows() * right, left * op.cols() * right);
    const Eigen::Index d = op.rows();
    for (Eigen::Index l = 0; l < left; ++l)
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j) {
                const auto v = op(i, j);
                if (v == std::complex<Real>(0)) continue;
                for (Eigen::Index r = 0; r < right; ++r)
                    out((l * d + i) * right + r, (l * d + j) * right + r) = v;
            }
    return out;
}

// Two-site operator a_i b_j embedded without forming full-space products.
template <typename Real>
CMatrix<Real> embed2(const CMatrix<Real>& a, int i, const CMatrix<Real>& b, int j,
                     const std::vector<int>& dims)
{
    std::vector<CMatrix<Real>> ops;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (static_cast<int>(k) == i) ops.push_back(a);
        else if (static_cast<int>(k) == j) ops.push_back(b);
        else ops.push_back(CMatrix<Real>::Identity(dims[k], dims[k]));
    }
    return kron(ops);
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol = 1e-12)
{
    return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& u, double tol = 1e-10)
{
    using M = typename Derived::PlainObject;
    return u.rows() == u.cols() &&
           (u * u.adjoint() - M::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

// exp(-i H t) through the Hermitian eigendecomposition.
template <typename Real>
CMatrix<Real> propagator(const CMatrix<Real>& H, Real t)
{
    if (!is_hermitian(H, 1e-9 * std::max<Real>(1, H.cwiseAbs().maxCoeff())))
        throw std::invalid_argument("propagator: Hamiltonian is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(H);
    const auto& V = es.eigenvectors();
    CVector<Real> ph(H.rows());
    for (Eigen::Index k = 0; k < H.rows(); ++k)
        ph(k) = std::polar(Real(1), -es.eigenvalues()(k) * t);
    return V * ph.asDiagonal() * V.adjoint();
}

// Reusable diagonalization for evaluating exp(-i H t) at many t.
template <typename Real>
class SpectralPropagator {
public:
    explicit SpectralPropagator(const CMatrix<Real>& H) : es_(H) {}
    CMatrix<Real> at(Real t) const
    {
        const auto& V = es_.eigenvectors();
        CVector<Real> ph(V.rows());
        for (Eigen::Index k = 0; k < V.rows(); ++k)
            ph(k) = std::polar(Real(1), -es_.eigenvalues()(k) * t);
        return V * ph.asDiagonal() * V.adjoint();
    }
    CVector<Real> apply(const CVector<Real>& psi, Real t) const
    {
        const auto& V = es_.eigenvectors();
        CVector<Real> c = V.adjoint() * psi;
        for (Eigen::Index k = 0; k < c.size(); ++k)
            c(k) *= std::polar(Real(1), -es_.eigenvalues()(k) * t);
        return V * c;
    }
    const Eigen::SelfAdjointEigenSolver<CMatrix<Real>>& solver() const { return es_; }

private:
    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es_;
};

enum class Axis { X, Y, MinusX, MinusY };

template <typename Real = double>
CMatrix<Real> qubit_operator(Axis axis)
{
    const auto s = spin_operators<Real>(Real(0.5));
    switch (axis) {
    case Axis::X: return s.ix;
    case Axis::Y: return s.iy;
    case Axis::MinusX: return -s.ix;
    case Axis::MinusY: return -s.iy;
    }
    return s.ix;
}

// exp(-i theta S_axis) on the qubit.
template <typename Real = double>
CMatrix<Real> rotation_pulse(Axis axis, Real theta)
{
    using C = std::complex<Real>;
    const CMatrix<Real> n = qubit_operator<Real>(axis) * C(2, 0);
    return CMatrix<Real>::Identity(2, 2) * C(std::cos(theta / 2), 0) - C(0, std::sin(theta / 2)) * n;
}

// Toggling-frame action U^dagger A U.
template <typename DU, typename DA>
typename DA::PlainObject conjugate(const Eigen::MatrixBase<DU>& U, const Eigen::MatrixBase<DA>& A)
{
    return U.adjoint() * A * U;
}

// Lowest-order global-phase-free distance between two unitaries, 1 - |tr(A^dagger B)|/d.
template <typename Real>
Real phase_insensitive_distance(const CMatrix<Real>& A, const CMatrix<Real>& B)
{
    return Real(1) - std::abs((A.adjoint() * B).trace()) / static_cast<Real>(A.rows());
}

} // namespace zensim
