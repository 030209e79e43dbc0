#pragma once

#include <complex>
#include <optional>
#include <span>

#include <Eigen/Dense>

#include "impq/errors.hpp"

namespace impq {

using Complex = std::complex<double>;
/// Dense square complex matrix; the carrier for every operator in the library.
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace tol {
inline constexpr double herm = 1e-10;
inline constexpr double idem = 1e-10;
inline constexpr double psd = 1e-10;
inline constexpr double trace = 1e-10;
inline constexpr double eig = 1e-11;
inline constexpr double pinv = 1e-10;
/// Largest admissible distance of a projector eigenvalue from {0, 1} before snapping.
inline constexpr double snap = 1e-8;
}  // namespace tol

double max_abs(const ComplexMatrix& m);
double hermiticity_residual(const ComplexMatrix& m);
ComplexMatrix identity(Eigen::Index dim);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Matrix certified Hermitian within `tol::herm`; the stored value is exactly
/// self-adjoint (symmetrized on construction).
class HermitianOperator {
public:
    explicit HermitianOperator(const ComplexMatrix& m, double tolerance = tol::herm);

    /// Symmetrize without rejecting. For results of exact-in-theory Hermitian
    /// expressions whose rounding residue has already been bounded by the caller.
    static HermitianOperator symmetrized(const ComplexMatrix& m);

    const ComplexMatrix& matrix() const noexcept { return m_; }
    Eigen::Index dim() const noexcept { return m_.rows(); }

private:
    struct Trusted {};
    HermitianOperator(Trusted, ComplexMatrix m) : m_(std::move(m)) {}

    ComplexMatrix m_;
};

/// Orthogonal projector P = P† = P². Holds I - P alongside P so that the
/// complement is an exact involution.
class Projector {
public:
    /// Snap a near-projector: eigenvalues above 1/2 go to 1, the rest to 0.
    /// Rejects input that is not Hermitian within `tol::snap` or has an
    /// eigenvalue farther than `tol::snap` from {0, 1}.
    static Projector certify(const ComplexMatrix& m);
    /// Projector onto the span of the given orthonormal columns.
    static Projector from_orthonormal(const ComplexMatrix& basis);
    static Projector zero(Eigen::Index dim);
    static Projector identity(Eigen::Index dim);

    const ComplexMatrix& matrix() const noexcept { return p_; }
    const ComplexMatrix& complement_matrix() const noexcept { return perp_; }
    HermitianOperator hermitian() const { return HermitianOperator::symmetrized(p_); }
    Eigen::Index dim() const noexcept { return p_.rows(); }
    Eigen::Index rank() const noexcept { return rank_; }

    Projector complement() const { return Projector(perp_, p_, dim() - rank_); }

    /// Orthonormal basis of the range, dim x rank.
    ComplexMatrix range_basis() const;

private:
    Projector(ComplexMatrix p, ComplexMatrix perp, Eigen::Index rank)
        : p_(std::move(p)), perp_(std::move(perp)), rank_(rank) {}

    ComplexMatrix p_;
    ComplexMatrix perp_;
    Eigen::Index rank_ = 0;
};

/// Hermitian, positive semidefinite, unit trace.
class DensityMatrix {
public:
    explicit DensityMatrix(const ComplexMatrix& m);

    const ComplexMatrix& matrix() const noexcept { return rho_.matrix(); }
    const HermitianOperator& hermitian() const noexcept { return rho_; }
    Eigen::Index dim() const noexcept { return rho_.dim(); }

private:
    HermitianOperator rho_;
};

struct Eigensystem {
    RealVector values;     // ascending
    ComplexMatrix vectors; // orthonormal columns
};

Eigensystem hermitian_eigensystem(const HermitianOperator& h);
/// Checks hermiticity first; throws NotHermitian carrying the residual norm.
Eigensystem hermitian_eigensystem(const ComplexMatrix& m);
RealVector hermitian_eigenvalues(const ComplexMatrix& m);
double min_eigenvalue(const ComplexMatrix& hermitian);
double max_eigenvalue(const ComplexMatrix& hermitian);

/// Moore-Penrose inverse. Singular values below rank_rtol * sigma_max are
/// treated as zero; the default rank_rtol is dim * machine epsilon.
ComplexMatrix pseudo_inverse(const ComplexMatrix& m, std::optional<double> rank_rtol = {});

/// Largest of the four Moore-Penrose residuals of `pinv` as an inverse of `m`.
double moore_penrose_residual(const ComplexMatrix& m, const ComplexMatrix& pinv);

/// A <= B in the Loewner order: smallest eigenvalue of B - A is >= -tolerance.
bool loewner_leq(const HermitianOperator& a, const HermitianOperator& b, double tolerance);
bool loewner_leq(const ComplexMatrix& a, const ComplexMatrix& b, double tolerance);
/// max(0, -lambda_min(B - A)): how far A <= B is from holding.
double loewner_violation(const ComplexMatrix& a, const ComplexMatrix& b);

/// Projector onto the span of the given vectors (duplicates collapse).
Projector projector_from_columns(std::span<const ComplexVector> vectors);
Projector projector_from_columns(const ComplexMatrix& columns);

struct Expectation {
    double value = 0.0;
    double imag_residue = 0.0;
};

/// Born rule tr(rho Omega).
Expectation born_expectation(const DensityMatrix& rho, const HermitianOperator& omega);

}  // namespace impq
