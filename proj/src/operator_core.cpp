#include "impq/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace impq {

namespace {

// Relative singular-value floor for span detection in projector_from_columns.
constexpr double kSpanRtol = 1e-10;

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return (m + m.adjoint()) * 0.5; }

void require_square(const ComplexMatrix& m, const char* where) {
    if (m.rows() != m.cols()) {
        throw DimensionMismatch(where, m.rows(), m.cols());
    }
}

bool all_finite(const ComplexMatrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
        }
    }
    return true;
}

}  // namespace

double max_abs(const ComplexMatrix& m) {
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().maxCoeff();
}

double hermiticity_residual(const ComplexMatrix& m) {
    require_square(m, "hermiticity_residual");
    return max_abs(m - m.adjoint());
}

ComplexMatrix identity(Eigen::Index dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows()) throw DimensionMismatch("commutator", a.rows(), b.rows());
    return a * b - b * a;
}

// ---------------------------------------------------------------------------

HermitianOperator::HermitianOperator(const ComplexMatrix& m, double tolerance) {
    require_square(m, "HermitianOperator");
    if (m.rows() == 0) throw Error("HermitianOperator: empty matrix");
    if (!all_finite(m)) throw Error("HermitianOperator: non-finite entry");
    const double r = hermiticity_residual(m);
    if (r > tolerance) throw NotHermitian(r);
    m_ = hermitian_part(m);
}

HermitianOperator HermitianOperator::symmetrized(const ComplexMatrix& m) {
    require_square(m, "HermitianOperator::symmetrized");
    return HermitianOperator(Trusted{}, hermitian_part(m));
}

// ---------------------------------------------------------------------------

Projector Projector::certify(const ComplexMatrix& m) {
    require_square(m, "Projector::certify");
    if (m.rows() == 0) throw Error("Projector::certify: empty matrix");
    if (!all_finite(m)) throw NotProjector("non-finite entry", std::numeric_limits<double>::infinity());
    const double herm = hermiticity_residual(m);
    if (herm > tol::snap) throw NotProjector("projector candidate is not Hermitian", herm);

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m));
    const RealVector& lambda = es.eigenvalues();
    double worst = 0.0;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        const double d = lambda[i] > 0.5 ? std::abs(lambda[i] - 1.0) : std::abs(lambda[i]);
        worst = std::max(worst, d);
        if (lambda[i] > 0.5) ++rank;
    }
    if (worst > tol::snap) {
        throw NotProjector("eigenvalue too far from {0, 1}", worst);
    }
    // Eigenvalues are ascending, so the range is spanned by the last `rank` vectors.
    const Eigen::Index n = m.rows();
    const ComplexMatrix kernel = es.eigenvectors().leftCols(n - rank);
    const ComplexMatrix range = es.eigenvectors().rightCols(rank);
    return Projector(hermitian_part(range * range.adjoint()),
                     hermitian_part(kernel * kernel.adjoint()), rank);
}

Projector Projector::from_orthonormal(const ComplexMatrix& basis) {
    const Eigen::Index n = basis.rows();
    const ComplexMatrix p = hermitian_part(basis * basis.adjoint());
    ComplexMatrix perp = impq::identity(n) - p;
    return Projector(p, hermitian_part(perp), basis.cols());
}

Projector Projector::zero(Eigen::Index dim) {
    return Projector(ComplexMatrix::Zero(dim, dim), impq::identity(dim), 0);
}

Projector Projector::identity(Eigen::Index dim) {
    return Projector(impq::identity(dim), ComplexMatrix::Zero(dim, dim), dim);
}

ComplexMatrix Projector::range_basis() const {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(p_);
    return es.eigenvectors().rightCols(rank_);
}

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(const ComplexMatrix& m) : rho_(m, tol::herm) {
    const double lmin = min_eigenvalue(rho_.matrix());
    if (lmin < -tol::psd) throw NotDensity("density matrix is not positive semidefinite", -lmin);
    const double tr_err = std::abs(rho_.matrix().trace().real() - 1.0);
    if (tr_err > tol::trace) throw NotDensity("density matrix trace differs from 1", tr_err);
}

// ---------------------------------------------------------------------------

Eigensystem hermitian_eigensystem(const HermitianOperator& h) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.matrix());
    if (es.info() != Eigen::Success) throw Error("hermitian_eigensystem: solver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

Eigensystem hermitian_eigensystem(const ComplexMatrix& m) {
    return hermitian_eigensystem(HermitianOperator(m));
}

RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
    require_square(m, "hermitian_eigenvalues");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double min_eigenvalue(const ComplexMatrix& hermitian) {
    if (hermitian.rows() == 0) return 0.0;
    return hermitian_eigenvalues(hermitian).minCoeff();
}

double max_eigenvalue(const ComplexMatrix& hermitian) {
    if (hermitian.rows() == 0) return 0.0;
    return hermitian_eigenvalues(hermitian).maxCoeff();
}

// ---------------------------------------------------------------------------

ComplexMatrix pseudo_inverse(const ComplexMatrix& m, std::optional<double> rank_rtol) {
    require_square(m, "pseudo_inverse");
    const Eigen::Index n = m.rows();
    const double rtol =
        rank_rtol.value_or(static_cast<double>(n) * std::numeric_limits<double>::epsilon());
    Eigen::BDCSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector& sigma = svd.singularValues();
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    if (sigma.size() == 0 || sigma[0] == 0.0) return out;
    const double cutoff = rtol * sigma[0];
    for (Eigen::Index k = 0; k < sigma.size(); ++k) {
        if (sigma[k] <= cutoff) break;  // descending order
        out.noalias() += (svd.matrixV().col(k) / sigma[k]) * svd.matrixU().col(k).adjoint();
    }
    return out;
}

double moore_penrose_residual(const ComplexMatrix& m, const ComplexMatrix& pinv) {
    const ComplexMatrix mp = m * pinv;
    const ComplexMatrix pm = pinv * m;
    return std::max({max_abs(mp * m - m), max_abs(pm * pinv - pinv),
                     max_abs(mp - mp.adjoint()), max_abs(pm - pm.adjoint())});
}

// ---------------------------------------------------------------------------

double loewner_violation(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows()) throw DimensionMismatch("loewner", a.rows(), b.rows());
    return std::max(0.0, -min_eigenvalue(b - a));
}

bool loewner_leq(const ComplexMatrix& a, const ComplexMatrix& b, double tolerance) {
    if (a.rows() != b.rows()) throw DimensionMismatch("loewner_leq", a.rows(), b.rows());
    return min_eigenvalue(b - a) >= -tolerance;
}

bool loewner_leq(const HermitianOperator& a, const HermitianOperator& b, double tolerance) {
    return loewner_leq(a.matrix(), b.matrix(), tolerance);
}

// ---------------------------------------------------------------------------

Projector projector_from_columns(const ComplexMatrix& columns) {
    if (columns.cols() == 0 || columns.rows() == 0) {
        throw Error("projector_from_columns: no vectors");
    }
    Eigen::BDCSVD<ComplexMatrix> svd(columns, Eigen::ComputeThinU);
    const RealVector& sigma = svd.singularValues();
    if (sigma[0] == 0.0) throw Error("projector_from_columns: input span is zero");
    Eigen::Index rank = 0;
    while (rank < sigma.size() && sigma[rank] > kSpanRtol * sigma[0]) ++rank;
    return Projector::from_orthonormal(svd.matrixU().leftCols(rank));
}

Projector projector_from_columns(std::span<const ComplexVector> vectors) {
    if (vectors.empty()) throw Error("projector_from_columns: no vectors");
    const Eigen::Index n = vectors.front().size();
    ComplexMatrix cols(n, static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t k = 0; k < vectors.size(); ++k) {
        if (vectors[k].size() != n) {
            throw DimensionMismatch("projector_from_columns", n, vectors[k].size());
        }
        cols.col(static_cast<Eigen::Index>(k)) = vectors[k];
    }
    return projector_from_columns(cols);
}

// ---------------------------------------------------------------------------

Expectation born_expectation(const DensityMatrix& rho, const HermitianOperator& omega) {
    if (rho.dim() != omega.dim()) throw DimensionMismatch("born_expectation", rho.dim(), omega.dim());
    const Complex t = rho.matrix().cwiseProduct(omega.matrix().transpose()).sum();
    return {t.real(), std::abs(t.imag())};
}

}  // namespace impq
