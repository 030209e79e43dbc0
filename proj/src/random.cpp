#include "impq/random.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace impq {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Seed Seed::derive(std::uint64_t index) const noexcept {
    return Seed{splitmix64(master + (index + 1) * 0x9E3779B97F4A7C15ULL)};
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

int Rng::uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next() % span);
}

double Rng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 == 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

Complex Rng::complex_gaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

ComplexMatrix Rng::gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
    ComplexMatrix g(rows, cols);
    // Column-major fill order is part of the reproducibility contract.
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = complex_gaussian();
    }
    return g;
}

// ---------------------------------------------------------------------------

ComplexMatrix haar_random_unitary(Eigen::Index dim, Rng& rng) {
    if (dim <= 0) throw DomainError("haar_random_unitary: dim must be positive");
    const ComplexMatrix z = rng.gaussian_matrix(dim, dim);
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
    const ComplexMatrix& r = qr.matrixQR();
    for (Eigen::Index k = 0; k < dim; ++k) {
        const Complex d = r(k, k);
        const double mag = std::abs(d);
        if (mag > 0.0) q.col(k) *= d / mag;
    }
    return q;
}

ComplexMatrix haar_random_unitary(Eigen::Index dim, Seed seed) {
    Rng rng(seed);
    return haar_random_unitary(dim, rng);
}

Projector haar_random_projector(Eigen::Index dim, Eigen::Index rank, Rng& rng) {
    if (dim <= 0) throw DomainError("haar_random_projector: dim must be positive");
    if (rank < 0 || rank > dim) {
        throw DomainError("haar_random_projector: rank " + std::to_string(rank) +
                          " outside [0, " + std::to_string(dim) + "]");
    }
    const ComplexMatrix u = haar_random_unitary(dim, rng);
    if (rank == 0) return Projector::zero(dim);
    if (rank == dim) return Projector::identity(dim);
    return Projector::from_orthonormal(u.leftCols(rank));
}

Projector haar_random_projector(Eigen::Index dim, Eigen::Index rank, Seed seed) {
    Rng rng(seed);
    return haar_random_projector(dim, rank, rng);
}

DensityMatrix random_density(Eigen::Index dim, Eigen::Index rank, Rng& rng) {
    if (dim <= 0) throw DomainError("random_density: dim must be positive");
    if (rank < 1 || rank > dim) {
        throw DomainError("random_density: rank " + std::to_string(rank) + " outside [1, " +
                          std::to_string(dim) + "]");
    }
    const ComplexMatrix g = rng.gaussian_matrix(dim, rank);
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix((rho + rho.adjoint()) * 0.5);
}

DensityMatrix random_density(Eigen::Index dim, Eigen::Index rank, Seed seed) {
    Rng rng(seed);
    return random_density(dim, rank, rng);
}

}  // namespace impq
