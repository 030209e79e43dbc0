#pragma once

#include <cstdint>
#include <random>

#include "impq/operator_core.hpp"

namespace impq {

/// Master seed for reproducible sampling.
///
/// Child seeds are derived with the SplitMix64 finalizer applied to
/// `master + (index + 1) * golden_gamma`, so a per-sample seed is a pure
/// function of (master, sample index) and can be replayed in isolation.
struct Seed {
    std::uint64_t master = 0;

    Seed derive(std::uint64_t index) const noexcept;

    friend bool operator==(const Seed&, const Seed&) = default;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Deterministic generator. Uniforms and Gaussians are built from raw 64-bit
/// draws (53-bit mantissa, Box-Muller) rather than std distributions, whose
/// output is implementation-defined.
class Rng {
public:
    explicit Rng(Seed seed) : engine_(splitmix64(seed.master)) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, 1).
    double uniform();
    /// Uniform integer in [lo, hi].
    int uniform_int(int lo, int hi);
    double gaussian();
    Complex complex_gaussian();
    ComplexMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Haar unitary: QR of a complex Ginibre matrix with R's diagonal made positive.
ComplexMatrix haar_random_unitary(Eigen::Index dim, Rng& rng);
ComplexMatrix haar_random_unitary(Eigen::Index dim, Seed seed);

Projector haar_random_projector(Eigen::Index dim, Eigen::Index rank, Rng& rng);
Projector haar_random_projector(Eigen::Index dim, Eigen::Index rank, Seed seed);

/// rho = G G^dagger / tr(G G^dagger) for a complex Gaussian dim x rank factor G.
DensityMatrix random_density(Eigen::Index dim, Eigen::Index rank, Rng& rng);
DensityMatrix random_density(Eigen::Index dim, Eigen::Index rank, Seed seed);

}  // namespace impq
