#pragma once

#include <span>
#include <vector>

#include "impq/lattice.hpp"
#include "impq/operator_core.hpp"
#include "impq/report.hpp"

namespace impq {

namespace tol {
inline constexpr double axiom = 1e-9;
inline constexpr double axiom_symmetry = 1e-10;
inline constexpr double interval_clamp = 1e-9;
inline constexpr double interval_order = 1e-12;
inline constexpr double commuting_state_imag = 1e-10;
}  // namespace tol

/// Lower probability operator P ∧ Q. Always a projector.
Projector lower_operator(const Projector& p, const Projector& q,
                         MeetJoinMethod method = MeetJoinMethod::spectral);

/// Upper probability operator P ∨ Q - (P - Q)². Generally not a projector.
HermitianOperator upper_operator(const Projector& p, const Projector& q,
                                 MeetJoinMethod method = MeetJoinMethod::spectral);

struct ImpreciseOperatorPair {
    Projector lower;
    HermitianOperator upper;
};

ImpreciseOperatorPair imprecise_operators(const Projector& p, const Projector& q);

/// [lower, upper] within [0, 1], lower <= upper up to 1e-12.
class ProbabilityInterval {
public:
    ProbabilityInterval(double lower, double upper);

    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }
    double width() const noexcept { return upper_ - lower_; }

private:
    double lower_;
    double upper_;
};

/// (tr(rho ω̲), tr(rho ω̄)). Values within 1e-9 outside [0, 1] are clamped;
/// anything farther out throws, since it signals a bug rather than rounding.
ProbabilityInterval imprecise_probability(const DensityMatrix& rho, const Projector& p,
                                          const Projector& q);

/// True iff `coarse` can hold together with `fine`: coarse.lower <= fine.lower
/// and coarse.upper >= fine.upper.
bool interval_consistent(const ProbabilityInterval& fine, const ProbabilityInterval& coarse);

/// Mutually orthogonal projectors summing to the identity.
class ProjectorResolution {
public:
    explicit ProjectorResolution(std::vector<Projector> parts);

    /// Split the columns of a unitary into consecutive groups of the given sizes.
    static ProjectorResolution from_unitary(const ComplexMatrix& u, std::span<const Eigen::Index> sizes);

    const std::vector<Projector>& parts() const noexcept { return parts_; }
    Eigen::Index dim() const noexcept { return parts_.front().dim(); }

private:
    std::vector<Projector> parts_;
};

/// Full axiom and property audit of the pair (P, Q).
///
/// Checks are named after what they test (ordering chain, commutation with P
/// and Q, commuting-pair reduction, consistency on states commuting with P or
/// Q, joint commutation, PQP / QPQ sandwich, sub/super-additivity over the
/// resolution, unitary covariance under `u`). The monotonicity question
/// "ω̄(P,Q) <= Q" is recorded as an observation named "monotonicity_upper_le_q".
/// Per-state work runs on up to `threads` workers; aggregation order is fixed.
Report validate_pair(const Projector& p, const Projector& q, std::span<const DensityMatrix> states,
                     const ProjectorResolution& resolution, const ComplexMatrix& u,
                     std::size_t threads = 1);

/// States commuting with P: a P/tr P + (1 - a) P⊥/tr P⊥ for a in {0, 0.3, 0.7, 1},
/// skipping terms whose projector is zero.
std::vector<DensityMatrix> spectral_mixtures(const Projector& p);

}  // namespace impq
