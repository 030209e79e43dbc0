#pragma once

#include <array>
#include <utility>
#include <vector>

#include <json.hpp>

#include "impq/operator_core.hpp"
#include "impq/report.hpp"

namespace impq {

namespace tol {
/// Principal angles closer than this to 0 or pi/2 count as commuting directions.
inline constexpr double angle_floor = 1e-6;
inline constexpr double cs_default = 1e-9;
}  // namespace tol

/// Sector dimensions of a projector pair: a 2m-dimensional generic block and
/// the four commuting blocks
///   m1 = rank(P ∧ Q), m2 = rank(P⊥ ∧ Q), m3 = rank(P ∧ Q⊥), m4 = rank(P⊥ ∧ Q⊥).
struct CSSignature {
    Eigen::Index m = 0;
    Eigen::Index m1 = 0;
    Eigen::Index m2 = 0;
    Eigen::Index m3 = 0;
    Eigen::Index m4 = 0;

    Eigen::Index dim() const noexcept { return 2 * m + m1 + m2 + m3 + m4; }
    /// Block sizes in the fixed order [generic, m1, m2, m3, m4].
    std::array<Eigen::Index, 5> sizes() const noexcept { return {2 * m, m1, m2, m3, m4}; }
    /// Offset of sector `s` (0 = generic) inside the CS basis.
    Eigen::Index offset(int s) const noexcept;

    friend bool operator==(const CSSignature&, const CSSignature&) = default;
};

enum class Sector : int { generic = 0, m1 = 1, m2 = 2, m3 = 3, m4 = 4 };

/// Joint block-diagonalization of (P, Q):
///   U P U† = dg[P̂, I, 0, I, 0],  U Q U† = dg[Q̂, I, I, 0, 0],
///   P̂ = [[C², CS], [CS, S²]],     Q̂ = [[I, 0], [0, 0]],
/// with C, S diagonal positive definite, cosines/sines of the principal
/// angles in ascending angle order.
struct CSDecomposition {
    ComplexMatrix U;  // unitary; rows are the CS basis vectors (conjugated)
    CSSignature signature;
    ComplexMatrix C;  // m x m
    ComplexMatrix S;  // m x m

    Eigen::Index dim() const noexcept { return U.rows(); }
    /// Columns of U†, the CS basis in the original coordinates.
    ComplexMatrix basis() const { return U.adjoint(); }
    /// Columns of the CS basis belonging to one sector.
    ComplexMatrix sector_basis(Sector s) const;

    /// Generic blocks P̂, Q̂ (2m x 2m).
    ComplexMatrix p_hat() const;
    ComplexMatrix q_hat() const;

    /// dg[P̂, I, 0, I, 0] and dg[Q̂, I, I, 0, 0] in the CS basis.
    ComplexMatrix p_block() const;
    ComplexMatrix q_block() const;

    /// Principal angles of the generic sector, ascending.
    std::vector<double> angles() const;
};

/// Decompose the pair. Sector membership is read off the spectra of the
/// compressions of P onto range(Q) and range(Q⊥); an angle within
/// tol::angle_floor of 0 or pi/2 is assigned to a commuting sector. Throws
/// CertificationError if the assembled basis fails to be unitary or fails to
/// reproduce (P, Q) within `tolerance`.
CSDecomposition cs_decompose(const Projector& p, const Projector& q,
                             double tolerance = tol::cs_default);

/// P = U† dg[P̂, I, 0, I, 0] U and Q = U† dg[Q̂, I, I, 0, 0] U.
std::pair<Projector, Projector> reconstruct(const CSDecomposition& dec);

/// Residuals of the structural invariants: unitarity, C² + S² = I, [C, S] = 0,
/// angle floor on both C and S.
Report validate_decomposition(const CSDecomposition& dec);

/// P̂ ∨ Q̂ = I, P̂ ∧ Q̂ = 0, tr P̂ = tr Q̂ = m. Vacuous when m = 0.
Report generic_relations_check(const CSDecomposition& dec);

struct CanonicalImprecise {
    ComplexMatrix upper;  // dg[I - (P̂ - Q̂)², I, 0, 0, 0]
    ComplexMatrix lower;  // dg[0, I, 0, 0, 0]
};

/// Canonical upper / lower operators in the CS basis.
CanonicalImprecise canonical_imprecise(const CSDecomposition& dec);

/// Principal angles between range(P) and range(Q) that are neither 0 nor pi/2
/// (within tol::angle_floor), ascending.
std::vector<double> principal_angles(const Projector& p, const Projector& q);

nlohmann::json to_json(const CSDecomposition& dec);

}  // namespace impq
