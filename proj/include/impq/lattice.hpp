#pragma once

#include <optional>
#include <string_view>

#include "impq/operator_core.hpp"
#include "impq/report.hpp"

namespace impq {

/// Algorithm used for meet (P ∧ Q) and join (P ∨ Q).
///
///  - iterate:   meet = lim (PQ)^n by repeated squaring; join by De Morgan.
///  - spectral:  meet = eigenspace of P + Q at eigenvalue 2; join by De Morgan.
///  - pinv_join: join = (P + Q)(P + Q)^+ (join only).
///  - cs_based:  read both off the CS decomposition of the pair.
enum class MeetJoinMethod { iterate, spectral, pinv_join, cs_based };

std::string_view to_string(MeetJoinMethod m) noexcept;
std::optional<MeetJoinMethod> parse_meet_join_method(std::string_view s) noexcept;

namespace tol {
/// Width of the eigenvalue-2 cluster of P + Q accepted as the intersection.
inline constexpr double meet_eig = 1e-8;
/// Successive Frobenius distance that stops the (PQ)^n iteration.
inline constexpr double iterate_step = 1e-12;
/// 2^20 effective powers.
inline constexpr int iterate_max_squarings = 20;
/// Relative rank cutoff for the pseudo-inverse join.
inline constexpr double pinv_join_rtol = 1e-9;
inline constexpr double lattice_check = 1e-9;
inline constexpr double trace_integer = 1e-8;
/// Pairwise Frobenius distance allowed between meet / join methods.
inline constexpr double method_agreement = 1e-8;
}  // namespace tol

Projector complement(const Projector& p);
Projector meet(const Projector& p, const Projector& q,
               MeetJoinMethod method = MeetJoinMethod::spectral);
Projector join(const Projector& p, const Projector& q,
               MeetJoinMethod method = MeetJoinMethod::spectral);

/// For P >= P': PP' = P'P = P'. A failed Loewner precondition is reported as
/// its own check ("precondition_order") and the product checks are skipped.
Report order_product_check(const Projector& p, const Projector& p_sub);

/// tr(P ∨ Q) + tr(P ∧ Q) = tr P + tr Q with all four traces integral.
Report dimension_identity_check(const Projector& p, const Projector& q);

/// Meet by iterate / spectral / cs_based and join by iterate / spectral /
/// pinv_join / cs_based; reports the largest pairwise Frobenius distance
/// within each family ("meet_agreement", "join_agreement").
Report method_agreement_check(const Projector& p, const Projector& q);

}  // namespace impq
