#include "impq/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "impq/cs_decomp.hpp"

namespace impq {

std::string_view to_string(MeetJoinMethod m) noexcept {
    switch (m) {
        case MeetJoinMethod::iterate: return "iterate";
        case MeetJoinMethod::spectral: return "spectral";
        case MeetJoinMethod::pinv_join: return "pinv_join";
        case MeetJoinMethod::cs_based: return "cs_based";
    }
    return "unknown";
}

std::optional<MeetJoinMethod> parse_meet_join_method(std::string_view s) noexcept {
    for (auto m : {MeetJoinMethod::iterate, MeetJoinMethod::spectral, MeetJoinMethod::pinv_join,
                   MeetJoinMethod::cs_based}) {
        if (to_string(m) == s) return m;
    }
    return std::nullopt;
}

namespace {

void require_same_dim(const Projector& p, const Projector& q, const char* where) {
    if (p.dim() != q.dim()) throw DimensionMismatch(where, p.dim(), q.dim());
}

Projector meet_spectral(const Projector& p, const Projector& q) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(p.matrix() + q.matrix());
    const RealVector& lambda = es.eigenvalues();
    Eigen::Index count = 0;
    for (Eigen::Index i = lambda.size(); i-- > 0;) {
        if (lambda[i] < 2.0 - tol::meet_eig) break;
        ++count;
    }
    if (count == 0) return Projector::zero(p.dim());
    return Projector::from_orthonormal(es.eigenvectors().rightCols(count));
}

Projector meet_iterate(const Projector& p, const Projector& q) {
    ComplexMatrix m = p.matrix() * q.matrix();
    double step = 0.0;
    for (int k = 0; k < tol::iterate_max_squarings; ++k) {
        ComplexMatrix sq = m * m;
        step = (sq - m).norm();
        m = std::move(sq);
        if (step < tol::iterate_step) return Projector::certify((m + m.adjoint()) * 0.5);
    }
    throw ConvergenceError("meet(iterate): (PQ)^n did not converge within 2^20 powers", step);
}

Projector from_sectors(const CSDecomposition& dec, std::initializer_list<Sector> sectors) {
    Eigen::Index cols = 0;
    for (Sector s : sectors) cols += dec.signature.sizes()[static_cast<int>(s)];
    ComplexMatrix basis(dec.dim(), cols);
    Eigen::Index at = 0;
    for (Sector s : sectors) {
        const ComplexMatrix b = dec.sector_basis(s);
        basis.middleCols(at, b.cols()) = b;
        at += b.cols();
    }
    if (cols == 0) return Projector::zero(dec.dim());
    return Projector::from_orthonormal(basis);
}

Projector join_pinv(const Projector& p, const Projector& q) {
    const ComplexMatrix sum = p.matrix() + q.matrix();
    const ComplexMatrix j = sum * pseudo_inverse(sum, tol::pinv_join_rtol);
    return Projector::certify((j + j.adjoint()) * 0.5);
}

}  // namespace

Projector complement(const Projector& p) { return p.complement(); }

Projector meet(const Projector& p, const Projector& q, MeetJoinMethod method) {
    require_same_dim(p, q, "meet");
    switch (method) {
        case MeetJoinMethod::spectral: return meet_spectral(p, q);
        case MeetJoinMethod::iterate: return meet_iterate(p, q);
        case MeetJoinMethod::cs_based: return from_sectors(cs_decompose(p, q), {Sector::m1});
        case MeetJoinMethod::pinv_join: break;
    }
    throw DomainError("meet: method pinv_join applies to join only");
}

Projector join(const Projector& p, const Projector& q, MeetJoinMethod method) {
    require_same_dim(p, q, "join");
    switch (method) {
        case MeetJoinMethod::spectral:
        case MeetJoinMethod::iterate:
            return meet(p.complement(), q.complement(), method).complement();
        case MeetJoinMethod::pinv_join: return join_pinv(p, q);
        case MeetJoinMethod::cs_based:
            return from_sectors(cs_decompose(p, q),
                                {Sector::generic, Sector::m1, Sector::m2, Sector::m3});
    }
    throw DomainError("join: unknown method");
}

Report order_product_check(const Projector& p, const Projector& p_sub) {
    require_same_dim(p, p_sub, "order_product_check");
    Report r;
    if (!r.check("precondition_order", loewner_violation(p_sub.matrix(), p.matrix()),
                 tol::lattice_check)) {
        return r;
    }
    const ComplexMatrix& a = p.matrix();
    const ComplexMatrix& b = p_sub.matrix();
    r.check("left_product", max_abs(a * b - b), tol::lattice_check);
    r.check("right_product", max_abs(b * a - b), tol::lattice_check);
    return r;
}

Report dimension_identity_check(const Projector& p, const Projector& q) {
    require_same_dim(p, q, "dimension_identity_check");
    const double tj = join(p, q).matrix().trace().real();
    const double tm = meet(p, q).matrix().trace().real();
    const double tp = p.matrix().trace().real();
    const double tq = q.matrix().trace().real();
    double integrality = 0.0;
    for (double t : {tj, tm, tp, tq}) integrality = std::max(integrality, std::abs(t - std::round(t)));
    Report r;
    r.check("integer_traces", integrality, tol::trace_integer);
    r.check("trace_identity", std::abs(tj + tm - tp - tq), tol::trace_integer);
    return r;
}

namespace {

double max_pairwise_distance(const std::vector<Projector>& xs) {
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = i + 1; j < xs.size(); ++j) {
            worst = std::max(worst, (xs[i].matrix() - xs[j].matrix()).norm());
        }
    }
    return worst;
}

}  // namespace

Report method_agreement_check(const Projector& p, const Projector& q) {
    require_same_dim(p, q, "method_agreement_check");
    std::vector<Projector> meets;
    for (auto m : {MeetJoinMethod::iterate, MeetJoinMethod::spectral, MeetJoinMethod::cs_based}) {
        meets.push_back(meet(p, q, m));
    }
    std::vector<Projector> joins;
    for (auto m : {MeetJoinMethod::iterate, MeetJoinMethod::spectral, MeetJoinMethod::pinv_join,
                   MeetJoinMethod::cs_based}) {
        joins.push_back(join(p, q, m));
    }
    Report r;
    r.check("meet_agreement", max_pairwise_distance(meets), tol::method_agreement);
    r.check("join_agreement", max_pairwise_distance(joins), tol::method_agreement);
    return r;
}

}  // namespace impq
