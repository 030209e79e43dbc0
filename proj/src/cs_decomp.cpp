#include "impq/cs_decomp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "impq/lattice.hpp"
#include "impq/matrix_json.hpp"

namespace impq {

namespace {

ComplexMatrix block_diagonal(const std::array<ComplexMatrix, 5>& blocks) {
    Eigen::Index n = 0;
    for (const auto& b : blocks) n += b.rows();
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    Eigen::Index at = 0;
    for (const auto& b : blocks) {
        out.block(at, at, b.rows(), b.cols()) = b;
        at += b.rows();
    }
    return out;
}

struct SplitSpectrum {
    std::vector<Eigen::Index> high;     // eigenvalue within delta of 1
    std::vector<Eigen::Index> low;      // eigenvalue within delta of 0
    std::vector<Eigen::Index> generic;  // descending eigenvalue
};

SplitSpectrum split(const RealVector& lambda, double delta) {
    SplitSpectrum out;
    for (Eigen::Index i = lambda.size(); i-- > 0;) {
        if (lambda[i] >= 1.0 - delta) {
            out.high.push_back(i);
        } else if (lambda[i] <= delta) {
            out.low.push_back(i);
        } else {
            out.generic.push_back(i);
        }
    }
    return out;
}

ComplexMatrix gather(const ComplexMatrix& vectors, const std::vector<Eigen::Index>& idx) {
    ComplexMatrix out(vectors.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = vectors.col(idx[k]);
    return out;
}

/// Eigen-decomposition of the compression B† P B for an orthonormal B.
Eigen::SelfAdjointEigenSolver<ComplexMatrix> compress(const ComplexMatrix& p, const ComplexMatrix& b) {
    if (b.cols() == 0) return {};
    ComplexMatrix a = b.adjoint() * p * b;
    return Eigen::SelfAdjointEigenSolver<ComplexMatrix>((a + a.adjoint()) * 0.5);
}

}  // namespace

Eigen::Index CSSignature::offset(int s) const noexcept {
    const auto sz = sizes();
    Eigen::Index at = 0;
    for (int k = 0; k < s; ++k) at += sz[static_cast<std::size_t>(k)];
    return at;
}

ComplexMatrix CSDecomposition::sector_basis(Sector s) const {
    const int k = static_cast<int>(s);
    return basis().middleCols(signature.offset(k), signature.sizes()[static_cast<std::size_t>(k)]);
}

ComplexMatrix CSDecomposition::p_hat() const {
    const Eigen::Index m = signature.m;
    ComplexMatrix out(2 * m, 2 * m);
    out << C * C, C * S, C * S, S * S;
    return out;
}

ComplexMatrix CSDecomposition::q_hat() const {
    const Eigen::Index m = signature.m;
    ComplexMatrix out = ComplexMatrix::Zero(2 * m, 2 * m);
    out.topLeftCorner(m, m).setIdentity();
    return out;
}

ComplexMatrix CSDecomposition::p_block() const {
    const auto& g = signature;
    return block_diagonal({p_hat(), identity(g.m1), ComplexMatrix::Zero(g.m2, g.m2), identity(g.m3),
                           ComplexMatrix::Zero(g.m4, g.m4)});
}

ComplexMatrix CSDecomposition::q_block() const {
    const auto& g = signature;
    return block_diagonal({q_hat(), identity(g.m1), identity(g.m2), ComplexMatrix::Zero(g.m3, g.m3),
                           ComplexMatrix::Zero(g.m4, g.m4)});
}

std::vector<double> CSDecomposition::angles() const {
    std::vector<double> out;
    for (Eigen::Index i = 0; i < signature.m; ++i) out.push_back(std::atan2(S(i, i).real(), C(i, i).real()));
    return out;
}

CSDecomposition cs_decompose(const Projector& p, const Projector& q, double tolerance) {
    if (p.dim() != q.dim()) throw DimensionMismatch("cs_decompose", p.dim(), q.dim());
    const Eigen::Index n = p.dim();
    const double floor_sin = std::sin(tol::angle_floor);
    const double delta = floor_sin * floor_sin;

    const ComplexMatrix vq = q.range_basis();
    const ComplexMatrix vq_perp = q.complement().range_basis();

    // On range(Q): eigenvalue cos^2 of the principal angle; 1 -> P∧Q, 0 -> P⊥∧Q.
    const auto on_q = compress(p.matrix(), vq);
    const SplitSpectrum sq = vq.cols() ? split(on_q.eigenvalues(), delta) : SplitSpectrum{};
    // On range(Q⊥): 1 -> P∧Q⊥, 0 -> P⊥∧Q⊥, the rest pairs with the generic part above.
    const auto on_q_perp = compress(p.matrix(), vq_perp);
    const SplitSpectrum sqp = vq_perp.cols() ? split(on_q_perp.eigenvalues(), delta) : SplitSpectrum{};

    const auto m = static_cast<Eigen::Index>(sq.generic.size());
    if (static_cast<Eigen::Index>(sqp.generic.size()) != m) {
        throw CertificationError("cs_decompose: generic sector halves differ in dimension",
                                 std::abs(static_cast<double>(sqp.generic.size()) - static_cast<double>(m)));
    }

    CSDecomposition dec;
    dec.signature = {m, static_cast<Eigen::Index>(sq.high.size()), static_cast<Eigen::Index>(sq.low.size()),
                     static_cast<Eigen::Index>(sqp.high.size()), static_cast<Eigen::Index>(sqp.low.size())};
    dec.C = ComplexMatrix::Zero(m, m);
    dec.S = ComplexMatrix::Zero(m, m);

    ComplexMatrix basis(n, n);
    if (m > 0) {
        const ComplexMatrix w = vq * gather(on_q.eigenvectors(), sq.generic);
        const ComplexMatrix& perp = q.complement_matrix();
        for (Eigen::Index i = 0; i < m; ++i) {
            const double c2 = on_q.eigenvalues()[sq.generic[static_cast<std::size_t>(i)]];
            dec.C(i, i) = std::sqrt(c2);
            dec.S(i, i) = std::sqrt(1.0 - c2);
            // Q⊥ P q_i = c s r_i with r_i the unit partner of q_i in range(Q⊥).
            ComplexVector r = perp * (p.matrix() * w.col(i));
            basis.col(i) = w.col(i);
            basis.col(m + i) = r / r.norm();
        }
    }
    Eigen::Index at = 2 * m;
    auto append = [&](const ComplexMatrix& cols) {
        basis.middleCols(at, cols.cols()) = cols;
        at += cols.cols();
    };
    if (vq.cols()) {
        append(vq * gather(on_q.eigenvectors(), sq.high));
        append(vq * gather(on_q.eigenvectors(), sq.low));
    }
    if (vq_perp.cols()) {
        append(vq_perp * gather(on_q_perp.eigenvectors(), sqp.high));
        append(vq_perp * gather(on_q_perp.eigenvectors(), sqp.low));
    }
    dec.U = basis.adjoint();

    const double unitarity = max_abs(dec.U * dec.U.adjoint() - identity(n));
    if (unitarity > tolerance) throw CertificationError("cs_decompose: basis is not orthonormal", unitarity);
    const double rp = max_abs(dec.U * p.matrix() * dec.U.adjoint() - dec.p_block());
    const double rq = max_abs(dec.U * q.matrix() * dec.U.adjoint() - dec.q_block());
    if (std::max(rp, rq) > tolerance) {
        throw CertificationError("cs_decompose: block form not reproduced", std::max(rp, rq));
    }
    return dec;
}

std::pair<Projector, Projector> reconstruct(const CSDecomposition& dec) {
    const ComplexMatrix p = dec.U.adjoint() * dec.p_block() * dec.U;
    const ComplexMatrix q = dec.U.adjoint() * dec.q_block() * dec.U;
    return {Projector::certify(p), Projector::certify(q)};
}

Report validate_decomposition(const CSDecomposition& dec) {
    Report r;
    const Eigen::Index m = dec.signature.m;
    r.check("unitarity", max_abs(dec.U.adjoint() * dec.U - identity(dec.dim())), 1e-10);
    r.check("signature_dimension", std::abs(static_cast<double>(dec.signature.dim() - dec.dim())), 0.0);
    r.check("pythagoras", max_abs(dec.C * dec.C + dec.S * dec.S - identity(m)), 1e-9);
    r.check("cs_commute", max_abs(commutator(dec.C, dec.S)), 1e-9);
    double floor_gap = 0.0;
    const double floor_sin = std::sin(tol::angle_floor);
    if (m > 0) {
        const double smallest = std::min(hermitian_eigenvalues(dec.C).minCoeff(),
                                         hermitian_eigenvalues(dec.S).minCoeff());
        floor_gap = std::max(0.0, floor_sin - smallest);
    }
    r.check("angle_floor", floor_gap, 0.0);
    return r;
}

Report generic_relations_check(const CSDecomposition& dec) {
    Report r;
    if (dec.signature.m == 0) {
        for (const char* name : {"generic_join_identity", "generic_meet_zero", "generic_trace_p",
                                 "generic_trace_q"}) {
            r.vacuous(name);
        }
        return r;
    }
    const Eigen::Index m = dec.signature.m;
    const Projector ph = Projector::certify(dec.p_hat());
    const Projector qh = Projector::certify(dec.q_hat());
    r.check("generic_join_identity", max_abs(join(ph, qh).matrix() - identity(2 * m)), 1e-9);
    r.check("generic_meet_zero", max_abs(meet(ph, qh).matrix()), 1e-9);
    r.check("generic_trace_p", std::abs(dec.p_hat().trace().real() - static_cast<double>(m)), 1e-9);
    r.check("generic_trace_q", std::abs(dec.q_hat().trace().real() - static_cast<double>(m)), 1e-9);
    return r;
}

CanonicalImprecise canonical_imprecise(const CSDecomposition& dec) {
    const auto& g = dec.signature;
    const ComplexMatrix diff = dec.p_hat() - dec.q_hat();
    const ComplexMatrix generic_upper = identity(2 * g.m) - diff * diff;
    auto zeros = [](Eigen::Index k) { return ComplexMatrix::Zero(k, k); };
    return {block_diagonal({generic_upper, identity(g.m1), zeros(g.m2), zeros(g.m3), zeros(g.m4)}),
            block_diagonal({zeros(2 * g.m), identity(g.m1), zeros(g.m2), zeros(g.m3), zeros(g.m4)})};
}

std::vector<double> principal_angles(const Projector& p, const Projector& q) {
    if (p.dim() != q.dim()) throw DimensionMismatch("principal_angles", p.dim(), q.dim());
    std::vector<double> out;
    if (p.rank() == 0 || q.rank() == 0) return out;
    const ComplexMatrix overlap = p.range_basis().adjoint() * q.range_basis();
    Eigen::JacobiSVD<ComplexMatrix> svd(overlap);
    const double half_pi = std::numbers::pi / 2.0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
        const double theta = std::acos(std::clamp(svd.singularValues()[i], 0.0, 1.0));
        if (theta > tol::angle_floor && theta < half_pi - tol::angle_floor) out.push_back(theta);
    }
    std::sort(out.begin(), out.end());
    return out;
}

nlohmann::json to_json(const CSDecomposition& dec) {
    const auto& g = dec.signature;
    return {{"signature", {{"m", g.m}, {"m1", g.m1}, {"m2", g.m2}, {"m3", g.m3}, {"m4", g.m4}}},
            {"U", matrix_to_json(dec.U)},
            {"C", matrix_to_json(dec.C)},
            {"S", matrix_to_json(dec.S)}};
}

}  // namespace impq
