#include "impq/imprecise.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "impq/parallel.hpp"

namespace impq {

Projector lower_operator(const Projector& p, const Projector& q, MeetJoinMethod method) {
    return meet(p, q, method);
}

HermitianOperator upper_operator(const Projector& p, const Projector& q, MeetJoinMethod method) {
    if (p.dim() != q.dim()) throw DimensionMismatch("upper_operator", p.dim(), q.dim());
    const ComplexMatrix diff = p.matrix() - q.matrix();
    return HermitianOperator(join(p, q, method).matrix() - diff * diff);
}

ImpreciseOperatorPair imprecise_operators(const Projector& p, const Projector& q) {
    return {lower_operator(p, q), upper_operator(p, q)};
}

// ---------------------------------------------------------------------------

ProbabilityInterval::ProbabilityInterval(double lower, double upper) : lower_(lower), upper_(upper) {
    if (!std::isfinite(lower) || !std::isfinite(upper)) throw DomainError("ProbabilityInterval: non-finite bound");
    if (lower < 0.0 || upper > 1.0) throw DomainError("ProbabilityInterval: bounds outside [0, 1]");
    if (lower > upper + tol::interval_order) throw DomainError("ProbabilityInterval: lower exceeds upper");
}

namespace {

double clamp_probability(double v, const char* which) {
    if (v < -tol::interval_clamp || v > 1.0 + tol::interval_clamp) {
        throw Error(std::string("imprecise_probability: ") + which + " bound " + std::to_string(v) +
                    " outside [0, 1] beyond rounding");
    }
    return std::clamp(v, 0.0, 1.0);
}

}  // namespace

ProbabilityInterval imprecise_probability(const DensityMatrix& rho, const Projector& p, const Projector& q) {
    const auto ops = imprecise_operators(p, q);
    const double lo = clamp_probability(born_expectation(rho, ops.lower.hermitian()).value, "lower");
    const double hi = clamp_probability(born_expectation(rho, ops.upper).value, "upper");
    return {lo, hi};
}

bool interval_consistent(const ProbabilityInterval& fine, const ProbabilityInterval& coarse) {
    return coarse.lower() <= fine.lower() && coarse.upper() >= fine.upper();
}

// ---------------------------------------------------------------------------

ProjectorResolution::ProjectorResolution(std::vector<Projector> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw DomainError("ProjectorResolution: no parts");
    const Eigen::Index n = parts_.front().dim();
    ComplexMatrix sum = ComplexMatrix::Zero(n, n);
    double overlap = 0.0;
    for (std::size_t a = 0; a < parts_.size(); ++a) {
        if (parts_[a].dim() != n) throw DimensionMismatch("ProjectorResolution", n, parts_[a].dim());
        sum += parts_[a].matrix();
        for (std::size_t b = a + 1; b < parts_.size(); ++b) {
            overlap = std::max(overlap, max_abs(parts_[a].matrix() * parts_[b].matrix()));
        }
    }
    const double completeness = max_abs(sum - identity(n));
    if (completeness > 1e-10) throw CertificationError("ProjectorResolution: parts do not sum to I", completeness);
    if (overlap > 1e-10) throw CertificationError("ProjectorResolution: parts are not orthogonal", overlap);
}

ProjectorResolution ProjectorResolution::from_unitary(const ComplexMatrix& u, std::span<const Eigen::Index> sizes) {
    std::vector<Projector> parts;
    Eigen::Index at = 0;
    for (Eigen::Index s : sizes) {
        if (s < 0 || at + s > u.cols()) throw DomainError("ProjectorResolution::from_unitary: bad group sizes");
        parts.push_back(s == 0 ? Projector::zero(u.rows()) : Projector::from_orthonormal(u.middleCols(at, s)));
        at += s;
    }
    if (at != u.cols()) throw DomainError("ProjectorResolution::from_unitary: sizes do not cover the space");
    return ProjectorResolution(std::move(parts));
}

// ---------------------------------------------------------------------------

std::vector<DensityMatrix> spectral_mixtures(const Projector& p) {
    std::vector<DensityMatrix> out;
    const auto n = p.dim();
    const double rp = static_cast<double>(p.rank());
    const double rperp = static_cast<double>(n - p.rank());
    for (double alpha : {0.0, 0.3, 0.7, 1.0}) {
        if (alpha > 0.0 && p.rank() == 0) continue;
        if (alpha < 1.0 && p.rank() == n) continue;
        ComplexMatrix rho = ComplexMatrix::Zero(n, n);
        if (alpha > 0.0) rho += alpha / rp * p.matrix();
        if (alpha < 1.0) rho += (1.0 - alpha) / rperp * p.complement_matrix();
        out.emplace_back(rho);
    }
    return out;
}

namespace {

/// PρP + P⊥ρP⊥: the pinching of ρ by P, a state commuting with P.
DensityMatrix pinch(const DensityMatrix& rho, const Projector& p) {
    const ComplexMatrix& a = p.matrix();
    const ComplexMatrix& b = p.complement_matrix();
    const ComplexMatrix out = a * rho.matrix() * a + b * rho.matrix() * b;
    return DensityMatrix((out + out.adjoint()) * 0.5);
}

struct StateResidual {
    double consistency = 0.0;  // Eqs. for states commuting with P or Q
    double reality = 0.0;      // imaginary part of tr(ρPQ) for such states
    double born_order = 0.0;   // 0 <= p_lower <= p_upper <= 1
};

StateResidual evaluate_state(const DensityMatrix& rho, const ComplexMatrix& pq, const ComplexMatrix& sym,
                             const ComplexMatrix& lower, const ComplexMatrix& upper, bool commuting) {
    StateResidual r;
    auto tr = [&](const ComplexMatrix& m) { return rho.matrix().cwiseProduct(m.transpose()).sum(); };
    const double lo = tr(lower).real();
    const double hi = tr(upper).real();
    r.born_order = std::max({0.0, -lo, lo - hi, hi - 1.0});
    if (commuting) {
        const Complex joint = tr(pq);
        const double avg = tr(sym).real();
        r.reality = std::abs(joint.imag());
        r.consistency = std::max({0.0, lo - avg, avg - hi});
    }
    return r;
}

double commuting_reduction_residual(const Projector& a, const Projector& b) {
    const ComplexMatrix ab = a.matrix() * b.matrix();
    return std::max(max_abs(lower_operator(a, b).matrix() - ab), max_abs(upper_operator(a, b).matrix() - ab));
}

}  // namespace

Report validate_pair(const Projector& p, const Projector& q, std::span<const DensityMatrix> states,
                     const ProjectorResolution& resolution, const ComplexMatrix& u, std::size_t threads) {
    const Eigen::Index n = p.dim();
    if (q.dim() != n) throw DimensionMismatch("validate_pair", n, q.dim());
    if (resolution.dim() != n) throw DimensionMismatch("validate_pair(resolution)", n, resolution.dim());
    if (u.rows() != n || u.cols() != n) throw DimensionMismatch("validate_pair(unitary)", n, u.rows());
    for (const auto& rho : states) {
        if (rho.dim() != n) throw DimensionMismatch("validate_pair(state)", n, rho.dim());
    }
    const double unitarity = max_abs(u * u.adjoint() - identity(n));
    if (unitarity > 1e-10) throw CertificationError("validate_pair: U is not unitary", unitarity);

    const ComplexMatrix& pm = p.matrix();
    const ComplexMatrix& qm = q.matrix();
    const Projector lower = lower_operator(p, q);
    const HermitianOperator upper = upper_operator(p, q);
    const ComplexMatrix& lo = lower.matrix();
    const ComplexMatrix& hi = upper.matrix();
    const ComplexMatrix id = identity(n);

    Report r;

    // Ordering chain and symmetry.
    r.check("order_lower_nonnegative", loewner_violation(ComplexMatrix::Zero(n, n), lo), tol::axiom);
    r.check("order_lower_le_upper", loewner_violation(lo, hi), tol::axiom);
    r.check("order_upper_le_identity", loewner_violation(hi, id), tol::axiom);
    r.check("symmetry", std::max(max_abs(lower_operator(q, p).matrix() - lo), max_abs(upper_operator(q, p).matrix() - hi)),
            tol::axiom_symmetry);

    // Commutation with P and Q, and with each other.
    r.check("commute_lower_pq", std::max(max_abs(commutator(lo, pm)), max_abs(commutator(lo, qm))), tol::axiom);
    r.check("commute_upper_pq", std::max(max_abs(commutator(hi, pm)), max_abs(commutator(hi, qm))), tol::axiom);
    r.check("joint_commutation", max_abs(commutator(hi, lo)), tol::axiom);

    // Commuting pairs reduce to PQ: the pair itself when it commutes, plus
    // pairs that commute by construction.
    double reduction = std::max({commuting_reduction_residual(p, Projector::identity(n)),
                                 commuting_reduction_residual(p, p.complement()),
                                 commuting_reduction_residual(p, lower),
                                 commuting_reduction_residual(q, join(p, q))});
    if (max_abs(commutator(pm, qm)) <= 1e-12) reduction = std::max(reduction, commuting_reduction_residual(p, q));
    r.check("commuting_reduction", reduction, tol::axiom);

    // Sandwich: ω̲ <= PQP, QPQ <= ω̄.
    const ComplexMatrix pqp = pm * qm * pm;
    const ComplexMatrix qpq = qm * pm * qm;
    r.check("sandwich_lower", std::max(loewner_violation(lo, pqp), loewner_violation(lo, qpq)), tol::axiom);
    r.check("sandwich_upper", std::max(loewner_violation(pqp, hi), loewner_violation(qpq, hi)), tol::axiom);

    // Sub- and super-additivity over the resolution.
    ComplexMatrix upper_sum = ComplexMatrix::Zero(n, n);
    ComplexMatrix lower_sum = ComplexMatrix::Zero(n, n);
    for (const auto& part : resolution.parts()) {
        upper_sum += upper_operator(part, q).matrix();
        lower_sum += lower_operator(part, q).matrix();
    }
    r.check("subadditivity_upper", loewner_violation(qm, upper_sum), tol::axiom);
    r.check("superadditivity_lower", loewner_violation(lower_sum, qm), tol::axiom);

    // Unitary covariance.
    const Projector up = Projector::certify(u * pm * u.adjoint());
    const Projector uq = Projector::certify(u * qm * u.adjoint());
    r.check("covariance_lower", max_abs(u * lo * u.adjoint() - lower_operator(up, uq).matrix()), tol::axiom);
    r.check("covariance_upper", max_abs(u * hi * u.adjoint() - upper_operator(up, uq).matrix()), tol::axiom);

    // State-level checks. Commuting states: spectral mixtures of P and of Q,
    // and the pinchings of every supplied state by P and by Q.
    struct Job {
        DensityMatrix rho;
        bool commuting;
    };
    std::vector<Job> jobs;
    for (const auto& rho : spectral_mixtures(p)) jobs.push_back({rho, true});
    for (const auto& rho : spectral_mixtures(q)) jobs.push_back({rho, true});
    for (const auto& rho : states) {
        jobs.push_back({rho, false});
        jobs.push_back({pinch(rho, p), true});
        jobs.push_back({pinch(rho, q), true});
    }
    const ComplexMatrix pq = pm * qm;
    const ComplexMatrix sym = (pq + qm * pm) * 0.5;
    std::vector<StateResidual> results(jobs.size());
    parallel_for(jobs.size(), threads, [&](std::size_t i) {
        results[i] = evaluate_state(jobs[i].rho, pq, sym, lo, hi, jobs[i].commuting);
    });
    StateResidual worst;
    for (const auto& s : results) {
        worst.consistency = std::max(worst.consistency, s.consistency);
        worst.reality = std::max(worst.reality, s.reality);
        worst.born_order = std::max(worst.born_order, s.born_order);
    }
    r.check("born_interval_order", worst.born_order, tol::axiom);
    r.check("consistency_commuting_states", worst.consistency, tol::axiom);
    r.check("commuting_state_joint_real", worst.reality, tol::commuting_state_imag);

    // Monotonicity generally fails; record whether it holds for this pair.
    const double mono = min_eigenvalue(qm - hi);
    r.observe("monotonicity_upper_le_q", std::max(0.0, -mono), tol::axiom, mono >= -tol::axiom);
    return r;
}

}  // namespace impq
