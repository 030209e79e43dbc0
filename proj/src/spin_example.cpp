#include "impq/spin_example.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "impq/imprecise.hpp"
#include "impq/matrix_json.hpp"
#include "impq/nonlocality.hpp"

namespace impq {

namespace {

constexpr double kExact = 1e-12;

ComplexMatrix twelfths(const double (&m)[4][4]) {
    ComplexMatrix out(4, 4);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) out(i, j) = m[i][j] / 12.0;
    }
    return out;
}

ComplexMatrix reorder(const ComplexMatrix& m, const std::array<int, 4>& order) {
    ComplexMatrix out(4, 4);
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) out(a, b) = m(order[static_cast<std::size_t>(a)], order[static_cast<std::size_t>(b)]);
    }
    return out;
}

std::vector<double> spectrum(const ComplexMatrix& m) {
    const RealVector v = hermitian_eigenvalues(m);
    return {v.data(), v.data() + v.size()};
}

std::vector<SpinConvention> all_conventions() {
    std::vector<SpinConvention> out;
    for (int sx : {+1, -1}) {
        for (int sz : {+1, -1}) {
            std::array<int, 4> order{0, 1, 2, 3};
            do {
                out.push_back({sx, sz, order});
            } while (std::next_permutation(order.begin(), order.end()));
        }
    }
    return out;
}

ComplexMatrix state(double a, double b, double phi) {
    ComplexMatrix rho(2, 2);
    rho << a, b * std::polar(1.0, phi), b * std::polar(1.0, -phi), 1.0 - a;
    return rho;
}

}  // namespace

ComplexMatrix printed_upper_crossed() {
    static constexpr double m[4][4] = {{0, 0, 0, 0}, {0, 2, -1, -1}, {0, -1, 2, -1}, {0, -1, -1, 2}};
    return twelfths(m);
}

ComplexMatrix printed_upper_direct() {
    static constexpr double m[4][4] = {{1, -1, -1, 0}, {-1, 1, 1, 0}, {-1, 1, 1, 0}, {0, 0, 0, 3}};
    return twelfths(m);
}

SpinOperators spin_operators(const SpinConvention& c) {
    ComplexMatrix sx(2, 2), sz(2, 2);
    sx << 0, 1, 1, 0;
    sz << 1, 0, 0, -1;
    const ComplexMatrix id = identity(2);
    SpinOperators ops;
    ops.p = (id + static_cast<double>(c.sign_x) * sx) * 0.5;
    ops.q = (id + static_cast<double>(c.sign_z) * sz) * 0.5;
    const Projector p = Projector::certify(ops.p);
    const Projector q = Projector::certify(ops.q);
    ops.upper_single = upper_operator(p, q).matrix();
    const ComplexMatrix local = kron(ops.upper_single, ops.upper_single);
    const ComplexMatrix direct = upper_operator(kron(p, p), kron(q, q)).matrix();
    const ComplexMatrix crossed = upper_operator(kron(p, q), kron(q, p)).matrix();
    ops.upper_direct = reorder(direct, c.order);
    ops.upper_crossed = reorder(crossed, c.order);
    ops.gap_direct = reorder(local - direct, c.order);
    ops.gap_crossed = reorder(local - crossed, c.order);
    return ops;
}

WitnessValue separable_witness(double a, double b, double phi) {
    if (!(a >= 0.0 && a <= 1.0)) throw DomainError("separable_witness: a must lie in [0, 1]");
    if (!(b * b <= a * (1.0 - a) + 1e-15)) throw DomainError("separable_witness: b^2 exceeds a(1 - a)");
    if (!(phi >= 0.0 && phi < 2.0 * std::numbers::pi)) throw DomainError("separable_witness: phi outside [0, 2pi)");

    static const ComplexMatrix difference = [] {
        const SpinOperators ops = spin_operators(SpinConvention{kDocumentedConvention.sign_x,
                                                                kDocumentedConvention.sign_z,
                                                                {0, 1, 2, 3}});
        return ComplexMatrix(ops.upper_direct - ops.upper_crossed);
    }();
    const ComplexMatrix rho = state(a, b, phi);
    const ComplexMatrix rr = kron(rho, rho);
    WitnessValue w;
    w.numeric = difference.cwiseProduct(rr.transpose()).sum().real();
    const double s = 1.0 - 2.0 * a;
    w.closed_form = (s * s + 4.0 * b * b + 4.0 * b * s * std::cos(phi)) / 12.0;
    return w;
}

bool SpinReport::pass() const {
    return spectrum_error <= kExact && printed_crossed_residual <= kExact && printed_direct_residual <= kExact &&
           std::abs(trace_difference) <= kExact && pairing_max_abs > 1e-6 && witness_max_difference <= kExact &&
           witness_min_value >= -kExact;
}

SpinReport spin_half_report() {
    SpinReport r;
    r.convention = kDocumentedConvention;
    r.ops = spin_operators(kDocumentedConvention);
    r.spectrum_direct = spectrum(r.ops.upper_direct);
    r.spectrum_crossed = spectrum(r.ops.upper_crossed);
    const std::array<double, 4> expected{0.0, 0.0, 0.25, 0.25};
    for (std::size_t i = 0; i < 4; ++i) {
        r.spectrum_error = std::max({r.spectrum_error, std::abs(r.spectrum_direct[i] - expected[i]),
                                     std::abs(r.spectrum_crossed[i] - expected[i])});
    }
    const ComplexMatrix hh_crossed = printed_upper_crossed();
    const ComplexMatrix hh_direct = printed_upper_direct();
    r.printed_crossed_residual = max_abs(r.ops.upper_crossed - hh_crossed);
    r.printed_direct_residual = max_abs(r.ops.upper_direct - hh_direct);
    const ComplexMatrix d = r.ops.upper_direct - r.ops.upper_crossed;
    r.trace_difference = d.trace().real();
    r.pairing_max_abs = max_abs(d);
    r.commutator_norm = max_abs(commutator(r.ops.upper_direct, r.ops.upper_crossed));
    r.chain_gap_direct_residual = max_abs(r.ops.gap_direct - hh_crossed);
    r.chain_gap_crossed_residual = max_abs(r.ops.gap_crossed - hh_direct);

    r.printed_chain_best_residual = std::numeric_limits<double>::infinity();
    for (const auto& c : all_conventions()) {
        const SpinOperators ops = spin_operators(c);
        const double upper_res = std::max(max_abs(ops.upper_crossed - hh_crossed), max_abs(ops.upper_direct - hh_direct));
        const double gap_res = std::max(max_abs(ops.gap_direct - hh_crossed), max_abs(ops.gap_crossed - hh_direct));
        if (upper_res <= kExact) r.matching_conventions.push_back(c);
        if (gap_res <= kExact) r.gap_matching_conventions.push_back(c);
        r.printed_chain_best_residual = std::min(r.printed_chain_best_residual, std::max(upper_res, gap_res));
    }

    r.witness_min_value = std::numeric_limits<double>::infinity();
    for (int ia = 0; ia <= 10; ++ia) {
        const double a = ia / 10.0;
        const double bmax = std::sqrt(a * (1.0 - a));
        for (double b : {0.0, 0.5 * bmax, 0.99 * bmax}) {
            for (int k = 0; k < 12; ++k) {
                const double phi = 6.283 * k / 11.0;
                const WitnessValue w = separable_witness(a, b, phi);
                r.witness_max_difference = std::max(r.witness_max_difference, std::abs(w.numeric - w.closed_form));
                r.witness_min_value = std::min({r.witness_min_value, w.numeric, w.closed_form});
                ++r.witness_points;
            }
        }
    }
    return r;
}

nlohmann::json to_json(const SpinConvention& c) {
    return {{"sign_x", c.sign_x}, {"sign_z", c.sign_z}, {"order", c.order}};
}

nlohmann::json SpinReport::to_json() const {
    nlohmann::json matching = nlohmann::json::array();
    for (const auto& c : matching_conventions) matching.push_back(impq::to_json(c));
    nlohmann::json gap_matching = nlohmann::json::array();
    for (const auto& c : gap_matching_conventions) gap_matching.push_back(impq::to_json(c));
    return {
        {"convention", impq::to_json(convention)},
        {"matrices",
         {{"upper_direct", matrix_to_json(ops.upper_direct)},
          {"upper_crossed", matrix_to_json(ops.upper_crossed)},
          {"gap_direct", matrix_to_json(ops.gap_direct)},
          {"gap_crossed", matrix_to_json(ops.gap_crossed)}}},
        {"spectrum_direct", spectrum_direct},
        {"spectrum_crossed", spectrum_crossed},
        {"spectrum_error", spectrum_error},
        {"printed_crossed_residual", printed_crossed_residual},
        {"printed_direct_residual", printed_direct_residual},
        {"trace_difference", trace_difference},
        {"pairing_max_abs", pairing_max_abs},
        {"commutator_norm", commutator_norm},
        {"matching_conventions", std::move(matching)},
        {"printed_chain",
         {{"best_residual_over_conventions", printed_chain_best_residual},
          {"holds", printed_chain_best_residual <= kExact},
          {"gap_direct_vs_printed_crossed", chain_gap_direct_residual},
          {"gap_crossed_vs_printed_direct", chain_gap_crossed_residual},
          {"gap_matching_conventions", std::move(gap_matching)}}},
        {"witness",
         {{"points", witness_points}, {"max_abs_difference", witness_max_difference}, {"min_value", witness_min_value}}},
        {"pass", pass()},
    };
}

}  // namespace impq
