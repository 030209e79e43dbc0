#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "impq/campaign.hpp"
#include "impq/errors.hpp"
#include "impq/lattice.hpp"

using namespace impq;

namespace {

constexpr MeetJoinMethod kMeetMethods[] = {MeetJoinMethod::iterate, MeetJoinMethod::spectral,
                                           MeetJoinMethod::cs_based};
constexpr MeetJoinMethod kJoinMethods[] = {MeetJoinMethod::iterate, MeetJoinMethod::spectral,
                                           MeetJoinMethod::pinv_join, MeetJoinMethod::cs_based};

double dist(const Projector& a, const ComplexMatrix& b) { return (a.matrix() - b).norm(); }

ComplexVector vec(std::initializer_list<Complex> xs) {
    ComplexVector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (Complex x : xs) v[i++] = x;
    return v;
}

Projector span_of(std::initializer_list<ComplexVector> vs) {
    ComplexMatrix m(vs.begin()->size(), static_cast<Eigen::Index>(vs.size()));
    Eigen::Index i = 0;
    for (const auto& v : vs) m.col(i++) = v;
    return projector_from_columns(m);
}

}  // namespace

TEST_CASE("method names round-trip") {
    for (auto m : kJoinMethods) CHECK(parse_meet_join_method(to_string(m)) == m);
    CHECK_FALSE(parse_meet_join_method("bogus").has_value());
}

TEST_CASE("complement") {
    CHECK(dist(complement(Projector::zero(3)), identity(3)) == 0.0);
    const Projector z = gen::qubit_z();
    ComplexMatrix d(2, 2);
    d << 0, 0, 0, 1;
    CHECK(dist(complement(z), d) < 1e-15);
    CHECK(dist(complement(complement(z)), z.matrix()) == 0.0);
}

TEST_CASE("meet") {
    const Projector x = gen::qubit_x(), z = gen::qubit_z();
    for (auto m : kMeetMethods) {
        CAPTURE(to_string(m));
        CHECK(max_abs(meet(x, z, m).matrix()) < 1e-12);
        CHECK(dist(meet(x, x, m), x.matrix()) < 1e-12);
    }
    Rng rng(Seed{2});
    for (int k = 0; k < 10; ++k) {
        const auto [p, q] = gen::commuting_pair(rng, 5);
        for (auto m : kMeetMethods) CHECK(dist(meet(p, q, m), p.matrix() * q.matrix()) < 1e-10);
    }
    CHECK_THROWS_AS(meet(x, z, MeetJoinMethod::pinv_join), DomainError);
    CHECK_THROWS_AS(meet(x, Projector::identity(3)), DimensionMismatch);
}

TEST_CASE("join") {
    const Projector x = gen::qubit_x(), z = gen::qubit_z();
    for (auto m : kJoinMethods) {
        CAPTURE(to_string(m));
        CHECK(dist(join(x, z, m), identity(2)) < 1e-12);
        CHECK(dist(join(x, Projector::zero(2), m), x.matrix()) < 1e-12);
    }
    Rng rng(Seed{3});
    for (int k = 0; k < 10; ++k) {
        const auto [p, q] = gen::commuting_pair(rng, 5);
        const ComplexMatrix expected = p.matrix() + q.matrix() - p.matrix() * q.matrix();
        for (auto m : kJoinMethods) CHECK(dist(join(p, q, m), expected) < 1e-10);
    }
}

TEST_CASE("subspaces sharing a vector: reference intersection and span") {
    // Same fixture as tests/oracles/derive_values.py.
    const ComplexVector s = vec({1, Complex(0, 1), 0, 1, 0});
    const ComplexVector a = vec({1, 0, 2, 0, -1});
    const ComplexVector b = vec({0, 1, Complex(1, -1), 0, 2});
    const Projector p = span_of({a, s});
    const Projector q = span_of({b, s});
    const ComplexVector sn = s.normalized();
    for (auto m : kMeetMethods) CHECK(dist(meet(p, q, m), sn * sn.adjoint()) < 1e-10);
    for (auto m : kJoinMethods) {
        const Projector j = join(p, q, m);
        CHECK(j.rank() == 3);
        CHECK(dist(j, span_of({a, b, s}).matrix()) < 1e-10);
    }
}

TEST_CASE("iterated meet cannot resolve very small angles within its power cap") {
    // cos²θ^(2^20) stays far above the step tolerance for θ = 1e-3.
    const double t = 1e-3;
    ComplexMatrix v(2, 1);
    v << std::cos(t), std::sin(t);
    const Projector p = gen::qubit_z();
    const Projector q = projector_from_columns(v);
    CHECK_THROWS_AS(meet(p, q, MeetJoinMethod::iterate), ConvergenceError);
    CHECK(max_abs(meet(p, q, MeetJoinMethod::spectral).matrix()) < 1e-12);
}

TEST_CASE("order products") {
    Rng rng(Seed{4});
    const Projector q = haar_random_projector(4, 2, rng);
    CHECK(order_product_check(Projector::identity(4), q).all_pass());

    const auto [p, q2] = draw_separated_pair(6, rng);
    CHECK(order_product_check(p, meet(p, q2)).all_pass());

    for (int k = 0; k < 10; ++k) {
        const Projector r = haar_random_projector(7, 2, rng);
        const Projector s = haar_random_projector(7, 3, rng);
        CHECK(order_product_check(join(r, s), r).all_pass());
    }

    const Report bad = order_product_check(gen::qubit_x(), gen::qubit_z());
    CHECK_FALSE(bad.all_pass());
    REQUIRE(bad.checks().size() == 1);
    CHECK(bad.checks()[0].name == "precondition_order");
}

TEST_CASE("dimension identity") {
    const Projector x = gen::qubit_x(), z = gen::qubit_z();
    CHECK(dimension_identity_check(x, z).all_pass());
    CHECK(std::abs(join(x, z).matrix().trace().real() - 2.0) < 1e-12);
    CHECK(std::abs(meet(x, z).matrix().trace().real()) < 1e-12);
    CHECK(dimension_identity_check(x, x).all_pass());
    Rng rng(Seed{5});
    for (int k = 0; k < 20; ++k) {
        const auto [p, q] = draw_separated_pair(8, rng);
        const double lhs = join(p, q).matrix().trace().real() + meet(p, q).matrix().trace().real();
        CHECK(lhs == doctest::Approx(static_cast<double>(p.rank() + q.rank())).epsilon(1e-10));
        CHECK(dimension_identity_check(p, q).all_pass());
    }
}

TEST_CASE("property: methods agree on every rank combination up to dim 7") {
    Rng rng(Seed{6});
    for (int d = 2; d <= 7; ++d) {
        for (int rp = 0; rp <= d; ++rp) {
            for (int rq = 0; rq <= d; ++rq) {
                const Projector p = haar_random_projector(d, rp, rng);
                const Projector q = haar_random_projector(d, rq, rng);
                CAPTURE(d);
                CAPTURE(rp);
                CAPTURE(rq);
                const Report r = method_agreement_check(p, q);
                CHECK(r.all_pass());
                CHECK(dimension_identity_check(p, q).all_pass());
                // Lattice laws on the spectral route.
                const Projector m = meet(p, q), j = join(p, q);
                CHECK(dist(meet(q, p), m.matrix()) < 1e-9);
                CHECK(dist(join(q, p), j.matrix()) < 1e-9);
                CHECK(dist(meet(p, j), p.matrix()) < 1e-9);  // absorption
                CHECK(dist(join(p, m), p.matrix()) < 1e-9);
                CHECK(dist(complement(join(p, q)), meet(complement(p), complement(q)).matrix()) < 1e-9);
            }
        }
    }
}

TEST_CASE("property: nested and commuting pairs") {
    Rng rng(Seed{9});
    for (int k = 0; k < 25; ++k) {
        const int d = rng.uniform_int(2, 9);
        const auto [p, q] = gen::commuting_pair(rng, d);
        CHECK(method_agreement_check(p, q).all_pass());
        const Projector r = haar_random_projector(d, rng.uniform_int(0, d), rng);
        const Projector big = join(r, p);
        for (auto m : kMeetMethods) CHECK(dist(meet(big, r, m), r.matrix()) < 1e-9);
        for (auto m : kJoinMethods) CHECK(dist(join(big, r, m), big.matrix()) < 1e-9);
    }
}
