#include "impq/nonlocality.hpp"

#include <algorithm>
#include <cmath>

#include "impq/imprecise.hpp"
#include "impq/lattice.hpp"
#include "impq/matrix_json.hpp"

namespace impq {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const Eigen::Index ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
    ComplexMatrix out(ra * rb, ca * cb);
    for (Eigen::Index i = 0; i < ra; ++i) {
        for (Eigen::Index j = 0; j < ca; ++j) out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
    }
    return out;
}

Projector kron(const Projector& a, const Projector& b) {
    const Eigen::Index n = a.dim() * b.dim();
    if (a.rank() == 0 || b.rank() == 0) return Projector::zero(n);
    if (a.rank() == a.dim() && b.rank() == b.dim()) return Projector::identity(n);
    return Projector::from_orthonormal(kron(a.range_basis(), b.range_basis()));
}

ComplexMatrix swap_kron(const ComplexMatrix& a, const ComplexMatrix& b) { return kron(b, a); }

ComplexMatrix swap_unitary(Eigen::Index dim_a, Eigen::Index dim_b) {
    const Eigen::Index n = dim_a * dim_b;
    ComplexMatrix w = ComplexMatrix::Zero(n, n);
    // |i>|k> in A⊗B  ->  |k>|i> in B⊗A
    for (Eigen::Index i = 0; i < dim_a; ++i) {
        for (Eigen::Index k = 0; k < dim_b; ++k) w(k * dim_a + i, i * dim_b + k) = 1.0;
    }
    return w;
}

// ---------------------------------------------------------------------------

TwoParticleScene::TwoParticleScene(Projector p1, Projector q1, Projector p2, Projector q2)
    : p1_(std::move(p1)), q1_(std::move(q1)), p2_(std::move(p2)), q2_(std::move(q2)) {
    if (p1_.dim() != q1_.dim()) throw DimensionMismatch("TwoParticleScene(particle 1)", p1_.dim(), q1_.dim());
    if (p2_.dim() != q2_.dim()) throw DimensionMismatch("TwoParticleScene(particle 2)", p2_.dim(), q2_.dim());
}

TwoParticleScene& TwoParticleScene::with_decompositions(CSDecomposition cs1, CSDecomposition cs2) {
    if (cs1.dim() != dim1()) throw DimensionMismatch("with_decompositions(1)", dim1(), cs1.dim());
    if (cs2.dim() != dim2()) throw DimensionMismatch("with_decompositions(2)", dim2(), cs2.dim());
    cs1_ = std::move(cs1);
    cs2_ = std::move(cs2);
    return *this;
}

CSDecomposition TwoParticleScene::decomposition1() const { return cs1_ ? *cs1_ : cs_decompose(p1_, q1_); }
CSDecomposition TwoParticleScene::decomposition2() const { return cs2_ ? *cs2_ : cs_decompose(p2_, q2_); }

// ---------------------------------------------------------------------------

ComplexMatrix SectorLayout::arrange(const ComplexMatrix& x) const {
    const auto n = static_cast<Eigen::Index>(order.size());
    ComplexMatrix out(n, n);
    for (Eigen::Index b = 0; b < n; ++b) {
        for (Eigen::Index a = 0; a < n; ++a) {
            out(a, b) = x(order[static_cast<std::size_t>(a)], order[static_cast<std::size_t>(b)]);
        }
    }
    return out;
}

SectorLayout sector_layout(const CSSignature& a, const CSSignature& b) {
    SectorLayout layout;
    const Eigen::Index d2 = b.dim();
    const auto sa = a.sizes();
    const auto sb = b.sizes();
    for (int s1 = 0; s1 < 5; ++s1) {
        for (int s2 = 0; s2 < 5; ++s2) {
            const Eigen::Index n1 = sa[static_cast<std::size_t>(s1)];
            const Eigen::Index n2 = sb[static_cast<std::size_t>(s2)];
            if (n1 == 0 || n2 == 0) continue;
            layout.blocks.push_back({s1, s2, static_cast<Eigen::Index>(layout.order.size()), n1 * n2});
            for (Eigen::Index i = 0; i < n1; ++i) {
                for (Eigen::Index j = 0; j < n2; ++j) {
                    layout.order.push_back((a.offset(s1) + i) * d2 + b.offset(s2) + j);
                }
            }
        }
    }
    return layout;
}

namespace {

ComplexMatrix sector_block(const ComplexMatrix& x, const CSSignature& sig, int s) {
    const Eigen::Index at = sig.offset(s);
    const Eigen::Index n = sig.sizes()[static_cast<std::size_t>(s)];
    return x.block(at, at, n, n);
}

/// ω̄(P̂1⊥ ⊗ Q̂2⊥, Q̂1⊥ ⊗ P̂2⊥) on the generic blocks.
HermitianOperator generic_gap_block(const CSDecomposition& cs1, const CSDecomposition& cs2) {
    const ComplexMatrix i1 = identity(2 * cs1.signature.m);
    const ComplexMatrix i2 = identity(2 * cs2.signature.m);
    const Projector a = Projector::certify(kron(i1 - cs1.p_hat(), i2 - cs2.q_hat()));
    const Projector b = Projector::certify(kron(i1 - cs1.q_hat(), i2 - cs2.p_hat()));
    return upper_operator(a, b);
}

double max_abs_outside(const ComplexMatrix& x, Eigen::Index corner) {
    ComplexMatrix y = x;
    y.topLeftCorner(corner, corner).setZero();
    return max_abs(y);
}

}  // namespace

nlohmann::json GapReport::to_json() const {
    nlohmann::json sectors = nlohmann::json::array();
    static constexpr const char* names[] = {"generic", "m1", "m2", "m3", "m4"};
    for (const auto& b : sector_map) {
        sectors.push_back({{"s1", names[b.s1]}, {"s2", names[b.s2]}, {"offset", b.offset}, {"size", b.size}});
    }
    return {{"gap", matrix_to_json(gap.matrix())},
            {"block_form", matrix_to_json(block_form.matrix())},
            {"sector_map", std::move(sectors)},
            {"residual", residual},
            {"off_block_residual", off_block_residual},
            {"generic_block_residual", generic_block_residual},
            {"min_eigenvalue", min_eigenvalue},
            {"max_abs", max_abs}};
}

GapReport upper_gap(const TwoParticleScene& scene) {
    const CSDecomposition cs1 = scene.decomposition1();
    const CSDecomposition cs2 = scene.decomposition2();
    const ComplexMatrix local = kron(upper_operator(scene.p1(), scene.q1()).matrix(),
                                     upper_operator(scene.p2(), scene.q2()).matrix());
    const HermitianOperator joint = upper_operator(kron(scene.p1(), scene.p2()), kron(scene.q1(), scene.q2()));
    const HermitianOperator gap = HermitianOperator::symmetrized(local - joint.matrix());

    const ComplexMatrix u = kron(cs1.U, cs2.U);
    const SectorLayout layout = sector_layout(cs1.signature, cs2.signature);
    const ComplexMatrix transported = layout.arrange(u * gap.matrix() * u.adjoint());

    const Eigen::Index n = gap.dim();
    ComplexMatrix block = ComplexMatrix::Zero(n, n);
    Eigen::Index corner = 0;
    double generic_residual = 0.0;
    if (cs1.signature.m > 0 && cs2.signature.m > 0) {
        const HermitianOperator g = generic_gap_block(cs1, cs2);
        corner = g.dim();
        block.topLeftCorner(corner, corner) = g.matrix();
        generic_residual = max_abs(transported.topLeftCorner(corner, corner) - g.matrix());
    }

    GapReport report{gap, HermitianOperator::symmetrized(block), layout.blocks, 0.0, 0.0, 0.0, 0.0, 0.0};
    report.residual = max_abs(transported - block);
    report.off_block_residual = max_abs_outside(transported, corner);
    report.generic_block_residual = generic_residual;
    report.min_eigenvalue = min_eigenvalue(gap.matrix());
    report.max_abs = max_abs(gap.matrix());
    return report;
}

Report lower_factorization_check(const TwoParticleScene& scene) {
    const ComplexMatrix local =
        kron(lower_operator(scene.p1(), scene.q1()).matrix(), lower_operator(scene.p2(), scene.q2()).matrix());
    const Projector direct = lower_operator(kron(scene.p1(), scene.p2()), kron(scene.q1(), scene.q2()));
    const Projector crossed = lower_operator(kron(scene.p1(), scene.q2()), kron(scene.q1(), scene.p2()));
    Report r;
    r.check("lower_tensor_factorization", max_abs(direct.matrix() - local), tol::lower_locality);
    r.check("lower_pairing_invariance", max_abs(crossed.matrix() - local), tol::lower_locality);
    return r;
}

PairingDifference pairing_difference(const TwoParticleScene& scene) {
    const HermitianOperator a = upper_operator(kron(scene.p1(), scene.p2()), kron(scene.q1(), scene.q2()));
    const HermitianOperator b = upper_operator(kron(scene.p1(), scene.q2()), kron(scene.q1(), scene.p2()));
    const HermitianOperator d = HermitianOperator::symmetrized(a.matrix() - b.matrix());
    return {d, max_abs(d.matrix()), d.matrix().trace().real()};
}

// ---------------------------------------------------------------------------

namespace {

void generic_identities(Report& r, const CSDecomposition& cs1, const CSDecomposition& cs2) {
    const Eigen::Index m1 = cs1.signature.m;
    const Eigen::Index m2 = cs2.signature.m;
    const ComplexMatrix i1 = identity(2 * m1);
    const ComplexMatrix i2 = identity(2 * m2);
    const ComplexMatrix i12 = identity(4 * m1 * m2);
    const ComplexMatrix p1 = cs1.p_hat(), q1 = cs1.q_hat(), p2 = cs2.p_hat(), q2 = cs2.q_hat();
    const ComplexMatrix p1c = i1 - p1, q1c = i1 - q1, p2c = i2 - p2, q2c = i2 - q2;

    const ComplexMatrix pp = kron(p1, p2);
    const ComplexMatrix qq = kron(q1, q2);
    const ComplexMatrix pq_c = kron(p1c, q2c);
    const ComplexMatrix qp_c = kron(q1c, p2c);
    const ComplexMatrix d1 = p1 - q1;
    const ComplexMatrix d2 = p2 - q2;
    const ComplexMatrix u1 = i1 - d1 * d1;
    const ComplexMatrix u2 = i2 - d2 * d2;

    // Generic upper operators have the I - (P̂ - Q̂)² form.
    r.check("generic_upper_form",
            std::max(max_abs(upper_operator(Projector::certify(p1), Projector::certify(q1)).matrix() - u1),
                     max_abs(upper_operator(Projector::certify(p2), Projector::certify(q2)).matrix() - u2)),
            tol::appendix);

    // (P̂1⊥⊗Q̂2⊥ - Q̂1⊥⊗P̂2⊥)² = I - (P̂1⊗P̂2 - Q̂1⊗Q̂2)² - (I-(P̂1-Q̂1)²)⊗(I-(P̂2-Q̂2)²)
    const ComplexMatrix lhs = (pq_c - qp_c) * (pq_c - qp_c);
    const ComplexMatrix rhs = i12 - (pp - qq) * (pp - qq) - kron(u1, u2);
    r.check("square_identity", max_abs(lhs - rhs), tol::appendix);

    const Projector ppP = Projector::certify(pp);
    const Projector qqP = Projector::certify(qq);
    const Projector pqcP = Projector::certify(pq_c);
    const Projector qpcP = Projector::certify(qp_c);
    const Projector join_a = join(ppP, qqP);
    const Projector join_b = join(pqcP, qpcP);

    // The two joins are complementary.
    r.check("complementary_joins", max_abs(join_a.matrix() + join_b.matrix() - i12), tol::appendix);

    // Orthogonality of the four products behind the complementary joins.
    r.check("orthogonal_products",
            std::max({max_abs(pp * pq_c), max_abs(qq * pq_c), max_abs(pp * qp_c), max_abs(qq * qp_c)}),
            tol::appendix);

    // Both meets vanish, and so does the product of the local meets.
    const ComplexMatrix local_meets = kron(meet(Projector::certify(p1), Projector::certify(q1)).matrix(),
                                           meet(Projector::certify(p2), Projector::certify(q2)).matrix());
    r.check("vanishing_meets",
            std::max({max_abs(meet(ppP, qqP).matrix()), max_abs(local_meets), max_abs(meet(pqcP, qpcP).matrix())}),
            tol::appendix);

    // Trace bookkeeping: tr = m1 m2 for the products and 2 m1 m2 for the joins.
    const double mm = static_cast<double>(m1 * m2);
    r.check("trace_products",
            std::max(std::abs(pp.trace().real() - mm), std::abs(qq.trace().real() - mm)), tol::appendix);
    r.check("trace_joins",
            std::max(std::abs(join_a.matrix().trace().real() - 2.0 * mm),
                     std::abs(join_b.matrix().trace().real() - 2.0 * mm)),
            tol::appendix);
    Report dims_a = dimension_identity_check(ppP, qqP);
    Report dims_b = dimension_identity_check(pqcP, qpcP);
    double dim_res = 0.0;
    for (const auto* rep : {&dims_a, &dims_b}) {
        for (const auto& c : rep->checks()) dim_res = std::max(dim_res, c.residual);
    }
    r.check("trace_identity_products", dim_res, tol::appendix);

    // Generic block of the gap: ω̄(P̂1⊗P̂2, Q̂1⊗Q̂2) - ω̄(P̂1,Q̂1)⊗ω̄(P̂2,Q̂2)
    // expanded term by term, and its negative equal to ω̄(P̂1⊥⊗Q̂2⊥, Q̂1⊥⊗P̂2⊥).
    const ComplexMatrix expanded = join_a.matrix() - (pp - qq) * (pp - qq) - kron(u1, u2);
    const ComplexMatrix direct = upper_operator(ppP, qqP).matrix() - kron(u1, u2);
    r.check("generic_difference_expansion", max_abs(direct - expanded), tol::appendix);
    r.check("generic_gap_form", max_abs(-expanded - upper_operator(pqcP, qpcP).matrix()), tol::appendix);
}

/// Block-diagonal of per-block projectors built from (x[s1] op y[s2]).
template <class Op>
ComplexMatrix blockwise(const SectorLayout& layout, const CSSignature& sig1, const CSSignature& sig2,
                        const ComplexMatrix& x, const ComplexMatrix& y, Op op) {
    const auto n = static_cast<Eigen::Index>(layout.order.size());
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (const auto& b : layout.blocks) {
        out.block(b.offset, b.offset, b.size, b.size) =
            op(sector_block(x, sig1, b.s1), sector_block(y, sig2, b.s2));
    }
    return out;
}

void block_calculus(Report& r, const TwoParticleScene& scene, const CSDecomposition& cs1,
                    const CSDecomposition& cs2) {
    const CSSignature& sig1 = cs1.signature;
    const CSSignature& sig2 = cs2.signature;
    const Eigen::Index d1 = cs1.dim(), d2 = cs2.dim();
    const SectorLayout layout = sector_layout(sig1, sig2);
    const ComplexMatrix x1 = cs1.p_block(), y1 = cs1.q_block();
    const ComplexMatrix x2 = cs2.p_block(), y2 = cs2.q_block();
    auto tensor = [](const ComplexMatrix& a, const ComplexMatrix& b) { return kron(a, b); };
    auto bullet = [](const ComplexMatrix& a, const ComplexMatrix& b) { return swap_kron(a, b); };

    // dg(A,B) ⊗ dg(C,D) rearranges into dg(A⊗C, A⊗D, B⊗C, B⊗D).
    r.check("block_tensor_rearrangement",
            std::max(max_abs(layout.arrange(kron(x1, x2)) - blockwise(layout, sig1, sig2, x1, x2, tensor)),
                     max_abs(layout.arrange(kron(y1, y2)) - blockwise(layout, sig1, sig2, y1, y2, tensor))),
            tol::appendix);

    // Swapped product: W (A⊗B) W† = A•B, and the blockwise swaps assemble into a
    // block-diagonal unitary relating the two arrangements.
    const ComplexMatrix w = swap_unitary(d1, d2);
    r.check("swap_product", max_abs(w * kron(x1, x2) * w.adjoint() - swap_kron(x1, x2)), tol::appendix);

    SectorLayout swapped;
    swapped.blocks = layout.blocks;
    for (const auto& b : layout.blocks) {
        const Eigen::Index n1 = sig1.sizes()[static_cast<std::size_t>(b.s1)];
        const Eigen::Index n2 = sig2.sizes()[static_cast<std::size_t>(b.s2)];
        for (Eigen::Index j = 0; j < n2; ++j) {
            for (Eigen::Index i = 0; i < n1; ++i) {
                swapped.order.push_back((sig2.offset(b.s2) + j) * d1 + sig1.offset(b.s1) + i);
            }
        }
    }
    r.check("block_bullet_rearrangement",
            max_abs(swapped.arrange(swap_kron(x1, x2)) - blockwise(layout, sig1, sig2, x1, x2, bullet)),
            tol::appendix);
    const auto n = static_cast<Eigen::Index>(layout.order.size());
    ComplexMatrix pi(n, n), pi_swapped(n, n);
    pi.setZero();
    pi_swapped.setZero();
    for (Eigen::Index k = 0; k < n; ++k) {
        pi(k, layout.order[static_cast<std::size_t>(k)]) = 1.0;
        pi_swapped(k, swapped.order[static_cast<std::size_t>(k)]) = 1.0;
    }
    ComplexMatrix block_swaps = ComplexMatrix::Zero(n, n);
    for (const auto& b : layout.blocks) {
        block_swaps.block(b.offset, b.offset, b.size, b.size) =
            swap_unitary(sig1.sizes()[static_cast<std::size_t>(b.s1)], sig2.sizes()[static_cast<std::size_t>(b.s2)]);
    }
    r.check("block_diagonal_swap", max_abs(pi_swapped * w * pi.transpose() - block_swaps), tol::appendix);

    // Meet and join act blockwise on block-diagonal projectors, on each
    // particle and on the arranged product pair.
    auto lattice_blockwise = [&](const CSSignature& sig, const ComplexMatrix& x, const ComplexMatrix& y) {
        double res = 0.0;
        const Projector px = Projector::certify(x), py = Projector::certify(y);
        const ComplexMatrix m = meet(px, py).matrix();
        const ComplexMatrix j = join(px, py).matrix();
        for (int s = 0; s < 5; ++s) {
            if (sig.sizes()[static_cast<std::size_t>(s)] == 0) continue;
            const Projector bx = Projector::certify(sector_block(x, sig, s));
            const Projector by = Projector::certify(sector_block(y, sig, s));
            res = std::max(res, max_abs(sector_block(m, sig, s) - meet(bx, by).matrix()));
            res = std::max(res, max_abs(sector_block(j, sig, s) - join(bx, by).matrix()));
        }
        return res;
    };
    r.check("block_meet_join", std::max(lattice_blockwise(sig1, x1, y1), lattice_blockwise(sig2, x2, y2)),
            tol::appendix);

    // Derivation chain on the product space: the arranged P1⊗P2, Q1⊗Q2 are
    // block diagonal, so their join and upper operator are computed blockwise.
    const Projector pp = Projector::certify(layout.arrange(kron(x1, x2)));
    const Projector qq = Projector::certify(layout.arrange(kron(y1, y2)));
    const ComplexMatrix join_full = join(pp, qq).matrix();
    const ComplexMatrix upper_full = upper_operator(pp, qq).matrix();
    double chain_join = 0.0, chain_upper = 0.0;
    for (const auto& b : layout.blocks) {
        const Projector bp = Projector::certify(pp.matrix().block(b.offset, b.offset, b.size, b.size));
        const Projector bq = Projector::certify(qq.matrix().block(b.offset, b.offset, b.size, b.size));
        chain_join = std::max(chain_join,
                              max_abs(join_full.block(b.offset, b.offset, b.size, b.size) - join(bp, bq).matrix()));
        chain_upper = std::max(chain_upper, max_abs(upper_full.block(b.offset, b.offset, b.size, b.size) -
                                                    upper_operator(bp, bq).matrix()));
    }
    // Off-block entries of the product join must vanish.
    ComplexMatrix off = join_full;
    for (const auto& b : layout.blocks) off.block(b.offset, b.offset, b.size, b.size).setZero();
    chain_join = std::max(chain_join, max_abs(off));
    r.check("chain_join_blockwise", chain_join, tol::appendix);
    r.check("chain_upper_blockwise", chain_upper, tol::appendix);

    // Covariance links the arranged operator back to the original product pair.
    const ComplexMatrix u = kron(cs1.U, cs2.U);
    const ComplexMatrix original = upper_operator(kron(scene.p1(), scene.p2()), kron(scene.q1(), scene.q2())).matrix();
    r.check("chain_covariance", max_abs(layout.arrange(u * original * u.adjoint()) - upper_full), tol::appendix);
}

}  // namespace

Report verify_appendix(const TwoParticleScene& scene) {
    const CSDecomposition cs1 = scene.decomposition1();
    const CSDecomposition cs2 = scene.decomposition2();
    Report r;
    if (cs1.signature.m > 0 && cs2.signature.m > 0) {
        generic_identities(r, cs1, cs2);
    } else {
        for (const char* name : {"generic_upper_form", "square_identity", "complementary_joins", "orthogonal_products",
                                 "vanishing_meets", "trace_products", "trace_joins", "trace_identity_products",
                                 "generic_difference_expansion", "generic_gap_form"}) {
            r.vacuous(name);
        }
    }
    block_calculus(r, scene, cs1, cs2);
    return r;
}

}  // namespace impq
