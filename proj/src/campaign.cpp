#include "impq/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "impq/cs_decomp.hpp"
#include "impq/errors.hpp"
#include "impq/imprecise.hpp"
#include "impq/lattice.hpp"
#include "impq/nonlocality.hpp"
#include "impq/parallel.hpp"
#include "impq/spin_example.hpp"

namespace impq {

namespace {

using nlohmann::json;

constexpr int kMaxDraws = 1000;
constexpr double kSpinExact = 1e-12;
constexpr double kGapNonzero = 1e-6;
constexpr double kRoundTrip = 1e-9;

std::string seed_string(Seed s) { return std::to_string(s.master); }

// Variants cycle so each dimension pair sees all three in a fixed proportion:
// three generic samples, then one commuting, then one with P2 = Q2 = I.
SampleVariant variant_for(std::size_t k) {
    switch (k % 5) {
        case 3: return SampleVariant::commuting;
        case 4: return SampleVariant::identity;
        default: return SampleVariant::generic;
    }
}

std::pair<Projector, Projector> draw_commuting_pair(Eigen::Index dim, Rng& rng) {
    const ComplexMatrix u = haar_random_unitary(dim, rng);
    const int d = static_cast<int>(dim);
    const int rp = rng.uniform_int(1, d - 1);
    const int rq = rng.uniform_int(1, d - 1);
    const int shift = rng.uniform_int(0, d - rq);
    return {Projector::from_orthonormal(u.leftCols(rp)), Projector::from_orthonormal(u.middleCols(shift, rq))};
}

std::vector<DensityMatrix> draw_states(Eigen::Index dim, Rng& rng) {
    std::vector<DensityMatrix> out;
    out.push_back(random_density(dim, 1, rng));
    out.push_back(random_density(dim, dim, rng));
    out.push_back(random_density(dim, rng.uniform_int(1, static_cast<int>(dim)), rng));
    return out;
}

ProjectorResolution draw_resolution(Eigen::Index dim, Rng& rng) {
    const ComplexMatrix u = haar_random_unitary(dim, rng);
    std::vector<Eigen::Index> sizes;
    if (dim == 2) {
        sizes = {1, 1};
    } else {
        const int d = static_cast<int>(dim);
        const int a = rng.uniform_int(1, d - 2);
        const int b = rng.uniform_int(1, d - a - 1);
        sizes = {a, b, d - a - b};
    }
    return ProjectorResolution::from_unitary(u, sizes);
}

void side_checks(Report& out, const std::string& prefix, const CampaignConfig& cfg, const Projector& p,
                 const Projector& q, const CSDecomposition& dec, Rng& rng, bool& monotonicity_fails) {
    // Random draws happen unconditionally so the stream, and with it every
    // later draw, does not depend on which check groups are selected.
    const auto states = draw_states(p.dim(), rng);
    const auto resolution = draw_resolution(p.dim(), rng);
    const ComplexMatrix u = haar_random_unitary(p.dim(), rng);

    if (cfg.runs("lattice")) {
        const Projector lo = meet(p, q);
        const Projector hi = join(p, q);
        out.merge(order_product_check(p, lo), prefix + "lattice.meet_below_p.");
        out.merge(order_product_check(q, lo), prefix + "lattice.meet_below_q.");
        out.merge(order_product_check(hi, p), prefix + "lattice.p_below_join.");
        out.merge(order_product_check(hi, q), prefix + "lattice.q_below_join.");
        out.merge(dimension_identity_check(p, q), prefix + "lattice.");
    }
    if (cfg.runs("methods")) out.merge(method_agreement_check(p, q), prefix + "methods.");
    if (cfg.runs("cs")) {
        out.merge(validate_decomposition(dec), prefix + "cs.");
        out.merge(generic_relations_check(dec), prefix + "cs.");
        const auto [p_back, q_back] = reconstruct(dec);
        out.check(prefix + "cs.roundtrip",
                  std::max(max_abs(p_back.matrix() - p.matrix()), max_abs(q_back.matrix() - q.matrix())), kRoundTrip);
    }
    if (cfg.runs("axioms")) {
        const Report axioms = validate_pair(p, q, states, resolution, u);
        if (const CheckResult* mono = axioms.find("monotonicity_upper_le_q"); mono && !mono->pass) {
            monotonicity_fails = true;
        }
        out.merge(axioms, prefix + "axioms.");
    }
}

Report apply_overrides(const Report& in, const std::map<std::string, double>& overrides) {
    if (overrides.empty()) return in;
    Report out;
    for (const CheckResult& c : in.checks()) {
        if (c.observation) {
            out.observe(c.name, c.residual, c.tolerance, c.pass);
            continue;
        }
        const auto leaf = c.name.substr(c.name.rfind('.') + 1);
        auto it = overrides.find(c.name);
        if (it == overrides.end()) it = overrides.find(leaf);
        out.check(c.name, c.residual, it == overrides.end() ? c.tolerance : it->second);
    }
    return out;
}

// Lower bounds are encoded as shortfall residuals against tolerance 0.
double shortfall(double value, double bound) { return std::max(0.0, bound - value); }

Report spin_checks() {
    const SpinReport s = spin_half_report();
    Report r;
    r.check("spectra", s.spectrum_error, kSpinExact);
    r.check("printed_upper_crossed", s.printed_crossed_residual, kSpinExact);
    r.check("printed_upper_direct", s.printed_direct_residual, kSpinExact);
    r.check("trace_difference", std::abs(s.trace_difference), kSpinExact);
    r.check("pairing_difference_nonzero", shortfall(s.pairing_max_abs, kGapNonzero), 0.0);
    r.check("witness_closed_form", s.witness_max_difference, kSpinExact);
    r.check("witness_nonnegative", std::max(0.0, -s.witness_min_value), kSpinExact);
    r.observe("printed_chain_holds", s.printed_chain_best_residual, kSpinExact,
              s.printed_chain_best_residual <= kSpinExact);
    return r;
}

struct Existence {
    std::size_t monotonicity_witnesses = 0;
    std::size_t generic_scenes = 0;
    std::size_t generic_scenes_nonzero_gap = 0;
    double min_generic_gap = 0.0;
    double max_generic_gap = 0.0;
};

Existence existence_of(const std::vector<SampleOutcome>& samples) {
    Existence e;
    e.min_generic_gap = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) {
        if (!s.error.empty()) continue;
        if (s.monotonicity_fails) ++e.monotonicity_witnesses;
        if (s.m1 > 0 && s.m2 > 0) {
            ++e.generic_scenes;
            if (s.gap_max_abs > kGapNonzero) ++e.generic_scenes_nonzero_gap;
            e.min_generic_gap = std::min(e.min_generic_gap, s.gap_max_abs);
            e.max_generic_gap = std::max(e.max_generic_gap, s.gap_max_abs);
        }
    }
    if (e.generic_scenes == 0) e.min_generic_gap = 0.0;
    return e;
}

const json& require(const json& j, const char* key) {
    if (!j.contains(key)) throw SchemaError(std::string("campaign report: missing key '") + key + "'");
    return j.at(key);
}

}  // namespace

std::string_view to_string(SampleVariant v) noexcept {
    switch (v) {
        case SampleVariant::generic: return "generic";
        case SampleVariant::commuting: return "commuting";
        case SampleVariant::identity: return "identity";
    }
    return "unknown";
}

std::optional<SampleVariant> parse_sample_variant(std::string_view s) noexcept {
    for (auto v : {SampleVariant::generic, SampleVariant::commuting, SampleVariant::identity}) {
        if (to_string(v) == s) return v;
    }
    return std::nullopt;
}

void CampaignConfig::validate() const {
    if (dims.empty()) throw DomainError("config: dims must not be empty");
    for (const auto& d : dims) {
        if (d.d1 < 2 || d.d2 < 2) throw DomainError("config: every dimension must be >= 2");
        if (d.d1 * d.d2 > product_dim_cap) {
            throw DomainError("config: product dimension " + std::to_string(d.d1 * d.d2) + " exceeds cap " +
                              std::to_string(product_dim_cap));
        }
    }
    if (samples_per_dim == 0) throw DomainError("config: samples_per_dim must be positive");
    if (product_dim_cap < 4) throw DomainError("config: product_dim_cap must be >= 4");
    for (const auto& c : checks) {
        if (!kCheckGroups.count(c)) throw DomainError("config: unknown check group '" + c + "'");
    }
    for (const auto& [name, t] : tolerances) {
        if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("config: tolerance '" + name + "' must be positive");
    }
}

CampaignConfig CampaignConfig::from_json(const json& j) {
    if (!j.is_object()) throw SchemaError("config: document must be a JSON object");
    static const std::set<std::string> known{"dims",   "samples_per_dim", "master_seed", "tolerances",
                                             "checks", "product_dim_cap", "threads"};
    for (const auto& [key, _] : j.items()) {
        if (!known.count(key)) throw SchemaError("config: unknown key '" + key + "'");
    }
    CampaignConfig c;
    auto unsigned_of = [&](const char* key) -> std::uint64_t {
        const json& v = j.at(key);
        if (!v.is_number_unsigned()) throw SchemaError(std::string("config: '") + key + "' must be a non-negative integer");
        return v.get<std::uint64_t>();
    };
    if (j.contains("dims")) {
        const json& d = j.at("dims");
        if (!d.is_array()) throw SchemaError("config: 'dims' must be an array of [d1, d2] pairs");
        c.dims.clear();
        for (const json& pair : d) {
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_unsigned() || !pair[1].is_number_unsigned()) {
                throw SchemaError("config: 'dims' entries must be [d1, d2] with non-negative integers");
            }
            c.dims.push_back({pair[0].get<Eigen::Index>(), pair[1].get<Eigen::Index>()});
        }
    }
    if (j.contains("samples_per_dim")) c.samples_per_dim = unsigned_of("samples_per_dim");
    if (j.contains("master_seed")) c.master_seed = unsigned_of("master_seed");
    if (j.contains("product_dim_cap")) c.product_dim_cap = static_cast<Eigen::Index>(unsigned_of("product_dim_cap"));
    if (j.contains("threads")) c.threads = unsigned_of("threads");
    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        if (!t.is_object()) throw SchemaError("config: 'tolerances' must be an object of name -> number");
        for (const auto& [name, v] : t.items()) {
            if (!v.is_number()) throw SchemaError("config: tolerance '" + name + "' must be a number");
            c.tolerances[name] = v.get<double>();
        }
    }
    if (j.contains("checks")) {
        const json& t = j.at("checks");
        if (!t.is_array()) throw SchemaError("config: 'checks' must be an array of group names");
        for (const json& v : t) {
            if (!v.is_string()) throw SchemaError("config: 'checks' entries must be strings");
            c.checks.insert(v.get<std::string>());
        }
    }
    return c;
}

json CampaignConfig::to_json() const {
    json d = json::array();
    for (const auto& p : dims) d.push_back({static_cast<std::uint64_t>(p.d1), static_cast<std::uint64_t>(p.d2)});
    return {{"dims", d},
            {"samples_per_dim", samples_per_dim},
            {"master_seed", master_seed},
            {"tolerances", tolerances},
            {"checks", checks},
            {"product_dim_cap", static_cast<std::uint64_t>(product_dim_cap)}};
}

CampaignConfig load_campaign_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path + ": cannot open for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return CampaignConfig::from_json(json::parse(buf.str()));
    } catch (const json::parse_error& e) {
        throw SchemaError(path + ": not valid JSON (" + e.what() + ")");
    } catch (const SchemaError& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

std::pair<Projector, Projector> draw_separated_pair(Eigen::Index dim, Rng& rng, double separation) {
    if (dim < 2) throw DomainError("draw_separated_pair: dim must be >= 2");
    const int d = static_cast<int>(dim);
    for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
        const int rp = rng.uniform_int(1, d - 1);
        const int rq = rng.uniform_int(1, d - 1);
        Projector p = haar_random_projector(dim, rp, rng);
        Projector q = haar_random_projector(dim, rq, rng);
        const auto angles = principal_angles(p, q);
        const bool separated = std::all_of(angles.begin(), angles.end(), [&](double t) {
            return t >= separation && t <= std::numbers::pi / 2 - separation;
        });
        if (separated) return {std::move(p), std::move(q)};
    }
    throw Error("draw_separated_pair: no separated pair after " + std::to_string(kMaxDraws) + " draws");
}

std::vector<SampleSpec> campaign_samples(const CampaignConfig& config) {
    const Seed master{config.master_seed};
    std::vector<SampleSpec> out;
    std::size_t index = 0;
    for (const auto& d : config.dims) {
        for (std::size_t k = 0; k < config.samples_per_dim; ++k, ++index) {
            out.push_back({index, d, variant_for(k), master.derive(index)});
        }
    }
    return out;
}

SampleOutcome run_sample(const SampleSpec& spec, const CampaignConfig& config) {
    SampleOutcome out;
    out.spec = spec;
    try {
        Rng rng(spec.seed);
        auto [p1, q1] = draw_separated_pair(spec.dims.d1, rng);
        std::pair<Projector, Projector> side2 = [&] {
            switch (spec.variant) {
                case SampleVariant::commuting: return draw_commuting_pair(spec.dims.d2, rng);
                case SampleVariant::identity:
                    return std::pair{Projector::identity(spec.dims.d2), Projector::identity(spec.dims.d2)};
                case SampleVariant::generic: break;
            }
            return draw_separated_pair(spec.dims.d2, rng);
        }();
        auto& [p2, q2] = side2;

        const CSDecomposition cs1 = cs_decompose(p1, q1);
        const CSDecomposition cs2 = cs_decompose(p2, q2);
        out.m1 = cs1.signature.m;
        out.m2 = cs2.signature.m;

        Report r;
        side_checks(r, "side1.", config, p1, q1, cs1, rng, out.monotonicity_fails);
        side_checks(r, "side2.", config, p2, q2, cs2, rng, out.monotonicity_fails);

        TwoParticleScene scene(p1, q1, p2, q2);
        scene.with_decompositions(cs1, cs2);
        const bool a_side_commutes = out.m1 == 0 || out.m2 == 0;
        if (config.runs("gap")) {
            const GapReport g = upper_gap(scene);
            out.gap_max_abs = g.max_abs;
            r.check("gap.psd", std::max(0.0, -g.min_eigenvalue), tol::gap_psd);
            r.check("gap.block_form", g.residual, tol::gap_block);
            r.check("gap.off_block", g.off_block_residual, tol::gap_block);
            r.check("gap.generic_block", g.generic_block_residual, tol::gap_block);
            if (a_side_commutes) {
                r.check("gap.vanishes_when_a_side_commutes", g.max_abs, tol::gap_zero);
                r.check("gap.pairings_agree_when_a_side_commutes", pairing_difference(scene).max_abs, tol::gap_zero);
            } else {
                r.vacuous("gap.vanishes_when_a_side_commutes");
                r.vacuous("gap.pairings_agree_when_a_side_commutes");
            }
        }
        if (config.runs("lower")) r.merge(lower_factorization_check(scene), "lower.");
        if (config.runs("appendix")) r.merge(verify_appendix(scene), "appendix.");
        out.report = apply_overrides(r, config.tolerances);
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

std::size_t CampaignReport::passed() const {
    return static_cast<std::size_t>(std::count_if(samples.begin(), samples.end(), [](const auto& s) { return s.pass(); }));
}

std::size_t CampaignReport::failed() const { return samples.size() - passed(); }

bool CampaignReport::all_pass() const { return failed() == 0 && campaign_checks.all_pass(); }

CampaignReport run_campaign(const CampaignConfig& config) {
    config.validate();
    CampaignReport rep;
    rep.config = config;
    const auto specs = campaign_samples(config);
    rep.samples.resize(specs.size());
    const std::size_t threads = config.threads > 0 ? config.threads : worker_count();
    parallel_for(specs.size(), threads, [&](std::size_t i) { rep.samples[i] = run_sample(specs[i], config); });

    for (const auto& s : rep.samples) {
        for (const CheckResult& c : s.report.checks()) {
            if (c.observation) continue;
            CheckAggregate& a = rep.aggregate[c.name];
            ++a.evaluated;
            if (!c.pass) ++a.failed;
            a.worst_residual = std::max(a.worst_residual, c.residual);
            a.tolerance = c.tolerance;
        }
    }

    const Existence e = existence_of(rep.samples);
    if (config.runs("axioms")) {
        rep.campaign_checks.check("monotonicity_failure_exists", e.monotonicity_witnesses > 0 ? 0.0 : 1.0, 0.0);
    }
    if (config.runs("gap")) {
        if (e.generic_scenes > 0) {
            rep.campaign_checks.check("gap_nonzero_exists", shortfall(e.max_generic_gap, kGapNonzero), 0.0);
        } else {
            rep.campaign_checks.vacuous("gap_nonzero_exists");
        }
    }
    if (config.runs("spin")) rep.campaign_checks.merge(spin_checks(), "spin.");
    rep.campaign_checks = apply_overrides(rep.campaign_checks, config.tolerances);
    return rep;
}

json CampaignReport::to_json() const {
    json checks = json::object();
    for (const auto& [name, a] : aggregate) {
        checks[name] = {{"evaluated", a.evaluated},
                        {"failed", a.failed},
                        {"worst_residual", a.worst_residual},
                        {"tolerance", a.tolerance}};
    }
    json failures = json::array();
    json sample_rows = json::array();
    for (const auto& s : samples) {
        const json dims = {s.spec.dims.d1, s.spec.dims.d2};
        sample_rows.push_back({{"index", s.spec.index},
                               {"seed", seed_string(s.spec.seed)},
                               {"dims", dims},
                               {"variant", to_string(s.spec.variant)},
                               {"generic_sizes", {s.m1, s.m2}},
                               {"gap_max_abs", s.gap_max_abs},
                               {"pass", s.pass()}});
        if (s.pass()) continue;
        std::ostringstream replay;
        replay << "impq verify --replay " << s.spec.seed.master << " --dims " << s.spec.dims.d1 << "x" << s.spec.dims.d2
               << " --variant " << to_string(s.spec.variant);
        failures.push_back({{"index", s.spec.index},
                            {"seed", seed_string(s.spec.seed)},
                            {"dims", dims},
                            {"variant", to_string(s.spec.variant)},
                            {"failed_checks", s.report.failures()},
                            {"error", s.error},
                            {"replay", replay.str()}});
    }
    const Existence e = existence_of(samples);
    return {
        {"config", config.to_json()},
        {"summary",
         {{"samples", samples.size()}, {"passed", passed()}, {"failed", failed()}, {"all_pass", all_pass()}}},
        {"checks", checks},
        {"campaign_checks", campaign_checks.to_json()},
        {"existence",
         {{"monotonicity_witnesses", e.monotonicity_witnesses},
          {"generic_scenes", e.generic_scenes},
          {"generic_scenes_nonzero_gap", e.generic_scenes_nonzero_gap},
          {"min_generic_gap_max_abs", e.min_generic_gap},
          {"max_generic_gap_max_abs", e.max_generic_gap}}},
        {"failures", failures},
        {"samples", sample_rows},
    };
}

void validate_campaign_json(const json& j) {
    if (!j.is_object()) throw SchemaError("campaign report: not an object");
    const json& summary = require(j, "summary");
    for (const char* k : {"samples", "passed", "failed"}) {
        if (!require(summary, k).is_number_unsigned()) throw SchemaError(std::string("campaign report: summary.") + k);
    }
    if (!require(summary, "all_pass").is_boolean()) throw SchemaError("campaign report: summary.all_pass");
    for (const auto& [name, a] : require(j, "checks").items()) {
        for (const char* k : {"evaluated", "failed", "worst_residual", "tolerance"}) {
            if (!require(a, k).is_number()) throw SchemaError("campaign report: checks." + name + "." + k);
        }
    }
    for (const auto& [name, c] : require(j, "campaign_checks").items()) {
        if (!require(c, "pass").is_boolean()) throw SchemaError("campaign report: campaign_checks." + name);
    }
    const json& failures = require(j, "failures");
    if (!failures.is_array()) throw SchemaError("campaign report: failures must be an array");
    for (const json& f : failures) {
        if (!require(f, "seed").is_string()) throw SchemaError("campaign report: failure without seed");
    }
    const json& rows = require(j, "samples");
    if (!rows.is_array() || rows.size() != summary.at("samples").get<std::size_t>()) {
        throw SchemaError("campaign report: samples array does not match summary");
    }
    require(j, "existence");
    require(j, "config");
}

}  // namespace impq
