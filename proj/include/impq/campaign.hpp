#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "impq/operator_core.hpp"
#include "impq/random.hpp"
#include "impq/report.hpp"

namespace impq {

struct DimPair {
    Eigen::Index d1 = 2;
    Eigen::Index d2 = 2;

    friend bool operator==(const DimPair&, const DimPair&) = default;
};

/// Check groups a campaign can run. "spin" runs once per campaign; the rest
/// run on every sample.
inline const std::set<std::string> kCheckGroups{"lattice", "axioms", "cs",    "methods",
                                                 "gap",     "lower",  "appendix", "spin"};

/// How the second pair of a sample is drawn. The first pair is always a
/// random non-commuting pair.
enum class SampleVariant { generic, commuting, identity };

std::string_view to_string(SampleVariant v) noexcept;
std::optional<SampleVariant> parse_sample_variant(std::string_view s) noexcept;

struct CampaignConfig {
    std::vector<DimPair> dims{{2, 2}, {2, 3}, {3, 3}, {4, 4}, {3, 5}};
    std::size_t samples_per_dim = 50;
    std::uint64_t master_seed = 20240601;
    /// Overrides keyed by check name, either the full dotted name or its last
    /// component; the check's pass flag is re-evaluated against the new value.
    std::map<std::string, double> tolerances;
    /// Subset of kCheckGroups; empty means all.
    std::set<std::string> checks;
    Eigen::Index product_dim_cap = 256;
    /// Worker threads; 0 means worker_count().
    std::size_t threads = 0;

    bool runs(const std::string& group) const { return checks.empty() || checks.count(group) > 0; }

    /// Throws DomainError on dims < 2, product dimension above the cap, zero
    /// samples, unknown check groups or non-positive tolerances.
    void validate() const;

    /// Missing keys keep their defaults. Throws SchemaError on wrong types or
    /// unknown keys.
    static CampaignConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

CampaignConfig load_campaign_config(const std::string& path);

/// Everything needed to rerun one sample in isolation.
struct SampleSpec {
    std::size_t index = 0;
    DimPair dims;
    SampleVariant variant = SampleVariant::generic;
    Seed seed;
};

struct SampleOutcome {
    SampleSpec spec;
    Report report;
    std::string error;  // non-empty if the sample threw
    /// Generic-sector sizes of the two pairs (m of the CS signature).
    Eigen::Index m1 = 0;
    Eigen::Index m2 = 0;
    double gap_max_abs = 0.0;
    bool monotonicity_fails = false;  // some side has ω̄(P,Q) not <= Q

    bool pass() const { return error.empty() && report.all_pass(); }
};

struct CheckAggregate {
    std::size_t evaluated = 0;
    std::size_t failed = 0;
    double worst_residual = 0.0;
    double tolerance = 0.0;
};

struct CampaignReport {
    CampaignConfig config;
    std::vector<SampleOutcome> samples;  // sorted by index
    std::map<std::string, CheckAggregate> aggregate;
    /// Campaign-level existence checks and the spin example, if selected.
    Report campaign_checks;

    std::size_t passed() const;
    std::size_t failed() const;
    bool all_pass() const;
    /// Deterministic: no timing, keys sorted, samples in index order.
    nlohmann::json to_json() const;
};

/// Draw a projector pair of the given dimension with ranks uniform in
/// [1, dim - 1], redrawing while any principal angle lies within
/// `separation` of 0 or pi/2 without being numerically exact (below the CS
/// angle floor). The iterated meet needs (cos²θ)^(2^20) to underflow its step
/// tolerance, which fails for θ below about 5e-3; the default keeps a 2x margin.
std::pair<Projector, Projector> draw_separated_pair(Eigen::Index dim, Rng& rng, double separation = 1e-2);

/// Per-sample specs of a campaign, in index order.
std::vector<SampleSpec> campaign_samples(const CampaignConfig& config);

SampleOutcome run_sample(const SampleSpec& spec, const CampaignConfig& config);

CampaignReport run_campaign(const CampaignConfig& config);

/// Throws SchemaError unless `j` has the shape produced by CampaignReport::to_json.
void validate_campaign_json(const nlohmann::json& j);

}  // namespace impq
