#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace impq {

/// One named numeric check. `residual` is nonnegative and the check passes
/// iff residual <= tolerance. Observations record a fact without gating.
struct CheckResult {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    bool observation = false;
};

class Report {
public:
    /// Record residual against tolerance; returns the pass flag.
    bool check(std::string name, double residual, double tolerance);
    /// Record a fact that is reported but never counts as a failure.
    void observe(std::string name, double value, double threshold, bool holds);
    /// Record a check that could not run (e.g. no generic sector); passes.
    void vacuous(std::string name);
    void merge(const Report& other, const std::string& prefix = {});

    bool all_pass() const;
    const std::vector<CheckResult>& checks() const noexcept { return checks_; }
    const CheckResult* find(const std::string& name) const;
    std::vector<std::string> failures() const;

    /// {check_name: {residual, tolerance, pass}}; observations add "observation": true.
    nlohmann::json to_json() const;

private:
    std::vector<CheckResult> checks_;
};

}  // namespace impq
