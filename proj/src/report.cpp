#include "impq/report.hpp"

#include <algorithm>
#include <cmath>

namespace impq {

bool Report::check(std::string name, double residual, double tolerance) {
    const bool ok = std::isfinite(residual) && residual <= tolerance;
    checks_.push_back({std::move(name), residual, tolerance, ok, false});
    return ok;
}

void Report::observe(std::string name, double value, double threshold, bool holds) {
    checks_.push_back({std::move(name), value, threshold, holds, true});
}

void Report::vacuous(std::string name) { checks_.push_back({std::move(name), 0.0, 0.0, true, false}); }

void Report::merge(const Report& other, const std::string& prefix) {
    for (CheckResult c : other.checks_) {
        c.name = prefix + c.name;
        checks_.push_back(std::move(c));
    }
}

bool Report::all_pass() const {
    return std::all_of(checks_.begin(), checks_.end(),
                       [](const CheckResult& c) { return c.observation || c.pass; });
}

const CheckResult* Report::find(const std::string& name) const {
    auto it = std::find_if(checks_.begin(), checks_.end(),
                           [&](const CheckResult& c) { return c.name == name; });
    return it == checks_.end() ? nullptr : &*it;
}

std::vector<std::string> Report::failures() const {
    std::vector<std::string> out;
    for (const auto& c : checks_) {
        if (!c.observation && !c.pass) out.push_back(c.name);
    }
    return out;
}

nlohmann::json Report::to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& c : checks_) {
        nlohmann::json entry = {{"residual", c.residual}, {"tolerance", c.tolerance}, {"pass", c.pass}};
        if (c.observation) entry["observation"] = true;
        j[c.name] = std::move(entry);
    }
    return j;
}

}  // namespace impq
