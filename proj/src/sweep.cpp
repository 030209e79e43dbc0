#include "impq/sweep.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "impq/errors.hpp"
#include "impq/spin_example.hpp"

namespace impq {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

template <class T>
T parse_number(std::string_view s, std::string_view what) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw DomainError("sweep grid: cannot parse " + std::string(what) + " '" + std::string(s) + "'");
    }
    return v;
}

GridAxis parse_axis(const std::vector<std::string_view>& f, std::size_t first, std::string_view name) {
    if (f.size() != first + 3) {
        throw DomainError("sweep grid: axis '" + std::string(name) + "' needs LO:HI:N");
    }
    GridAxis ax{parse_number<double>(f[first], "lower bound"), parse_number<double>(f[first + 1], "upper bound"),
                parse_number<int>(f[first + 2], "point count")};
    if (ax.count < 1) throw DomainError("sweep grid: point count must be >= 1");
    if (!std::isfinite(ax.lo) || !std::isfinite(ax.hi) || ax.lo > ax.hi) {
        throw DomainError("sweep grid: axis '" + std::string(name) + "' needs finite LO <= HI");
    }
    return ax;
}

double b_max(double a) { return std::sqrt(std::max(0.0, a * (1.0 - a))); }

std::vector<double> b_values(const SweepGrid& g, double a) {
    switch (g.b_mode) {
        case SweepGrid::BMode::automatic: return {0.99 * b_max(a)};
        case SweepGrid::BMode::fractions: {
            std::vector<double> out;
            for (double f : g.b.points()) out.push_back(f * b_max(a));
            return out;
        }
        case SweepGrid::BMode::explicit_values: break;
    }
    return g.b.points();
}

std::string fmt(double x) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

}  // namespace

std::vector<double> GridAxis::points() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    }
    return out;
}

SweepGrid SweepGrid::parse(std::string_view spec) {
    SweepGrid g;
    bool have_a = false, have_b = false, have_phi = false;
    for (std::string_view part : split(spec, ',')) {
        const auto f = split(part, ':');
        if (f[0] == "a") {
            g.a = parse_axis(f, 1, "a");
            have_a = true;
        } else if (f[0] == "phi") {
            g.phi = parse_axis(f, 1, "phi");
            have_phi = true;
        } else if (f[0] == "b") {
            if (f.size() == 2 && f[1] == "auto") {
                g.b_mode = BMode::automatic;
            } else if (f.size() == 3 && f[1] == "auto") {
                g.b_mode = BMode::fractions;
                g.b = {0.0, 0.99, parse_number<int>(f[2], "point count")};
                if (g.b.count < 1) throw DomainError("sweep grid: point count must be >= 1");
            } else {
                g.b_mode = BMode::explicit_values;
                g.b = parse_axis(f, 1, "b");
            }
            have_b = true;
        } else {
            throw DomainError("sweep grid: unknown axis '" + std::string(f[0]) + "'");
        }
    }
    if (!have_a || !have_b || !have_phi) throw DomainError("sweep grid: axes a, b and phi are all required");
    if (g.a.lo < 0.0 || g.a.hi > 1.0) throw DomainError("sweep grid: a must lie in [0, 1]");
    if (g.phi.lo < 0.0 || g.phi.hi >= 2.0 * std::numbers::pi) throw DomainError("sweep grid: phi must lie in [0, 2pi)");
    if (g.b_mode == BMode::explicit_values) {
        if (g.b.lo < 0.0) throw DomainError("sweep grid: b must be non-negative");
        for (double a : g.a.points()) {
            if (g.b.hi * g.b.hi > a * (1.0 - a)) {
                throw DomainError("sweep grid: b = " + fmt(g.b.hi) + " violates b^2 <= a(1 - a) at a = " + fmt(a));
            }
        }
    }
    return g;
}

std::vector<SweepRow> sweep_separable(const SweepGrid& grid) {
    std::vector<SweepRow> rows;
    for (double a : grid.a.points()) {
        for (double b : b_values(grid, a)) {
            for (double phi : grid.phi.points()) {
                const WitnessValue w = separable_witness(a, b, phi);
                rows.push_back({a, b, phi, w.numeric, w.closed_form, std::abs(w.numeric - w.closed_form)});
            }
        }
    }
    return rows;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
    std::string out(kSweepHeader);
    out += '\n';
    for (const auto& r : rows) {
        out += fmt(r.a) + ',' + fmt(r.b) + ',' + fmt(r.phi) + ',' + fmt(r.numeric) + ',' + fmt(r.closed_form) + ',' +
               fmt(r.abs_diff) + '\n';
    }
    return out;
}

std::vector<SweepRow> parse_sweep_csv(std::string_view text) {
    auto lines = split(text, '\n');
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty() || lines.front() != kSweepHeader) throw SchemaError("sweep csv: missing or wrong header row");
    std::vector<SweepRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split(lines[i], ',');
        if (cells.size() != 6) throw SchemaError("sweep csv: line " + std::to_string(i + 1) + " does not have 6 columns");
        double v[6];
        for (std::size_t k = 0; k < 6; ++k) {
            const auto [ptr, ec] = std::from_chars(cells[k].data(), cells[k].data() + cells[k].size(), v[k]);
            if (ec != std::errc() || ptr != cells[k].data() + cells[k].size() || !std::isfinite(v[k])) {
                throw SchemaError("sweep csv: bad value on line " + std::to_string(i + 1));
            }
        }
        rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5]});
    }
    return rows;
}

}  // namespace impq
