#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace impq {

/// `count` evenly spaced points from `lo` to `hi` inclusive (count 1 gives lo).
struct GridAxis {
    double lo = 0.0;
    double hi = 0.0;
    int count = 1;

    std::vector<double> points() const;
};

/// Parameter grid for the separable-state witness, parsed from
///   a:LO:HI:N,b:auto,phi:LO:HI:N
/// `b:auto` uses b = 0.99 sqrt(a(1 - a)); `b:auto:N` uses N fractions
/// 0, ..., 0.99 of sqrt(a(1 - a)); `b:LO:HI:N` gives explicit values, each
/// of which must be admissible for every a.
struct SweepGrid {
    GridAxis a;
    GridAxis phi;
    enum class BMode { automatic, fractions, explicit_values } b_mode = BMode::automatic;
    GridAxis b;  // fractions or explicit values, depending on b_mode

    /// Throws DomainError on malformed specs or parameters outside the
    /// witness domain (a outside [0, 1], phi outside [0, 2pi), b inadmissible).
    static SweepGrid parse(std::string_view spec);
};

struct SweepRow {
    double a = 0.0;
    double b = 0.0;
    double phi = 0.0;
    double numeric = 0.0;
    double closed_form = 0.0;
    double abs_diff = 0.0;
};

std::vector<SweepRow> sweep_separable(const SweepGrid& grid);

inline constexpr std::string_view kSweepHeader = "a,b,phi,numeric,closed_form,abs_diff";

/// Header row plus one line per row, values printed with round-trip precision.
std::string to_csv(const std::vector<SweepRow>& rows);

/// Parse CSV produced by to_csv back into rows. Throws SchemaError on a
/// wrong header, wrong column count or unparsable / non-finite value.
std::vector<SweepRow> parse_sweep_csv(std::string_view text);

}  // namespace impq
