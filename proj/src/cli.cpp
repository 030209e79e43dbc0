#include "impq/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include "impq/campaign.hpp"
#include "impq/cs_decomp.hpp"
#include "impq/errors.hpp"
#include "impq/matrix_io.hpp"
#include "impq/nonlocality.hpp"
#include "impq/spin_example.hpp"
#include "impq/sweep.hpp"

namespace impq {

namespace {

using nlohmann::json;

constexpr double kWitnessExact = 1e-12;

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError(path + ": cannot open for writing");
    f << text;
    if (!f) throw IoError(path + ": write failed");
}

// Serialize, parse back and run the schema check before anything touches disk.
void write_json(const std::string& path, const json& doc, void (*validate)(const json&)) {
    const std::string text = doc.dump(2) + "\n";
    const json back = json::parse(text);
    if (validate) validate(back);
    write_text(path, text);
}

void require_pass_flag(const json& j) {
    if (!j.is_object() || !j.contains("pass") || !j.at("pass").is_boolean()) {
        throw SchemaError("report: missing boolean 'pass'");
    }
}

std::string fmt(double x) {
    std::ostringstream s;
    s << std::setprecision(3) << std::scientific << x;
    return s.str();
}

void print_report(std::ostream& out, const Report& r, bool failures_only) {
    for (const CheckResult& c : r.checks()) {
        if (failures_only && (c.pass || c.observation)) continue;
        out << "  " << (c.observation ? "note" : c.pass ? "ok  " : "FAIL") << "  " << c.name << "  residual "
            << fmt(c.residual) << " (tol " << fmt(c.tolerance) << ")\n";
    }
}

DimPair parse_dims(const std::string& s) {
    const auto x = s.find('x');
    try {
        if (x == std::string::npos) throw std::invalid_argument(s);
        return {std::stol(s.substr(0, x)), std::stol(s.substr(x + 1))};
    } catch (const std::exception&) {
        throw DomainError("--dims expects D1xD2, got '" + s + "'");
    }
}

struct VerifyOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
    std::optional<std::size_t> threads;
    std::string checks;
    std::string json_path;
    std::optional<std::uint64_t> replay;
    std::string replay_dims = "2x2";
    std::string replay_variant = "generic";
};

int run_verify(const VerifyOptions& o, std::ostream& out, std::ostream& err) {
    CampaignConfig cfg;
    try {
        if (!o.config_path.empty()) cfg = load_campaign_config(o.config_path);
        if (o.seed) cfg.master_seed = *o.seed;
        if (o.samples) cfg.samples_per_dim = *o.samples;
        if (o.threads) cfg.threads = *o.threads;
        if (!o.checks.empty()) {
            cfg.checks.clear();
            std::stringstream ss(o.checks);
            for (std::string g; std::getline(ss, g, ',');) cfg.checks.insert(g);
        }
        cfg.validate();
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    if (o.replay) {
        SampleSpec spec;
        try {
            spec.dims = parse_dims(o.replay_dims);
            const auto v = parse_sample_variant(o.replay_variant);
            if (!v) throw DomainError("--variant must be generic, commuting or identity");
            spec.variant = *v;
            spec.seed = Seed{*o.replay};
            CampaignConfig single = cfg;
            single.dims = {spec.dims};
            single.validate();
        } catch (const Error& e) {
            err << "error: " << e.what() << "\n";
            return kExitUsage;
        }
        const SampleOutcome s = run_sample(spec, cfg);
        out << "replay seed " << spec.seed.master << " dims " << spec.dims.d1 << "x" << spec.dims.d2 << " variant "
            << to_string(spec.variant) << ": " << (s.pass() ? "PASS" : "FAIL") << "\n";
        if (!s.error.empty()) out << "  error: " << s.error << "\n";
        print_report(out, s.report, false);
        if (!o.json_path.empty()) {
            json doc = {{"seed", std::to_string(spec.seed.master)},
                        {"dims", {spec.dims.d1, spec.dims.d2}},
                        {"variant", to_string(spec.variant)},
                        {"error", s.error},
                        {"checks", s.report.to_json()},
                        {"pass", s.pass()}};
            try {
                write_json(o.json_path, doc, require_pass_flag);
            } catch (const Error& e) {
                err << "error: " << e.what() << "\n";
                return kExitUsage;
            }
        }
        return s.pass() ? kExitPass : kExitCheckFailure;
    }

    const CampaignReport rep = run_campaign(cfg);
    out << "campaign: " << rep.samples.size() << " samples, " << rep.passed() << " passed, " << rep.failed()
        << " failed (master seed " << cfg.master_seed << ")\n";
    std::size_t worst_shown = 0;
    for (const auto& [name, a] : rep.aggregate) {
        if (a.failed > 0) {
            out << "  FAIL  " << name << ": " << a.failed << "/" << a.evaluated << " failed, worst residual "
                << fmt(a.worst_residual) << " (tol " << fmt(a.tolerance) << ")\n";
            ++worst_shown;
        }
    }
    if (worst_shown == 0) out << "  all " << rep.aggregate.size() << " per-sample checks passed on every sample\n";
    out << "campaign checks:\n";
    print_report(out, rep.campaign_checks, false);
    for (const auto& s : rep.samples) {
        if (s.pass()) continue;
        out << "  failed sample " << s.spec.index << ": impq verify --replay " << s.spec.seed.master << " --dims "
            << s.spec.dims.d1 << "x" << s.spec.dims.d2 << " --variant " << to_string(s.spec.variant) << "\n";
        if (!s.error.empty()) out << "    error: " << s.error << "\n";
    }
    if (!o.json_path.empty()) {
        try {
            write_json(o.json_path, rep.to_json(), validate_campaign_json);
        } catch (const Error& e) {
            err << "error: " << e.what() << "\n";
            return kExitUsage;
        }
    }
    out << (rep.all_pass() ? "PASS" : "FAIL") << "\n";
    return rep.all_pass() ? kExitPass : kExitCheckFailure;
}

void print_matrix(std::ostream& out, const ComplexMatrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out << "    ";
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double v = m(i, j).real() * 12.0;
            out << std::setw(4) << std::lround(v) << (j + 1 < m.cols() ? " " : "");
        }
        out << "   (/12)\n";
    }
}

std::string spectrum_text(const std::vector<double>& v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(6);
    for (std::size_t i = 0; i < v.size(); ++i) s << (i ? ", " : "") << (std::abs(v[i]) < 5e-7 ? 0.0 : v[i]);
    return s.str();
}

int run_spin(const std::string& json_path, std::ostream& out, std::ostream& err) {
    const SpinReport r = spin_half_report();
    const auto& c = r.convention;
    out << "convention: P = (I " << (c.sign_x > 0 ? "+" : "-") << " sx)/2, Q = (I " << (c.sign_z > 0 ? "+" : "-")
        << " sz)/2, standard product basis\n";
    out << "spectrum upper(PxP, QxQ): " << spectrum_text(r.spectrum_direct) << "\n";
    out << "spectrum upper(PxQ, QxP): " << spectrum_text(r.spectrum_crossed) << "\n";
    out << "upper(PxQ, QxP):\n";
    print_matrix(out, r.ops.upper_crossed);
    out << "upper(PxP, QxQ):\n";
    print_matrix(out, r.ops.upper_direct);
    out << "printed matrix residuals: crossed " << fmt(r.printed_crossed_residual) << ", direct "
        << fmt(r.printed_direct_residual) << "\n";
    out << "conventions matching both printed matrices: " << r.matching_conventions.size() << "\n";
    out << "trace of difference: " << fmt(std::abs(r.trace_difference)) << ", max |difference| "
        << fmt(r.pairing_max_abs) << "\n";
    out << "printed chain (gap of one pairing = upper operator of the other): "
        << (r.printed_chain_best_residual <= kWitnessExact ? "holds" : "does not hold") << " (best residual "
        << fmt(r.printed_chain_best_residual) << " over all conventions)\n";
    out << "separable witness: " << r.witness_points << " points, max |numeric - closed form| "
        << fmt(r.witness_max_difference) << ", min value " << fmt(r.witness_min_value) << "\n";
    out << (r.pass() ? "PASS" : "FAIL") << "\n";
    if (!json_path.empty()) {
        try {
            write_json(json_path, r.to_json(), require_pass_flag);
        } catch (const Error& e) {
            err << "error: " << e.what() << "\n";
            return kExitUsage;
        }
    }
    return r.pass() ? kExitPass : kExitCheckFailure;
}

struct GapOptions {
    std::string p1, q1, p2, q2, json_path;
};

int run_gap(const GapOptions& o, std::ostream& out, std::ostream& err) {
    std::optional<TwoParticleScene> scene;
    try {
        auto load = [](const std::string& path) {
            const ComplexMatrix m = load_matrix(path);
            try {
                return Projector::certify(m);
            } catch (const CertificationError& e) {
                throw SchemaError(path + ": not a projector: " + e.what());
            }
        };
        Projector p1 = load(o.p1), q1 = load(o.q1), p2 = load(o.p2), q2 = load(o.q2);
        if (p1.dim() != q1.dim()) throw DimensionMismatch("--p1/--q1", p1.dim(), q1.dim());
        if (p2.dim() != q2.dim()) throw DimensionMismatch("--p2/--q2", p2.dim(), q2.dim());
        scene.emplace(std::move(p1), std::move(q1), std::move(p2), std::move(q2));
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    const CSDecomposition cs1 = scene->decomposition1();
    const CSDecomposition cs2 = scene->decomposition2();
    scene->with_decompositions(cs1, cs2);
    const GapReport g = upper_gap(*scene);
    const PairingDifference d = pairing_difference(*scene);
    Report checks;
    checks.check("gap_psd", std::max(0.0, -g.min_eigenvalue), tol::gap_psd);
    checks.check("gap_block_form", g.residual, tol::gap_block);
    if (cs1.signature.m == 0 || cs2.signature.m == 0) {
        checks.check("gap_vanishes_when_a_side_commutes", g.max_abs, tol::gap_zero);
    }
    checks.merge(lower_factorization_check(*scene), "lower.");
    checks.merge(verify_appendix(*scene), "appendix.");

    auto sig = [](const CSSignature& s) {
        std::ostringstream t;
        t << "m=" << s.m << " m1=" << s.m1 << " m2=" << s.m2 << " m3=" << s.m3 << " m4=" << s.m4;
        return t.str();
    };
    out << "side 1: " << sig(cs1.signature) << "\n";
    out << "side 2: " << sig(cs2.signature) << "\n";
    out << "gap max |entry| " << fmt(g.max_abs) << ", min eigenvalue " << fmt(g.min_eigenvalue) << "\n";
    if (g.max_abs <= tol::gap_zero) out << "gap is zero\n";
    out << "pairing difference max |entry| " << fmt(d.max_abs) << ", trace " << fmt(d.trace) << "\n";
    print_report(out, checks, false);
    out << (checks.all_pass() ? "PASS" : "FAIL") << "\n";

    if (!o.json_path.empty()) {
        auto sig_json = [](const CSSignature& s) {
            return json{{"m", s.m}, {"m1", s.m1}, {"m2", s.m2}, {"m3", s.m3}, {"m4", s.m4}};
        };
        const json doc = {{"gap", g.to_json()},
                          {"signatures", {sig_json(cs1.signature), sig_json(cs2.signature)}},
                          {"pairing_difference", {{"max_abs", d.max_abs}, {"trace", d.trace}}},
                          {"checks", checks.to_json()},
                          {"pass", checks.all_pass()}};
        try {
            write_json(o.json_path, doc, require_pass_flag);
        } catch (const Error& e) {
            err << "error: " << e.what() << "\n";
            return kExitUsage;
        }
    }
    return checks.all_pass() ? kExitPass : kExitCheckFailure;
}

int run_sweep(const std::string& grid_spec, const std::string& csv_path, std::ostream& out, std::ostream& err) {
    std::vector<SweepRow> rows;
    try {
        rows = sweep_separable(SweepGrid::parse(grid_spec));
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    const std::string text = to_csv(rows);
    double worst_diff = 0.0, min_value = std::numeric_limits<double>::infinity();
    try {
        const auto back = parse_sweep_csv(text);
        if (back.size() != rows.size()) throw SchemaError("sweep csv: row count changed on re-parse");
        for (const auto& r : back) {
            worst_diff = std::max(worst_diff, r.abs_diff);
            min_value = std::min({min_value, r.numeric, r.closed_form});
        }
        if (csv_path.empty()) {
            out << text;
        } else {
            write_text(csv_path, text);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    const bool ok = worst_diff <= kWitnessExact && min_value >= -kWitnessExact;
    std::ostream& log = csv_path.empty() ? err : out;
    log << rows.size() << " rows, max |numeric - closed form| " << fmt(worst_diff) << ", min value " << fmt(min_value)
        << "\n"
        << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? kExitPass : kExitCheckFailure;
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Imprecise joint probability operators: verification and examples"};
    app.require_subcommand(1);

    VerifyOptions vo;
    auto* verify = app.add_subcommand("verify", "Run a randomized verification campaign");
    verify->add_option("--config", vo.config_path, "Campaign config JSON")->check(CLI::ExistingFile);
    verify->add_option("--seed", vo.seed, "Master seed (overrides config)");
    verify->add_option("--samples", vo.samples, "Samples per dimension pair (overrides config)");
    verify->add_option("--threads", vo.threads, "Worker threads (overrides config)");
    verify->add_option("--checks", vo.checks, "Comma-separated check groups (overrides config)");
    verify->add_option("--json", vo.json_path, "Write the report as JSON");
    auto* replay = verify->add_option("--replay", vo.replay, "Rerun the single sample with this seed");
    verify->add_option("--dims", vo.replay_dims, "Dimensions D1xD2 of the replayed sample")->needs(replay);
    verify->add_option("--variant", vo.replay_variant, "Variant of the replayed sample")->needs(replay);

    std::string spin_json;
    auto* spin = app.add_subcommand("spin-example", "Reproduce the spin-1/2 example");
    spin->add_option("--json", spin_json, "Write the report as JSON");

    GapOptions go;
    auto* gap = app.add_subcommand("gap", "Upper-operator gap for two user-supplied projector pairs");
    gap->add_option("--p1", go.p1, "Projector P1 (matrix JSON)")->required();
    gap->add_option("--q1", go.q1, "Projector Q1 (matrix JSON)")->required();
    gap->add_option("--p2", go.p2, "Projector P2 (matrix JSON)")->required();
    gap->add_option("--q2", go.q2, "Projector Q2 (matrix JSON)")->required();
    gap->add_option("--json", go.json_path, "Write the report as JSON");

    std::string grid = "a:0:1:11,b:auto,phi:0:6.283:12";
    std::string csv_path;
    auto* sweep = app.add_subcommand("sweep", "Separable-state witness over a parameter grid");
    sweep->add_option("--grid", grid, "Grid spec, e.g. a:0:1:11,b:auto,phi:0:6.283:12")->capture_default_str();
    sweep->add_option("--csv", csv_path, "Output CSV path (stdout if omitted)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (verify->parsed()) return run_verify(vo, out, err);
        if (spin->parsed()) return run_spin(spin_json, out, err);
        if (gap->parsed()) return run_gap(go, out, err);
        if (sweep->parsed()) return run_sweep(grid, csv_path, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitCheckFailure;
    }
    return kExitUsage;
}

int cli_dispatch(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return cli_run(args, std::cout, std::cerr);
}

}  // namespace impq
