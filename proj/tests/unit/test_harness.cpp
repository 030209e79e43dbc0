#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "generators.hpp"
#include "impq/campaign.hpp"
#include "impq/cli.hpp"
#include "impq/errors.hpp"
#include "impq/matrix_io.hpp"
#include "impq/sweep.hpp"

using namespace impq;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("impq_test_" + std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

std::string read(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct CliResult {
    int code;
    std::string out, err;
};

CliResult run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli_run(args, out, err);
    return {code, out.str(), err.str()};
}

CampaignConfig small_config() {
    CampaignConfig c;
    c.dims = {{2, 2}};
    c.samples_per_dim = 10;
    c.threads = 1;
    return c;
}

}  // namespace

TEST_SUITE("matrix files") {
    TEST_CASE("random 8x8 round-trips bit-exactly") {
        TempDir dir;
        Rng rng(Seed{1});
        const ComplexMatrix m = rng.gaussian_matrix(8, 8);
        save_matrix(dir / "m.json", m);
        const ComplexMatrix back = load_matrix(dir / "m.json");
        CHECK((back - m).cwiseAbs().maxCoeff() == 0.0);
    }

    TEST_CASE("malformed files name the path") {
        TempDir dir;
        write(dir / "ragged.json", R"({"dim": 2, "entries": [[[1,0],[0,0]], [[0,0]]]})");
        write(dir / "nan.json", R"({"dim": 1, "entries": [[[NaN, 0]]]})");
        write(dir / "text.json", "not json");
        for (const char* name : {"ragged.json", "nan.json", "text.json"}) {
            try {
                load_matrix(dir / name);
                FAIL("expected SchemaError");
            } catch (const SchemaError& e) {
                CHECK(std::string(e.what()).find(name) != std::string::npos);
            }
        }
        CHECK_THROWS_AS(load_matrix(dir / "missing.json"), IoError);
    }
}

TEST_SUITE("config") {
    TEST_CASE("defaults") {
        const CampaignConfig c;
        CHECK(c.dims.size() == 5);
        CHECK(c.samples_per_dim == 50);
        CHECK(c.product_dim_cap == 256);
        CHECK_NOTHROW(c.validate());
        const CampaignConfig back = CampaignConfig::from_json(c.to_json());
        CHECK(back.to_json() == c.to_json());
    }

    TEST_CASE("parse errors and cap violations") {
        using nlohmann::json;
        CHECK_THROWS_AS(CampaignConfig::from_json(json{{"bogus", 1}}), SchemaError);
        CHECK_THROWS_AS(CampaignConfig::from_json(json{{"dims", {{2}}}}), SchemaError);
        CHECK_THROWS_AS(CampaignConfig::from_json(json{{"samples_per_dim", -3}}), SchemaError);
        CHECK_THROWS_AS(CampaignConfig::from_json(json{{"tolerances", {{"x", "small"}}}}), SchemaError);
        CHECK_THROWS_AS(CampaignConfig::from_json(json::array()), SchemaError);

        CampaignConfig c;
        c.dims = {{16, 17}};
        CHECK_THROWS_AS(c.validate(), DomainError);
        c.dims = {{1, 4}};
        CHECK_THROWS_AS(c.validate(), DomainError);
        c.dims = {{2, 2}};
        c.checks = {"nonsense"};
        CHECK_THROWS_AS(c.validate(), DomainError);
        c.checks = {};
        c.tolerances = {{"gap.psd", -1.0}};
        CHECK_THROWS_AS(c.validate(), DomainError);
    }
}

TEST_SUITE("campaign") {
    TEST_CASE("dims (2,2) with 10 samples passes quickly") {
        const auto t0 = std::chrono::steady_clock::now();
        const CampaignReport r = run_campaign(small_config());
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        CHECK(r.all_pass());
        CHECK(r.samples.size() == 10);
        CHECK(secs < 5.0);
        CHECK_NOTHROW(validate_campaign_json(nlohmann::json::parse(r.to_json().dump())));
    }

    TEST_CASE("all three variants appear and commuting sides have zero gap") {
        const CampaignReport r = run_campaign(small_config());
        int commuting = 0, identity = 0;
        for (const auto& s : r.samples) {
            if (s.spec.variant == SampleVariant::commuting) ++commuting;
            if (s.spec.variant == SampleVariant::identity) ++identity;
            if (s.spec.variant != SampleVariant::generic) CHECK(s.gap_max_abs <= 1e-9);
        }
        CHECK(commuting == 2);
        CHECK(identity == 2);
    }

    TEST_CASE("same seed twice gives byte-identical reports, regardless of threads") {
        CampaignConfig c = small_config();
        c.dims = {{2, 3}, {3, 3}};
        const std::string a = run_campaign(c).to_json().dump();
        const std::string b = run_campaign(c).to_json().dump();
        c.threads = 4;
        const std::string d = run_campaign(c).to_json().dump();
        CHECK(a == b);
        CHECK(a == d);
        c.master_seed += 1;
        CHECK(run_campaign(c).to_json().dump() != a);
    }

    TEST_CASE("a sample replays in isolation from its spec") {
        CampaignConfig c = small_config();
        const CampaignReport r = run_campaign(c);
        const auto specs = campaign_samples(c);
        for (std::size_t i : {0u, 3u, 4u, 7u}) {
            SampleSpec alone = specs[i];
            alone.index = 0;  // the index plays no role in what is drawn
            CHECK(run_sample(alone, c).report.to_json() == r.samples[i].report.to_json());
        }
    }

    TEST_CASE("checks = {spin} runs only the spin example") {
        CampaignConfig c = small_config();
        c.checks = {"spin"};
        const CampaignReport r = run_campaign(c);
        for (const auto& s : r.samples) CHECK(s.report.checks().empty());
        CHECK(r.campaign_checks.find("spin.spectra") != nullptr);
        CHECK(r.campaign_checks.find("monotonicity_failure_exists") == nullptr);
        CHECK(r.all_pass());
    }

    TEST_CASE("campaign-level existence checks") {
        const CampaignReport r = run_campaign(small_config());
        const CheckResult* mono = r.campaign_checks.find("monotonicity_failure_exists");
        REQUIRE(mono != nullptr);
        CHECK(mono->pass);
        const CheckResult* gap = r.campaign_checks.find("gap_nonzero_exists");
        REQUIRE(gap != nullptr);
        CHECK(gap->pass);
    }

    TEST_CASE("tightened tolerances produce failures that carry seeds") {
        CampaignConfig c = small_config();
        c.tolerances = {{"roundtrip", 1e-300}};
        const CampaignReport r = run_campaign(c);
        CHECK_FALSE(r.all_pass());
        const auto j = r.to_json();
        CHECK_NOTHROW(validate_campaign_json(j));
        REQUIRE(!j.at("failures").empty());
        for (const auto& f : j.at("failures")) {
            CHECK(!f.at("seed").get<std::string>().empty());
            CHECK(f.at("replay").get<std::string>().find("--replay") != std::string::npos);
        }
    }

    TEST_CASE("separated pairs avoid the ambiguous angle window") {
        Rng rng(Seed{3});
        for (int k = 0; k < 50; ++k) {
            const auto [p, q] = draw_separated_pair(rng.uniform_int(2, 8), rng);
            for (double t : principal_angles(p, q)) {
                CHECK(t >= 1e-2);
                CHECK(t <= std::numbers::pi / 2 - 1e-2);
            }
        }
    }
}

TEST_SUITE("sweep") {
    TEST_CASE("grid parsing") {
        const SweepGrid g = SweepGrid::parse("a:0:1:11,b:auto,phi:0:6.283:12");
        CHECK(g.a.points().size() == 11);
        CHECK(g.phi.points().size() == 12);
        CHECK(g.b_mode == SweepGrid::BMode::automatic);
        CHECK(SweepGrid::parse("a:0:1:11,b:auto:11,phi:0:6.283:12").b.count == 11);
        CHECK_THROWS_AS(SweepGrid::parse("a:0:1:11,phi:0:6.283:12"), DomainError);
        CHECK_THROWS_AS(SweepGrid::parse("a:0:2:11,b:auto,phi:0:6:12"), DomainError);
        CHECK_THROWS_AS(SweepGrid::parse("a:0:1:11,b:auto,phi:0:6.3:12"), DomainError);
        CHECK_THROWS_AS(SweepGrid::parse("a:0:1:11,b:0:0.6:3,phi:0:6:12"), DomainError);
        CHECK_THROWS_AS(SweepGrid::parse("a:0:1:x,b:auto,phi:0:6:12"), DomainError);
        CHECK_THROWS_AS(SweepGrid::parse("a:0:1:11,b:auto,phi:0:6:12,c:0:1:2"), DomainError);
    }

    TEST_CASE("spot rows") {
        const auto rows = sweep_separable(SweepGrid::parse("a:0.5:1:2,b:0:0:1,phi:0:0:1"));
        REQUIRE(rows.size() == 2);
        CHECK(std::abs(rows[0].numeric) < 1e-12);
        CHECK(std::abs(rows[0].closed_form) < 1e-12);
        CHECK(std::abs(rows[1].numeric - 1.0 / 12.0) < 1e-12);
        CHECK(std::abs(rows[1].closed_form - 1.0 / 12.0) < 1e-12);
    }

    TEST_CASE("full 11 x 11 x 12 grid") {
        const auto rows = sweep_separable(SweepGrid::parse("a:0:1:11,b:auto:11,phi:0:6.283:12"));
        CHECK(rows.size() == 11 * 11 * 12);
        for (const auto& r : rows) {
            CHECK(r.abs_diff < 1e-12);
            CHECK(r.numeric >= -1e-12);
            CHECK(r.closed_form >= -1e-12);
        }
    }

    TEST_CASE("csv round trip and schema") {
        const auto rows = sweep_separable(SweepGrid::parse("a:0:1:5,b:auto,phi:0:6:4"));
        const std::string text = to_csv(rows);
        CHECK(text.rfind("a,b,phi,numeric,closed_form,abs_diff\n", 0) == 0);
        const auto back = parse_sweep_csv(text);
        REQUIRE(back.size() == rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) CHECK(back[i].numeric == rows[i].numeric);
        CHECK_THROWS_AS(parse_sweep_csv("a,b\n1,2\n"), SchemaError);
        CHECK_THROWS_AS(parse_sweep_csv("a,b,phi,numeric,closed_form,abs_diff\n1,2,3\n"), SchemaError);
        CHECK_THROWS_AS(parse_sweep_csv("a,b,phi,numeric,closed_form,abs_diff\n1,2,3,x,5,6\n"), SchemaError);
    }
}

TEST_SUITE("cli") {
    TEST_CASE("spin-example") {
        TempDir dir;
        const CliResult r = run({"spin-example", "--json", dir / "spin.json"});
        CHECK(r.code == 0);
        CHECK(r.out.find("0.250000, 0.250000") != std::string::npos);
        CHECK(r.out.find("PASS") != std::string::npos);
        const auto j = nlohmann::json::parse(read(dir / "spin.json"));
        CHECK(j.at("pass").get<bool>());
        CHECK(j.at("matrices").at("upper_direct").at("dim") == 4);
    }

    TEST_CASE("gap with commuting inputs reports zero gap") {
        TempDir dir;
        save_matrix(dir / "x.json", gen::qubit_x().matrix());
        save_matrix(dir / "z.json", gen::qubit_z().matrix());
        save_matrix(dir / "zc.json", gen::qubit_z().complement_matrix());
        const CliResult r = run({"gap", "--p1", dir / "x.json", "--q1", dir / "z.json", "--p2", dir / "z.json",
                                 "--q2", dir / "zc.json", "--json", dir / "gap.json"});
        CHECK(r.code == 0);
        CHECK(r.out.find("gap is zero") != std::string::npos);
        const auto j = nlohmann::json::parse(read(dir / "gap.json"));
        CHECK(j.at("gap").at("max_abs").get<double>() <= 1e-9);

        const CliResult xz = run({"gap", "--p1", dir / "x.json", "--q1", dir / "z.json", "--p2", dir / "x.json",
                                  "--q2", dir / "z.json"});
        CHECK(xz.code == 0);
        CHECK(xz.out.find("gap is zero") == std::string::npos);
    }

    TEST_CASE("gap with malformed input exits 2 naming the file") {
        TempDir dir;
        save_matrix(dir / "x.json", gen::qubit_x().matrix());
        write(dir / "bad.json", R"({"dim": 2, "entries": [[[1,0],[0,0]]]})");
        ComplexMatrix half = identity(2) * 0.5;
        save_matrix(dir / "half.json", half);
        const CliResult r = run({"gap", "--p1", dir / "x.json", "--q1", dir / "bad.json", "--p2", dir / "x.json",
                                 "--q2", dir / "x.json"});
        CHECK(r.code == 2);
        CHECK(r.err.find("bad.json") != std::string::npos);
        const CliResult h = run({"gap", "--p1", dir / "x.json", "--q1", dir / "half.json", "--p2", dir / "x.json",
                                 "--q2", dir / "x.json"});
        CHECK(h.code == 2);
        CHECK(h.err.find("not a projector") != std::string::npos);
    }

    TEST_CASE("sweep writes a self-consistent csv") {
        TempDir dir;
        const CliResult r = run({"sweep", "--grid", "a:0:1:11,b:auto,phi:0:6.283:12", "--csv", dir / "s.csv"});
        CHECK(r.code == 0);
        CHECK(parse_sweep_csv(read(dir / "s.csv")).size() == 132);
        CHECK(run({"sweep", "--grid", "a:0:3:2,b:auto,phi:0:1:2"}).code == 2);
    }

    TEST_CASE("verify with a config file, seed override and replay") {
        TempDir dir;
        write(dir / "cfg.json", R"({"dims": [[2, 2], [2, 3]], "samples_per_dim": 5, "threads": 1})");
        const CliResult r = run({"verify", "--config", dir / "cfg.json", "--seed", "17", "--json", dir / "v.json"});
        CHECK(r.code == 0);
        const auto j = nlohmann::json::parse(read(dir / "v.json"));
        CHECK_NOTHROW(validate_campaign_json(j));
        CHECK(j.at("config").at("master_seed") == 17);
        CHECK(j.at("summary").at("samples") == 10);

        const std::string seed = j.at("samples").at(6).at("seed");
        const CliResult rep = run({"verify", "--replay", seed, "--dims", "2x3", "--variant", "generic"});
        CHECK(rep.code == 0);
        CHECK(rep.out.find("PASS") != std::string::npos);
    }

    TEST_CASE("usage and config errors exit 2") {
        TempDir dir;
        CHECK(run({}).code == 2);
        CHECK(run({"frobnicate"}).code == 2);
        CHECK(run({"verify", "--seed", "abc"}).code == 2);
        CHECK(run({"verify", "--config", dir / "missing.json"}).code == 2);
        write(dir / "bad.json", R"({"dims": [[2, 300]]})");
        CHECK(run({"verify", "--config", dir / "bad.json"}).code == 2);
        CHECK(run({"verify", "--replay", "5", "--dims", "2by2"}).code == 2);
        CHECK(run({"gap", "--p1", "x"}).code == 2);
    }

    TEST_CASE("check failures exit 1") {
        TempDir dir;
        write(dir / "cfg.json", R"({"dims": [[2, 2]], "samples_per_dim": 3, "tolerances": {"roundtrip": 1e-300}})");
        CHECK(run({"verify", "--config", dir / "cfg.json"}).code == 1);
    }
}
