#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "prefrec/cli.hpp"
#include "prefrec/estimator.hpp"
#include "prefrec/experiment.hpp"

using namespace prefrec;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(const std::vector<std::string>& args, std::string* out_text = nullptr,
        std::string* err_text = nullptr) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

}  // namespace

TEST_CASE("simulate is byte-deterministic and round-trips through estimate") {
    TempDir tmp("prefrec_cli_sim");
    const std::string cfg = tmp.file("sim.cfg");
    write_file(cfg,
               "space = simplex\n"
               "d = 2\n"
               "family = expected_utility\n"
               "v = 0.8 -0.8\n"
               "plan = random\n"
               "n = 60\n"
               "noise = exponential\n"
               "kappa = 2\n"
               "seed = 11\n");
    CHECK(run({"simulate", "--config", cfg, "--out", tmp.file("run1")}) == 0);
    CHECK(run({"simulate", "--config", cfg, "--out", tmp.file("run2")}) == 0);
    const std::string csv1 = read_file(tmp.file("run1") + "/choices.csv");
    CHECK(csv1 == read_file(tmp.file("run2") + "/choices.csv"));
    CHECK(read_file(tmp.file("run1") + "/choices.csv.meta") ==
          read_file(tmp.file("run2") + "/choices.csv.meta"));
    CHECK(csv1.find("problem_index,x0,x1,y0,y1,chosen,tie_flag") == 0);
    // row count matches n
    std::size_t rows = 0;
    for (char c : csv1) rows += c == '\n' ? 1 : 0;
    CHECK(rows == 61);  // header + 60 records

    // a different seed changes the bytes and the recorded hash
    CHECK(run({"simulate", "--config", cfg, "--seed", "12", "--out", tmp.file("run3")}) == 0);
    CHECK(read_file(tmp.file("run3") + "/choices.csv") != csv1);

    // estimate the simulated data
    const std::string ecfg = tmp.file("est.cfg");
    write_file(ecfg,
               "space = simplex\n"
               "d = 2\n"
               "family = expected_utility\n"
               "seed = 11\n");
    std::string out_text;
    CHECK(run({"estimate", "--config", ecfg, "--data", tmp.file("run1") + "/choices.csv", "--out",
               tmp.file("est")},
              &out_text) == 0);
    CHECK(out_text.find("exact true") != std::string::npos);
    const std::string jsonl = read_file(tmp.file("est") + "/estimates.jsonl");
    CHECK(jsonl.find("\"family\":\"expected_utility\"") != std::string::npos);
}

TEST_CASE("noiseless simulate reports zero loss for the truth") {
    TempDir tmp("prefrec_cli_noiseless");
    const std::string cfg = tmp.file("sim.cfg");
    write_file(cfg,
               "space = simplex\n"
               "d = 3\n"
               "family = expected_utility\n"
               "v = 1.0 -0.2 -0.8\n"
               "plan = exhaustive\n"
               "n = 80\n"
               "noise = none\n"
               "seed = 4\n");
    REQUIRE(run({"simulate", "--config", cfg, "--out", tmp.file("out")}) == 0);
    const auto space = AlternativeSpace::simplex(3);
    const auto [rel, plan] = read_choice_csv(tmp.file("out") + "/choices.csv", space);
    const auto truth = PreferenceSpec::expected_utility(space, {1.0, -0.2, -0.8});
    CHECK(kemeny_loss(truth, rel) == 0.0);
}

TEST_CASE("a saved preference file drives simulation and estimation round trips") {
    TempDir tmp("prefrec_cli_pref_file");
    const auto space = AlternativeSpace::simplex(2);
    const auto truth = PreferenceSpec::expected_utility(space, {0.7, -0.7});
    write_file(tmp.file("truth.pref"), truth.serialize());
    const std::string cfg = tmp.file("sim.cfg");
    write_file(cfg,
               "space = simplex\n"
               "d = 2\n"
               "truth_file = " + tmp.file("truth.pref") + "\n" +
               "plan = random\n"
               "n = 50\n"
               "noise = none\n"
               "seed = 9\n");
    REQUIRE(run({"simulate", "--config", cfg, "--out", tmp.file("out")}) == 0);

    const std::string ecfg = tmp.file("est.cfg");
    write_file(ecfg, "space = simplex\nd = 2\nfamily = expected_utility\nseed = 9\n");
    REQUIRE(run({"estimate", "--config", ecfg, "--data", tmp.file("out") + "/choices.csv", "--out",
                 tmp.file("out")}) == 0);
    // the saved estimate reloads to the same preference
    const auto reloaded = PreferenceSpec::parse(read_file(tmp.file("out") + "/estimate.pref"));
    const auto [rel, plan] = read_choice_csv(tmp.file("out") + "/choices.csv", space);
    CHECK(kemeny_loss(reloaded, rel) == 0.0);
    CHECK(reloaded.family_name() == "expected_utility");
}

TEST_CASE("cli validation failures use exit code 2 and leave no outputs") {
    TempDir tmp("prefrec_cli_bad");
    const std::string cfg = tmp.file("bad.cfg");
    write_file(cfg, "space = simplex\nd = 2\nfamily = expected_utility\nv = 1 -1\nplan = random\n");
    std::string err;
    CHECK(run({"simulate", "--config", cfg, "--out", tmp.file("o")}, nullptr, &err) == 2);  // n missing
    CHECK(err.find("validation error") != std::string::npos);
    CHECK_FALSE(fs::exists(tmp.file("o") + "/choices.csv"));

    CHECK(run({"bogus-command", "--config", cfg}, nullptr, &err) == 2);
    CHECK(run({"simulate"}, nullptr, &err) == 2);  // --config required

    // missing config file is an io error
    CHECK(run({"simulate", "--config", tmp.file("absent.cfg")}, nullptr, &err) == 3);
}

TEST_CASE("corrupted data rows are named") {
    TempDir tmp("prefrec_cli_corrupt");
    const std::string data = tmp.file("choices.csv");
    write_file(data,
               "problem_index,x0,x1,y0,y1,chosen,tie_flag\n"
               "0,1,0,0,1,0,0\n"
               "1,0.5,0.5,oops,0.6,0,0\n");
    const std::string cfg = tmp.file("est.cfg");
    write_file(cfg, "space = simplex\nd = 2\nfamily = expected_utility\n");
    std::string err;
    CHECK(run({"estimate", "--config", cfg, "--data", data, "--out", tmp.file("o")}, nullptr, &err) == 2);
    CHECK(err.find("row 3") != std::string::npos);
}

TEST_CASE("demo-nonclosed trajectory") {
    TempDir tmp("prefrec_cli_demo");
    const std::string cfg = tmp.file("demo.cfg");
    write_file(cfg,
               "space = real_line\n"
               "schedule_max = 12\n"
               "grid_lo = -2\n"
               "grid_hi = 2\n"
               "grid_points = 17\n"
               "seed = 1\n");
    REQUIRE(run({"demo-nonclosed", "--config", cfg, "--out", tmp.file("out")}) == 0);
    std::ifstream in(tmp.file("out") + "/nonclosed_trajectory.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "n,loss,dist_to_indifference,dist_to_true,seed,config_hash");
    std::string line;
    std::size_t rows = 0;
    double prev_indiff = 1e300;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++rows;
        std::istringstream ss(line);
        std::string f;
        std::getline(ss, f, ',');  // n
        std::getline(ss, f, ',');  // loss
        CHECK(std::stod(f) == 0.0);
        std::getline(ss, f, ',');  // dist to indifference
        const double di = std::stod(f);
        CHECK(di <= prev_indiff + 1e-12);
        prev_indiff = di;
    }
    CHECK(rows == 12);
}

TEST_CASE("check-properties report") {
    TempDir tmp("prefrec_cli_props");
    const std::string cfg = tmp.file("props.cfg");
    write_file(cfg,
               "space = simplex\n"
               "d = 3\n"
               "family = expected_utility\n"
               "v = -1.0 0.1 1.2\n"
               "dominance = fsd\n"
               "grid_points_per_dim = 6\n"
               "probe_pairs = 60\n"
               "probe_samples = 200\n"
               "seed = 2\n");
    std::string out_text;
    REQUIRE(run({"check-properties", "--config", cfg, "--out", tmp.file("out")}, &out_text) == 0);
    CHECK(out_text.find("completeness  pass") != std::string::npos);
    CHECK(out_text.find("local_strictness  pass") != std::string::npos);
    CHECK(out_text.find("grodal_transitivity  pass") != std::string::npos);
    CHECK(out_text.find("strict_monotonicity_fsd  pass") != std::string::npos);
    CHECK(out_text.find("all properties passed") != std::string::npos);
    CHECK(fs::exists(tmp.file("out") + "/properties.txt"));

    // total indifference is flagged as not locally strict
    const std::string cfg2 = tmp.file("props2.cfg");
    write_file(cfg2,
               "space = simplex\n"
               "d = 3\n"
               "family = total_indifference\n"
               "grid_points_per_dim = 5\n"
               "seed = 2\n");
    REQUIRE(run({"check-properties", "--config", cfg2, "--out", tmp.file("out2")}, &out_text) == 0);
    CHECK(out_text.find("local_strictness  FAIL") != std::string::npos);
}

TEST_CASE("rates command writes both curves") {
    TempDir tmp("prefrec_cli_rates");
    const std::string cfg = tmp.file("rates.cfg");
    write_file(cfg,
               "space = simplex\n"
               "d = 2\n"
               "family = expected_utility\n"
               "v = 1 -1\n"
               "noise = exponential\n"
               "kappa = 2\n"
               "etas = 0.3\n"
               "delta = 0.5\n"
               "n_schedule = 10 20\n"
               "replications = 5\n"
               "probes = 3\n"
               "mc = 2000\n"
               "seed = 6\n");
    REQUIRE(run({"rates", "--config", cfg, "--out", tmp.file("out")}) == 0);
    const std::string complexity = read_file(tmp.file("out") + "/complexity.csv");
    const std::string gap = read_file(tmp.file("out") + "/gap.csv");
    CHECK(complexity.find("eta,delta,n,successes") == 0);
    CHECK(gap.find("eta,gap,stderr") == 0);
    // reruns are byte-identical
    REQUIRE(run({"rates", "--config", cfg, "--out", tmp.file("out2")}) == 0);
    CHECK(read_file(tmp.file("out2") + "/complexity.csv") == complexity);
    CHECK(read_file(tmp.file("out2") + "/gap.csv") == gap);
}
