#include "prefrec/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "prefrec/bounds.hpp"
#include "prefrec/errors.hpp"
#include "prefrec/estimator.hpp"
#include "prefrec/experiment.hpp"
#include "prefrec/grid.hpp"
#include "prefrec/metric.hpp"
#include "prefrec/preference.hpp"
#include "prefrec/probes.hpp"
#include "prefrec/version.hpp"

namespace prefrec {

namespace fs = std::filesystem;

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path);
    RunConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
        const auto trim = [](std::string& s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            s = (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
        };
        trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("config " + path + ": line " + std::to_string(lineno) +
                                  " is not of the form key = value");
        }
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        trim(key);
        trim(val);
        if (key.empty()) {
            throw ValidationError("config " + path + ": empty key on line " + std::to_string(lineno));
        }
        cfg.kv_[key] = val;
    }
    return cfg;
}

std::string RunConfig::get(const std::string& key, const std::string& fallback) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

std::string RunConfig::require(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw ValidationError("config: missing required key '" + key + "'");
    return it->second;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw ValidationError("config: key '" + key + "' is not a number: " + it->second);
    }
}

double RunConfig::require_double(const std::string& key) const {
    require(key);
    return get_double(key, 0.0);
}

std::size_t RunConfig::get_size(const std::string& key, std::size_t fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        const long long v = std::stoll(it->second);
        if (v < 0) throw std::invalid_argument("negative");
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw ValidationError("config: key '" + key + "' is not a nonnegative integer: " + it->second);
    }
}

std::uint64_t RunConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        return std::stoull(it->second);
    } catch (const std::exception&) {
        throw ValidationError("config: key '" + key + "' is not an integer: " + it->second);
    }
}

std::vector<double> RunConfig::require_vector(const std::string& key) const {
    std::istringstream ss(require(key));
    std::vector<double> out;
    double v;
    while (ss >> v) out.push_back(v);
    if (out.empty()) throw ValidationError("config: key '" + key + "' holds no numbers");
    return out;
}

std::vector<double> RunConfig::get_vector(const std::string& key, std::vector<double> fallback) const {
    return has(key) ? require_vector(key) : std::move(fallback);
}

std::vector<std::size_t> RunConfig::require_sizes(const std::string& key) const {
    std::vector<std::size_t> out;
    for (double v : require_vector(key)) {
        if (v < 1 || v != std::floor(v)) {
            throw ValidationError("config: key '" + key + "' must list positive integers");
        }
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

std::string RunConfig::hash() const {
    std::string canon;
    for (const auto& [k, v] : kv_) {
        canon += k;
        canon += '=';
        canon += v;
        canon += '\n';
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canon.data(), canon.size())));
    return buf;
}

namespace {

AlternativeSpace space_from_config(const RunConfig& cfg) {
    const std::string name = cfg.require("space");
    const std::size_t d = cfg.get_size("d", name == "real_line" ? 1 : (name == "dated_reward" ? 2 : 0));
    if (d == 0) throw ValidationError("config: key 'd' required for space " + name);
    return parse_space(name, d);
}

PreferenceSpec preference_from_config(const RunConfig& cfg, const AlternativeSpace& space) {
    if (cfg.has("truth_file")) {
        std::ifstream in(cfg.require("truth_file"));
        if (!in) throw IoError("cannot open preference file: " + cfg.require("truth_file"));
        std::stringstream ss;
        ss << in.rdbuf();
        PreferenceSpec p = PreferenceSpec::parse(ss.str());
        if (!p.space().same_shape(space)) {
            throw ValidationError("preference file space does not match the configured space");
        }
        return p;
    }
    const std::string family = cfg.require("family");
    if (family == "expected_utility") {
        return PreferenceSpec::expected_utility(space, cfg.require_vector("v"));
    }
    if (family == "discounted_utility") {
        return PreferenceSpec::discounted_utility(
            space, cfg.require_vector("delta"),
            PiecewiseLinear(cfg.require_vector("knots_x"), cfg.require_vector("knots_y")),
            cfg.get_double("epsilon", 0.05), cfg.get_double("slope_min", 0.5), cfg.get_double("slope_max", 2.0));
    }
    if (family == "total_indifference") {
        return PreferenceSpec::total_indifference(space);
    }
    throw ValidationError("config: unsupported truth family '" + family + "'");
}

ErrorModel error_model_from_config(const RunConfig& cfg) {
    const std::string noise = cfg.get("noise", "exponential");
    if (noise == "exponential") return ErrorModel::exponential(cfg.get_double("kappa", 2.0));
    if (noise == "linear_clamp") return ErrorModel::linear_clamp(cfg.require_double("slope"));
    throw ValidationError("config: unknown noise kind '" + noise + "'");
}

EvaluationGrid grid_from_config(const RunConfig& cfg, const AlternativeSpace& space) {
    switch (space.kind()) {
        case SpaceKind::Simplex:
        case SpaceKind::InteriorSimplex: {
            const std::size_t per_dim = cfg.get_size("grid_points_per_dim", space.dim() == 2 ? 15 : 8);
            return simplex_grid(space.dim(), per_dim, space.kind() == SpaceKind::InteriorSimplex);
        }
        case SpaceKind::RealLine: {
            const double lo = cfg.get_double("grid_lo", space.sampling_support().lo[0]);
            const double hi = cfg.get_double("grid_hi", space.sampling_support().hi[0]);
            return line_grid(lo, hi, cfg.get_size("grid_points", 41));
        }
        default:
            return box_grid(space, cfg.get_size("grid_points_per_dim", 6));
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("failed writing: " + path);
}

struct CliArgs {
    std::string command;
    RunConfig cfg;
    std::string out_dir = ".";
    std::size_t threads = 1;
    std::uint64_t seed = 0;
    bool seed_overridden = false;
};

CliArgs parse_args(const std::vector<std::string>& args) {
    if (args.empty()) throw ValidationError("usage: preflab <command> --config PATH [--seed N] [--out DIR] [--threads N] [key=value ...]");
    CliArgs out;
    out.command = args[0];
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;
    for (std::size_t i = 1; i < args.size(); ++i) {
        const std::string& a = args[i];
        auto next = [&](const char* flag) -> const std::string& {
            if (i + 1 >= args.size()) throw ValidationError(std::string(flag) + " requires a value");
            return args[++i];
        };
        if (a == "--config") config_path = next("--config");
        else if (a == "--seed") overrides.emplace_back("seed", next("--seed"));
        else if (a == "--out") out.out_dir = next("--out");
        else if (a == "--threads") overrides.emplace_back("threads", next("--threads"));
        else if (a == "--data") overrides.emplace_back("data", next("--data"));
        else if (a.find('=') != std::string::npos) {
            const auto eq = a.find('=');
            overrides.emplace_back(a.substr(0, eq), a.substr(eq + 1));
        } else {
            throw ValidationError("unrecognized argument: " + a);
        }
    }
    if (config_path.empty()) throw ValidationError("--config PATH is required");
    out.cfg = RunConfig::from_file(config_path);
    for (const auto& [k, v] : overrides) out.cfg.set(k, v);
    out.threads = out.cfg.get_size("threads", 1);
    if (out.threads < 1) throw ValidationError("--threads must be >= 1");
    out.seed = out.cfg.get_u64("seed", 0);
    return out;
}

std::string meta_block(const CliArgs& a, const std::vector<std::pair<std::string, std::string>>& extra) {
    std::ostringstream out;
    out << "artifact_version = " << kArtifactVersion << '\n';
    out << "command = " << a.command << '\n';
    out << "seed = " << a.seed << '\n';
    out << "config_hash = " << a.cfg.hash() << '\n';
    for (const auto& [k, v] : extra) out << k << " = " << v << '\n';
    return out.str();
}

int cmd_simulate(const CliArgs& a, std::ostream& out) {
    const AlternativeSpace space = space_from_config(a.cfg);
    const PreferenceSpec truth = preference_from_config(a.cfg, space);
    const std::size_t n = a.cfg.get_size("n", 0);
    if (n < 1) throw ValidationError("config: simulate requires n >= 1");
    const std::string plan_kind = a.cfg.get("plan", "random");
    ExperimentPlan plan = plan_kind == "exhaustive" ? exhaustive_plan(space, n)
                         : plan_kind == "random"
                             ? random_plan(space, n, a.seed)
                             : throw ValidationError("config: unknown plan kind '" + plan_kind + "'");

    const std::string noise = a.cfg.get("noise", "none");
    RevealedRelation rel;
    std::size_t ties = 0, skipped = 0;
    if (noise == "none") {
        const std::string tie_key = a.cfg.get("tie_rule", "lexicographic");
        const TieRule rule = tie_key == "lexicographic" ? TieRule::Lexicographic
                             : tie_key == "flag_and_skip"
                                 ? TieRule::FlagAndSkip
                                 : throw ValidationError("config: unknown tie rule '" + tie_key + "'");
        SimulationResult sim = simulate_noiseless(truth, plan, rule);
        rel = std::move(sim.relation);
        ties = sim.ties_flagged;
        skipped = sim.skipped;
    } else {
        rel = simulate_noisy(truth, plan, error_model_from_config(a.cfg), a.seed);
        ties = rel.ties();
    }

    fs::create_directories(a.out_dir);
    const std::string csv_path = (fs::path(a.out_dir) / a.cfg.get("out", "choices.csv")).string();
    write_choice_csv(rel, plan, csv_path);
    write_text_file(csv_path + ".meta",
                    meta_block(a, {{"space", space.name()},
                                   {"d", std::to_string(space.dim())},
                                   {"n", std::to_string(rel.n())},
                                   {"ties", std::to_string(ties)},
                                   {"skipped", std::to_string(skipped)}}));
    out << "wrote " << rel.n() << " records to " << csv_path << "\n";
    return 0;
}

int cmd_estimate(const CliArgs& a, std::ostream& out) {
    const AlternativeSpace space = space_from_config(a.cfg);
    const std::string data = a.cfg.require("data");
    const auto [rel, plan] = read_choice_csv(data, space);

    const std::string family = a.cfg.get("family", "expected_utility");
    EstimatorConfig ecfg;
    ecfg.seed = a.seed;
    ecfg.starts = a.cfg.get_size("starts", 32);
    ecfg.iterations = a.cfg.get_size("iterations", 500);
    ecfg.step_decay = a.cfg.get_double("step_decay", 0.9);
    EstimateResult result = [&] {
        if (family == "expected_utility") {
            ecfg.method = EstimateMethod::ExactEnumeration;
            return kemeny_minimize_eu(rel, space.dim(), ecfg);
        }
        if (family == "discounted_utility") {
            ecfg.method = EstimateMethod::MultiStartSearch;
            std::vector<double> knots = a.cfg.get_vector("knots_x", {0.0, 0.75, 1.5, 2.25, 3.0});
            return kemeny_minimize_search(du_family_template(space, std::move(knots)), rel, ecfg);
        }
        throw ValidationError("config: unsupported estimation family '" + family + "'");
    }();

    fs::create_directories(a.out_dir);
    const std::string jsonl = (fs::path(a.out_dir) / a.cfg.get("out", "estimates.jsonl")).string();
    append_estimate_jsonl(result, jsonl,
                          {{"seed", std::to_string(a.seed)},
                           {"config_hash", a.cfg.hash()},
                           {"artifact_version", kArtifactVersion}});
    // reloadable save of the fitted preference
    const std::string pref_path = (fs::path(a.out_dir) / a.cfg.get("out_pref", "estimate.pref")).string();
    write_text_file(pref_path, result.estimate.serialize());
    out << "loss " << format_double(result.loss) << " exact " << (result.exact ? "true" : "false")
        << " candidates " << result.candidates_evaluated << " -> " << jsonl << "\n";
    return 0;
}

int cmd_rates(const CliArgs& a, std::ostream& out) {
    const AlternativeSpace space = space_from_config(a.cfg);
    const PreferenceSpec truth = preference_from_config(a.cfg, space);
    const ErrorModel em = error_model_from_config(a.cfg);
    const EvaluationGrid grid = grid_from_config(a.cfg, space);

    const std::vector<double> etas = a.cfg.require_vector("etas");
    const double delta = a.cfg.require_double("delta");
    const std::vector<std::size_t> schedule = a.cfg.require_sizes("n_schedule");
    const std::size_t replications = a.cfg.get_size("replications", 20);
    const std::size_t probes = a.cfg.get_size("probes", 16);
    const std::size_t mc = a.cfg.get_size("mc", 200000);

    std::vector<ComplexityRow> rows;
    std::vector<GapEstimate> gaps;
    for (double eta : etas) {
        rows.push_back(estimate_sample_complexity(truth, eta, delta, em, grid, replications, schedule,
                                                  a.seed, a.threads));
        gaps.push_back(estimate_r(eu_family_sampler(space), truth, eta, grid, em, space, probes, mc, a.seed));
    }
    fs::create_directories(a.out_dir);
    const std::string complexity_path = (fs::path(a.out_dir) / "complexity.csv").string();
    const std::string gap_path = (fs::path(a.out_dir) / "gap.csv").string();
    write_complexity_csv(rows, a.seed, a.cfg.hash(), complexity_path);
    write_gap_csv(gaps, a.seed, a.cfg.hash(), gap_path);
    out << "wrote " << complexity_path << " and " << gap_path << "\n";
    return 0;
}

int cmd_demo_nonclosed(const CliArgs& a, std::ostream& out) {
    const std::string space_name = a.cfg.get("space", "real_line");
    if (space_name != "real_line") throw ValidationError("demo-nonclosed runs on the real line");
    const AlternativeSpace space = AlternativeSpace::real_line();
    const std::size_t schedule_max = a.cfg.get_size("schedule_max", 40);
    if (schedule_max < 1) throw ValidationError("config: schedule_max must be >= 1");
    const EvaluationGrid grid = grid_from_config(a.cfg, space);

    const ExperimentPlan full = exhaustive_plan(space, schedule_max);
    // The data-generating order: larger is better.
    std::vector<Point> alts;
    for (const ChoiceProblem& pr : full.problems) {
        alts.push_back(pr.a);
        alts.push_back(pr.b);
    }
    std::sort(alts.begin(), alts.end());
    alts.erase(std::unique(alts.begin(), alts.end()), alts.end());
    std::vector<double> alt_values;
    for (const Point& p : alts) alt_values.push_back(p[0]);
    const PreferenceSpec truth_on_data = PreferenceSpec::tabulated(space, alts, alt_values);

    std::vector<double> grid_values;
    for (const Point& p : grid.points) grid_values.push_back(p[0]);
    const PreferenceSpec truth_on_grid = PreferenceSpec::tabulated(space, grid.points, grid_values);
    const PreferenceSpec indifferent = PreferenceSpec::total_indifference(space);
    const RelationGraph g_true = relation_graph(truth_on_grid, grid);
    const RelationGraph g_indiff = relation_graph(indifferent, grid);

    std::ostringstream csv;
    csv << "n,loss,dist_to_indifference,dist_to_true,seed,config_hash\n";
    for (std::size_t n = 1; n <= schedule_max; ++n) {
        ExperimentPlan prefix{space, PlanDesign::Exhaustive,
                              std::vector<ChoiceProblem>(full.problems.begin(), full.problems.begin() + n), 0};
        const SimulationResult sim = simulate_noiseless(truth_on_data, prefix, TieRule::Lexicographic);
        std::vector<double> base;
        for (const ChoiceProblem& pr : prefix.problems) {
            base.push_back(pr.a[0]);
            base.push_back(pr.b[0]);
        }
        std::sort(base.begin(), base.end());
        base.erase(std::unique(base.begin(), base.end()), base.end());
        const PreferenceSpec rationalizer = erratic_utility(static_cast<int>(n), base);
        const double loss = kemeny_loss(rationalizer, sim.relation);
        if (loss != 0.0) {
            throw ContractViolation("demo-nonclosed: erratic rationalizer failed to fit the data exactly");
        }
        const RelationGraph g_n = relation_graph(rationalizer, grid);
        csv << n << ',' << format_double(loss) << ','
            << format_double(hausdorff_distance(g_n, g_indiff, grid)) << ','
            << format_double(hausdorff_distance(g_n, g_true, grid)) << ',' << a.seed << ',' << a.cfg.hash()
            << '\n';
    }
    fs::create_directories(a.out_dir);
    const std::string path = (fs::path(a.out_dir) / a.cfg.get("out", "nonclosed_trajectory.csv")).string();
    write_text_file(path, csv.str());
    out << "wrote " << path << "\n";
    return 0;
}

int cmd_check_properties(const CliArgs& a, std::ostream& out) {
    const AlternativeSpace space = space_from_config(a.cfg);
    const PreferenceSpec pref = preference_from_config(a.cfg, space);
    const EvaluationGrid grid = grid_from_config(a.cfg, space);
    const double radius = a.cfg.get_double("radius", 0.05);
    const std::size_t pairs = a.cfg.get_size("probe_pairs", 200);
    const std::size_t samples = a.cfg.get_size("probe_samples", 1000);

    std::ostringstream report;
    report << "# property report\n" << meta_block(a, {{"family", pref.family_name()}});
    auto row = [&report](const std::string& name, bool ok, const std::string& detail) {
        report << name << (ok ? "  pass  " : "  FAIL  ") << detail << '\n';
        return ok;
    };
    bool all_ok = true;

    {
        Rng rng(a.seed);
        bool ok = true;
        for (std::size_t i = 0; i < samples && ok; ++i) {
            const Point x = sample_point(space, rng);
            const Point y = sample_point(space, rng);
            ok = weak_prefers(pref, x, y) || weak_prefers(pref, y, x);
        }
        all_ok &= row("completeness", ok, std::to_string(samples) + " sampled pairs");
    }
    {
        ProbeReport rep;
        const bool ok = is_locally_strict_probe(pref, grid, radius, &rep);
        all_ok &= row("local_strictness", ok,
                      "radius " + format_double(radius) + ", " + std::to_string(rep.checked) + " weak pairs" +
                          (ok ? "" : "; " + rep.detail));
    }
    {
        ProbeReport rep;
        const bool ok = is_grodal_transitive_probe(pref, grid, {}, &rep);
        all_ok &= row("grodal_transitivity", ok,
                      std::string(rep.exhaustive ? "exhaustive" : "sampled") + ", " +
                          std::to_string(rep.checked) + " tuples" + (ok ? "" : "; " + rep.detail));
    }
    if (a.cfg.has("dominance")) {
        const DominanceRelation rel =
            DominanceRelation::parse(a.cfg.require("dominance"), a.cfg.get_double("alpha", 0.0));
        ProbeReport rep;
        bool ok = is_strictly_monotone_probe(pref, rel, pairs, a.seed, &rep);
        all_ok &= row("strict_monotonicity_" + rel.name(), ok,
                      std::to_string(pairs) + " dominating pairs" + (ok ? "" : "; " + rep.detail));
        ok = dominance_irreflexive_probe(rel, space, samples, a.seed, &rep);
        all_ok &= row("dominance_irreflexive_" + rel.name(), ok, std::to_string(samples) + " samples");
        ok = dominance_open_probe(rel, space, pairs, 1e-6, a.seed, &rep);
        all_ok &= row("dominance_open_" + rel.name(), ok,
                      std::to_string(pairs) + " pairs at 1e-6" + (ok ? "" : "; " + rep.detail));
    }

    fs::create_directories(a.out_dir);
    const std::string path = (fs::path(a.out_dir) / a.cfg.get("out", "properties.txt")).string();
    write_text_file(path, report.str());
    out << report.str();
    out << (all_ok ? "all properties passed" : "SOME PROPERTIES FAILED") << " -> " << path << "\n";
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        const CliArgs a = parse_args(args);
        if (a.command == "simulate") return cmd_simulate(a, out);
        if (a.command == "estimate") return cmd_estimate(a, out);
        if (a.command == "rates") return cmd_rates(a, out);
        if (a.command == "demo-nonclosed") return cmd_demo_nonclosed(a, out);
        if (a.command == "check-properties") return cmd_check_properties(a, out);
        throw ValidationError("unknown command: " + a.command +
                              " (expected simulate | estimate | rates | demo-nonclosed | check-properties)");
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        err << "io error: " << e.what() << "\n";
        return 3;
    } catch (const ContractViolation& e) {
        err << "internal contract violation: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace prefrec
