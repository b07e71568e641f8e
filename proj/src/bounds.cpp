#include "prefrec/bounds.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <thread>

#include "prefrec/errors.hpp"

namespace prefrec {

std::vector<PairDraw> draw_mu_sample(const PreferenceSpec& p_true, const ErrorModel& em,
                                     const AlternativeSpace& lambda_space, std::size_t mc,
                                     std::uint64_t seed) {
    if (mc < 1) throw ValidationError("mu sample: mc must be >= 1");
    std::vector<PairDraw> draws;
    draws.reserve(mc);
    const Rng master(seed);
    for (std::size_t i = 0; i < mc; ++i) {
        Rng rng = master.substream(i);
        Point x = sample_point(lambda_space, rng);
        Point y = sample_point(lambda_space, rng);
        const double qx = choice_probability(p_true, em, x, y);
        draws.push_back({std::move(x), std::move(y), qx, 1.0 - qx});
    }
    return draws;
}

double estimate_mu(const PreferenceSpec& pA, const std::vector<PairDraw>& draws) {
    if (draws.empty()) throw ValidationError("estimate_mu: no draws");
    double acc = 0.0;
    for (const PairDraw& d : draws) {
        double mass = 0.0;
        if (weak_prefers(pA, d.x, d.y)) mass += d.q_choose_x;
        if (weak_prefers(pA, d.y, d.x)) mass += d.q_choose_y;
        acc += mass;
    }
    return acc / static_cast<double>(draws.size());
}

double estimate_mu(const PreferenceSpec& pA, const PreferenceSpec& p_true, const ErrorModel& em,
                   const AlternativeSpace& lambda_space, std::size_t mc, std::uint64_t seed) {
    return estimate_mu(pA, draw_mu_sample(p_true, em, lambda_space, mc, seed));
}

FamilySampler eu_family_sampler(const AlternativeSpace& space) {
    return [space](Rng& rng) { return PreferenceSpec::expected_utility(space, sample_eu_index(space.dim(), rng)); };
}

GapEstimate estimate_r(const FamilySampler& sampler, const PreferenceSpec& p_true, double eta,
                       const EvaluationGrid& grid, const ErrorModel& em,
                       const AlternativeSpace& lambda_space, std::size_t probes, std::size_t mc,
                       std::uint64_t seed) {
    if (!(eta > 0.0)) throw ValidationError("estimate_r: eta must be > 0");
    if (probes < 1) throw ValidationError("estimate_r: probes must be >= 1");
    const RelationGraph truth_graph = relation_graph(p_true, grid);
    const auto draws = draw_mu_sample(p_true, em, lambda_space, mc, seed);
    const double mu_truth = estimate_mu(p_true, draws);

    Rng rng(mix64(seed ^ 0xa5a5a5a5a5a5a5a5ULL));
    constexpr std::size_t kMaxTriesPerProbe = 20000;
    double best_gap = std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    std::vector<PreferenceSpec> kept;
    kept.reserve(probes);
    for (std::size_t p = 0; p < probes; ++p) {
        bool found = false;
        for (std::size_t t = 0; t < kMaxTriesPerProbe; ++t) {
            PreferenceSpec cand = sampler(rng);
            const double dist = hausdorff_distance(relation_graph(cand, grid), truth_graph, grid);
            if (dist >= eta) {
                kept.push_back(std::move(cand));
                found = true;
                break;
            }
        }
        if (!found) {
            throw ValidationError(
                "estimate_r: rejection sampling found no preference at the requested distance "
                "(eta exceeds the family's diameter on this grid)");
        }
        const double gap = mu_truth - estimate_mu(kept.back(), draws);
        if (gap < best_gap) {
            best_gap = gap;
            best_idx = kept.size() - 1;
        }
    }
    const PreferenceSpec& best = kept[best_idx];
    // Standard error of the per-draw gap at the argmin probe.
    double mean = 0.0, m2 = 0.0;
    std::size_t count = 0;
    for (const PairDraw& d : draws) {
        double truth_mass = 0.0, cand_mass = 0.0;
        if (weak_prefers(p_true, d.x, d.y)) truth_mass += d.q_choose_x;
        if (weak_prefers(p_true, d.y, d.x)) truth_mass += d.q_choose_y;
        if (weak_prefers(best, d.x, d.y)) cand_mass += d.q_choose_x;
        if (weak_prefers(best, d.y, d.x)) cand_mass += d.q_choose_y;
        const double g = truth_mass - cand_mass;
        ++count;
        const double delta = g - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (g - mean);
    }
    const double var = count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
    GapEstimate out;
    out.eta = eta;
    out.gap = best_gap;
    out.stderr_ = std::sqrt(var / static_cast<double>(count));
    out.pairs_probed = probes;
    out.mc_samples = draws.size();
    return out;
}

namespace {

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t workers = std::min(threads, count);
    std::atomic<std::size_t> next{0};
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                body(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace

ComplexityRow estimate_sample_complexity(const PreferenceSpec& p_true, double eta, double delta,
                                         const ErrorModel& em, const EvaluationGrid& grid,
                                         std::size_t replications, const std::vector<std::size_t>& n_schedule,
                                         std::uint64_t seed, std::size_t threads) {
    if (replications < 1) throw ValidationError("sample complexity: replications must be >= 1");
    if (n_schedule.empty()) throw ValidationError("sample complexity: empty schedule");
    for (std::size_t i = 1; i < n_schedule.size(); ++i) {
        if (!(n_schedule[i - 1] < n_schedule[i])) {
            throw ValidationError("sample complexity: schedule must be increasing");
        }
    }
    const auto* eu = p_true.as<ExpectedUtilityFamily>();
    if (!eu) throw ValidationError("sample complexity: implemented for expected-utility truths");
    const std::size_t d = p_true.space().dim();
    const RelationGraph truth_graph = relation_graph(p_true, grid);

    ComplexityRow row;
    row.eta = eta;
    row.delta = delta;
    row.replications = replications;
    for (std::size_t ni = 0; ni < n_schedule.size(); ++ni) {
        const std::size_t n = n_schedule[ni];
        std::vector<std::uint8_t> success(replications, 0);
        parallel_for(replications, threads, [&](std::size_t rep) {
            // Seeds depend on (master seed, n index, replication) only, so
            // thread assignment cannot change results.
            const std::uint64_t rep_seed = mix64(seed ^ mix64(ni * 1000003ULL + rep));
            const ExperimentPlan plan = random_plan(p_true.space(), n, rep_seed);
            const RevealedRelation rel = simulate_noisy(p_true, plan, em, mix64(rep_seed));
            const EstimateResult est = kemeny_minimize_eu(rel, d);
            const double dist = hausdorff_distance(relation_graph(est.estimate, grid), truth_graph, grid);
            success[rep] = dist < eta ? 1 : 0;
        });
        std::size_t ok = 0;
        for (auto s : success) ok += s;
        row.cells.push_back({n, ok});
        if (!row.n_star && static_cast<double>(ok) >= (1.0 - delta) * static_cast<double>(replications)) {
            row.n_star = n;
        }
    }
    return row;
}

VcSampleBound vc_sample_bound(std::size_t vc_dimension, double r, double delta) {
    if (vc_dimension < 1) throw ValidationError("vc sample bound: VC dimension must be >= 1");
    if (!(r > 0.0)) throw ValidationError("vc sample bound: r must be > 0");
    if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("vc sample bound: delta must lie in (0,1)");
    const double v_log = static_cast<double>(vc_dimension) * std::log(4.0 * std::exp(2.0));
    const double root = 144.0 * std::sqrt(v_log) + std::sqrt(2.0 * std::log(2.0 / delta));
    VcSampleBound b;
    b.vc_term = root * root / (r * r);
    b.c_literal_numerator = 24.0 * 24.0 * v_log / 5.0;
    b.c_solved = std::sqrt(b.c_literal_numerator);
    return b;
}

ShatterResult shatter_probe_eu(std::size_t d, std::size_t k, std::size_t trials, std::uint64_t seed) {
    if (k < 1) throw ValidationError("shatter probe: k must be >= 1");
    if (d < 2) throw ValidationError("shatter probe: d must be >= 2");
    if (k > 62) throw ValidationError("shatter probe: k too large for the pattern mask");
    const AlternativeSpace space = AlternativeSpace::simplex(d);
    const auto basis = sum_zero_basis(d);
    ShatterResult out;
    out.k = k;
    Rng master(seed);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        Rng rng = master.substream(trial);
        std::vector<Point> xs(k), ys(k);
        std::vector<std::vector<double>> zetas;
        for (std::size_t i = 0; i < k; ++i) {
            xs[i] = sample_point(space, rng);
            ys[i] = sample_point(space, rng);
            std::vector<double> zeta(d - 1, 0.0);
            Point z(d);
            for (std::size_t j = 0; j < d; ++j) z[j] = xs[i][j] - ys[i][j];
            for (std::size_t r = 0; r + 1 < d; ++r) zeta[r] = dot(basis[r], z);
            if (norm(zeta) > 1e-15) zetas.push_back(std::move(zeta));
        }
        if (zetas.empty()) continue;
        const auto candidates = detail::arrangement_candidates(zetas, 1e-9);
        std::set<std::uint64_t> patterns;
        for (const auto& w : candidates) {
            std::vector<double> v(d, 0.0);
            for (std::size_t r = 0; r + 1 < d; ++r) {
                for (std::size_t j = 0; j < d; ++j) v[j] += w[r] * basis[r][j];
            }
            std::uint64_t mask = 0;
            for (std::size_t i = 0; i < k; ++i) {
                if (dot(v, xs[i]) >= dot(v, ys[i])) mask |= (1ULL << i);
            }
            patterns.insert(mask);
        }
        out.max_patterns = std::max<std::uint64_t>(out.max_patterns, patterns.size());
        if (out.max_patterns == (1ULL << k)) {
            out.shattered = true;
            return out;
        }
    }
    out.shattered = out.max_patterns == (1ULL << k);
    return out;
}

ShatterResult shatter_probe_sampled(const FamilySampler& sampler, const AlternativeSpace& space,
                                    std::size_t k, std::size_t trials, std::size_t prefs_per_trial,
                                    std::uint64_t seed) {
    if (k < 1 || k > 62) throw ValidationError("shatter probe: bad k");
    ShatterResult out;
    out.k = k;
    Rng master(seed);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        Rng rng = master.substream(trial);
        std::vector<Point> xs(k), ys(k);
        for (std::size_t i = 0; i < k; ++i) {
            xs[i] = sample_point(space, rng);
            ys[i] = sample_point(space, rng);
        }
        std::set<std::uint64_t> patterns;
        for (std::size_t p = 0; p < prefs_per_trial; ++p) {
            const PreferenceSpec pref = sampler(rng);
            std::uint64_t mask = 0;
            for (std::size_t i = 0; i < k; ++i) {
                if (weak_prefers(pref, xs[i], ys[i])) mask |= (1ULL << i);
            }
            patterns.insert(mask);
        }
        out.max_patterns = std::max<std::uint64_t>(out.max_patterns, patterns.size());
        if (out.max_patterns == (1ULL << k)) {
            out.shattered = true;
            return out;
        }
    }
    out.shattered = out.max_patterns == (1ULL << k);
    return out;
}

void write_complexity_csv(const std::vector<ComplexityRow>& rows, std::uint64_t seed,
                          const std::string& config_hash, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "eta,delta,n,successes,replications,success_rate,n_star,seed,config_hash\n";
    for (const ComplexityRow& row : rows) {
        for (const ComplexityCell& cell : row.cells) {
            out << format_double(row.eta) << ',' << format_double(row.delta) << ',' << cell.n << ','
                << cell.successes << ',' << row.replications << ','
                << format_double(static_cast<double>(cell.successes) / static_cast<double>(row.replications))
                << ',';
            if (row.n_star) out << *row.n_star;
            else out << "not_reached";
            out << ',' << seed << ',' << config_hash << '\n';
        }
    }
    if (!out) throw IoError("failed writing: " + path);
}

void write_gap_csv(const std::vector<GapEstimate>& gaps, std::uint64_t seed, const std::string& config_hash,
                   const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "eta,gap,stderr,pairs_probed,mc_samples,seed,config_hash\n";
    for (const GapEstimate& g : gaps) {
        out << format_double(g.eta) << ',' << format_double(g.gap) << ',' << format_double(g.stderr_) << ','
            << g.pairs_probed << ',' << g.mc_samples << ',' << seed << ',' << config_hash << '\n';
    }
    if (!out) throw IoError("failed writing: " + path);
}

}  // namespace prefrec
