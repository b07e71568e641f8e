#include "prefrec/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "prefrec/errors.hpp"
#include "prefrec/probes.hpp"

namespace prefrec {

double kemeny_loss(const PreferenceSpec& p, const RevealedRelation& r) {
    if (r.records.empty()) throw ValidationError("kemeny loss: empty revealed relation");
    std::size_t bad = 0;
    for (const ChoiceRecord& rec : r.records) {
        if (!weak_prefers(p, rec.chosen, rec.rejected)) ++bad;
    }
    return static_cast<double>(bad) / static_cast<double>(r.records.size());
}

bool rationalizes(const PreferenceSpec& p, const RevealedRelation& r) {
    for (const ChoiceRecord& rec : r.records) {
        if (!weak_prefers(p, rec.chosen, rec.rejected)) return false;
    }
    return !r.records.empty();
}

namespace detail {

namespace {

std::vector<double> normalized(std::vector<double> v) {
    const double n = norm(v);
    for (double& x : v) x /= n;
    return v;
}

// Unit vector orthogonal to the span of the chosen subset, or nullopt when
// the subset is rank deficient (its cells are owned by other subsets).
std::optional<std::vector<double>> orthogonal_unit(const std::vector<std::vector<double>>& zetas,
                                                   const std::vector<std::size_t>& subset, std::size_t m) {
    std::vector<std::vector<double>> basis;
    for (std::size_t idx : subset) {
        std::vector<double> v = zetas[idx];
        for (const auto& b : basis) {
            const double c = dot(v, b);
            for (std::size_t i = 0; i < m; ++i) v[i] -= c * b[i];
        }
        const double n = norm(v);
        if (n < 1e-10) return std::nullopt;
        for (double& x : v) x /= n;
        basis.push_back(std::move(v));
    }
    for (std::size_t axis = 0; axis < m; ++axis) {
        std::vector<double> v(m, 0.0);
        v[axis] = 1.0;
        for (const auto& b : basis) {
            const double c = dot(v, b);
            for (std::size_t i = 0; i < m; ++i) v[i] -= c * b[i];
        }
        const double n = norm(v);
        if (n > 1e-8) {
            for (double& x : v) x /= n;
            return v;
        }
    }
    return std::nullopt;
}

}  // namespace

void for_each_arrangement_candidate(const std::vector<std::vector<double>>& zetas, double eps_tilt,
                                    const CandidateVisitor& visit) {
    if (zetas.empty()) throw ValidationError("arrangement candidates: no difference vectors");
    const std::size_t m = zetas.front().size();
    if (m == 1) {
        visit({1.0});
        visit({-1.0});
        return;
    }
    std::vector<std::vector<double>> units;
    units.reserve(zetas.size());
    for (const auto& z : zetas) units.push_back(normalized(z));
    for (const auto& u : units) {
        visit(u);
        std::vector<double> neg(u);
        for (double& x : neg) x = -x;
        visit(neg);
    }

    const std::size_t n = units.size();
    std::vector<double> base_dots(n, 0.0);
    std::vector<double> cand(m, 0.0);

    // Tilt w0 off its face along a difference axis; the candidate must land
    // in the adjacent cell without flipping any established sign. When the
    // tilt is far below the smallest established margin no flip is possible
    // and the check is free; otherwise verify and escalate by decades.
    auto emit_tilted = [&](const std::vector<double>& w0, double min_keep, const std::vector<double>& axis,
                           double sign) {
        double eps = eps_tilt;
        while (eps <= 1e-3) {
            for (std::size_t i = 0; i < m; ++i) cand[i] = w0[i] + sign * eps * axis[i];
            const double inv = 1.0 / norm(cand);
            for (double& x : cand) x *= inv;
            const double keep_tol = std::max(1e-7, 10.0 * eps);
            bool ok = true;
            if (8.0 * eps >= min_keep) {
                for (std::size_t r = 0; r < n; ++r) {
                    const double before = base_dots[r];
                    if (std::abs(before) <= keep_tol) continue;
                    if ((before > 0.0) != (dot(cand, units[r]) > 0.0)) {
                        ok = false;
                        break;
                    }
                }
            }
            if (ok) {
                visit(cand);
                return;
            }
            eps *= 10.0;
        }
        throw ContractViolation("arrangement candidates: cell-entering tilt failed to stabilize");
    };

    // One base direction per (m-1)-subset of difference vectors; each open
    // cell of the arrangement touches such a face, and the tilted copies
    // step into the adjacent cells.
    const std::size_t r = m - 1;
    if (n < r) return;
    std::vector<std::size_t> comb(r);
    for (std::size_t i = 0; i < r; ++i) comb[i] = i;
    while (true) {
        if (auto w0_opt = orthogonal_unit(units, comb, m)) {
            for (double s0 : {1.0, -1.0}) {
                std::vector<double> w0 = *w0_opt;
                for (double& x : w0) x *= s0;
                visit(w0);
                double min_keep = 1e300;
                for (std::size_t i = 0; i < n; ++i) {
                    base_dots[i] = dot(w0, units[i]);
                    const double a = std::abs(base_dots[i]);
                    if (a > 1e-7) min_keep = std::min(min_keep, a);
                }
                for (const auto& axis : units) {
                    emit_tilted(w0, min_keep, axis, 1.0);
                    emit_tilted(w0, min_keep, axis, -1.0);
                }
            }
        }
        std::size_t i = r;
        while (i > 0 && comb[i - 1] == i - 1 + n - r) --i;
        if (i == 0) break;
        ++comb[i - 1];
        for (std::size_t j = i; j < r; ++j) comb[j] = comb[j - 1] + 1;
    }
}

std::vector<std::vector<double>> arrangement_candidates(const std::vector<std::vector<double>>& zetas,
                                                        double eps_tilt) {
    std::vector<std::vector<double>> out;
    for_each_arrangement_candidate(zetas, eps_tilt, [&out](const std::vector<double>& w) { out.push_back(w); });
    return out;
}

}  // namespace detail

namespace {

std::vector<double> to_subspace(const std::vector<std::vector<double>>& basis, const Point& z) {
    std::vector<double> w(basis.size(), 0.0);
    for (std::size_t r = 0; r < basis.size(); ++r) w[r] = dot(basis[r], z);
    return w;
}

std::vector<double> from_subspace(const std::vector<std::vector<double>>& basis, const std::vector<double>& w,
                                  std::size_t d) {
    std::vector<double> v(d, 0.0);
    for (std::size_t r = 0; r < basis.size(); ++r) {
        for (std::size_t j = 0; j < d; ++j) v[j] += w[r] * basis[r][j];
    }
    return v;
}

}  // namespace

EstimateResult kemeny_minimize_eu(const RevealedRelation& r, std::size_t d, const EstimatorConfig& cfg) {
    if (cfg.method != EstimateMethod::ExactEnumeration) {
        throw ValidationError("kemeny_minimize_eu requires the exact enumeration method");
    }
    if (r.records.empty()) throw ValidationError("kemeny_minimize_eu: empty revealed relation");
    if (d < 2) throw ValidationError("kemeny_minimize_eu: d must be >= 2");
    for (const ChoiceRecord& rec : r.records) {
        if (rec.chosen.size() != d || rec.rejected.size() != d) {
            throw ContractViolation("kemeny_minimize_eu: record dimension mismatch");
        }
    }
    const auto basis = sum_zero_basis(d);
    std::vector<std::vector<double>> zetas;
    zetas.reserve(r.records.size());
    for (const ChoiceRecord& rec : r.records) {
        Point z(d);
        for (std::size_t i = 0; i < d; ++i) z[i] = rec.chosen[i] - rec.rejected[i];
        auto zeta = to_subspace(basis, z);
        if (norm(zeta) > 1e-15) zetas.push_back(std::move(zeta));
    }
    if (zetas.empty()) {
        throw ValidationError("kemeny_minimize_eu: all difference vectors vanish (degenerate data)");
    }

    const std::size_t n = r.records.size();
    std::size_t best_count = n + 1;
    std::vector<double> best_v;
    std::uint64_t evaluated = 0;
    detail::for_each_arrangement_candidate(zetas, cfg.eps_tilt, [&](const std::vector<double>& w) {
        // Evaluate with the exact vector the estimate will store, so the
        // reported loss is the recomputable kemeny_loss, boundary ties
        // included.
        const std::vector<double> v = eu_normalize(from_subspace(basis, w, d));
        ++evaluated;
        std::size_t bad = 0;
        for (const ChoiceRecord& rec : r.records) {
            if (!(dot(v, rec.chosen) >= dot(v, rec.rejected))) {
                if (++bad > best_count) return;
            }
        }
        if (bad < best_count || (bad == best_count && lex_less(v, best_v))) {
            best_count = bad;
            best_v = v;
        }
    });
    EstimateResult out{PreferenceSpec::expected_utility_normalized(AlternativeSpace::simplex(d), best_v),
                       static_cast<double>(best_count) / static_cast<double>(n), evaluated, true};
    return out;
}

FamilyTemplate eu_family_template(const AlternativeSpace& space) {
    FamilyTemplate t;
    t.name = "expected_utility";
    t.param_count = space.dim();
    t.decode = [space](const std::vector<double>& params) {
        return PreferenceSpec::expected_utility(space, params);
    };
    t.sample_params = [d = space.dim()](Rng& rng) { return sample_eu_index(d, rng); };
    t.clamp = {};
    return t;
}

FamilyTemplate du_family_template(const AlternativeSpace& space, std::vector<double> knot_grid, double epsilon,
                                  double slope_min, double slope_max) {
    if (knot_grid.size() < 2) throw ValidationError("du family: knot grid needs at least two knots");
    const std::size_t d = space.dim();
    const std::size_t k = knot_grid.size();
    FamilyTemplate t;
    t.name = "discounted_utility";
    // Parameters: d discount factors, then one slope per knot segment.
    t.param_count = d + (k - 1);
    auto clamp = [d, k, epsilon, slope_min, slope_max](std::vector<double>& p) {
        for (std::size_t i = 0; i < d; ++i) p[i] = std::clamp(p[i], epsilon, 1.0);
        for (std::size_t i = 0; i < k - 1; ++i) p[d + i] = std::clamp(p[d + i], slope_min, slope_max);
    };
    t.clamp = clamp;
    t.decode = [space, knot_grid, d, k, epsilon, slope_min, slope_max](const std::vector<double>& params) {
        std::vector<double> ys(k, 0.0);
        for (std::size_t i = 1; i < k; ++i) {
            ys[i] = ys[i - 1] + params[d + i - 1] * (knot_grid[i] - knot_grid[i - 1]);
        }
        std::vector<double> deltas(params.begin(), params.begin() + d);
        return PreferenceSpec::discounted_utility(space, std::move(deltas),
                                                  PiecewiseLinear(knot_grid, std::move(ys)), epsilon,
                                                  slope_min, slope_max);
    };
    t.sample_params = [d, k, epsilon, slope_min, slope_max](Rng& rng) {
        std::vector<double> p(d + (k - 1), 0.0);
        for (std::size_t i = 0; i < d; ++i) p[i] = rng.uniform(epsilon, 1.0);
        for (std::size_t i = 0; i < k - 1; ++i) p[d + i] = rng.uniform(slope_min, slope_max);
        return p;
    };
    return t;
}

EstimateResult kemeny_minimize_search(const FamilyTemplate& family, const RevealedRelation& r,
                                      const EstimatorConfig& cfg) {
    if (cfg.method != EstimateMethod::MultiStartSearch) {
        throw ValidationError("kemeny_minimize_search requires the multi-start method");
    }
    if (!family.decode || !family.sample_params || family.param_count == 0) {
        throw ValidationError("kemeny_minimize_search: family lacks a finite parameterization");
    }
    if (r.records.empty()) throw ValidationError("kemeny_minimize_search: empty revealed relation");
    Rng rng(cfg.seed);
    std::uint64_t evaluated = 0;
    auto loss_of = [&](const std::vector<double>& params) -> double {
        ++evaluated;
        try {
            return kemeny_loss(family.decode(params), r);
        } catch (const ValidationError&) {
            return std::numeric_limits<double>::infinity();  // infeasible corner of the parameter box
        }
    };

    std::vector<std::vector<double>> starts = family.extra_starts;
    while (starts.size() < std::max<std::size_t>(cfg.starts, family.extra_starts.size())) {
        starts.push_back(family.sample_params(rng));
    }

    double best_loss = std::numeric_limits<double>::infinity();
    std::vector<double> best_params;
    for (auto& start : starts) {
        std::vector<double> cur = start;
        if (family.clamp) family.clamp(cur);
        double cur_loss = loss_of(cur);
        double step = cfg.initial_step;
        for (std::size_t it = 0; it < cfg.iterations; ++it) {
            const std::size_t coord = it % family.param_count;
            std::vector<double> up = cur, down = cur;
            up[coord] += step;
            down[coord] -= step;
            if (family.clamp) {
                family.clamp(up);
                family.clamp(down);
            }
            const double lu = loss_of(up);
            const double ld = loss_of(down);
            if (lu < cur_loss && lu <= ld) {
                cur = std::move(up);
                cur_loss = lu;
            } else if (ld < cur_loss) {
                cur = std::move(down);
                cur_loss = ld;
            }
            if (coord + 1 == family.param_count) step *= cfg.step_decay;
        }
        if (cur_loss < best_loss || (cur_loss == best_loss && lex_less(cur, best_params))) {
            best_loss = cur_loss;
            best_params = std::move(cur);
        }
    }
    if (!std::isfinite(best_loss)) {
        throw ValidationError("kemeny_minimize_search: no feasible parameter vector found");
    }
    return EstimateResult{family.decode(best_params), best_loss, evaluated, false};
}

std::vector<std::pair<std::size_t, double>> rationalizing_sequence(const PreferenceSpec& p_true,
                                                                   const std::vector<std::size_t>& schedule,
                                                                   const EvaluationGrid& grid,
                                                                   const EstimatorConfig& cfg) {
    if (schedule.empty()) throw ValidationError("rationalizing_sequence: empty schedule");
    if (!is_locally_strict_probe(p_true, grid, 0.05)) {
        throw ValidationError("rationalizing_sequence: truth failed the local strictness probe");
    }
    const auto* eu = p_true.as<ExpectedUtilityFamily>();
    if (!eu) throw ValidationError("rationalizing_sequence: exact rationalizers implemented for expected utility");
    const std::size_t max_n = *std::max_element(schedule.begin(), schedule.end());
    const ExperimentPlan full = exhaustive_plan(p_true.space(), max_n);
    const RelationGraph truth_graph = relation_graph(p_true, grid);

    std::vector<std::pair<std::size_t, double>> out;
    out.reserve(schedule.size());
    for (std::size_t n : schedule) {
        ExperimentPlan prefix{full.space, full.design,
                              std::vector<ChoiceProblem>(full.problems.begin(), full.problems.begin() + n), 0};
        const SimulationResult sim = simulate_noiseless(p_true, prefix, TieRule::Lexicographic);
        EstimateResult est = kemeny_minimize_eu(sim.relation, p_true.space().dim(), cfg);
        if (est.loss != 0.0) {
            throw ContractViolation("rationalizing_sequence: exact estimator missed loss 0 on noiseless data");
        }
        const double dist = hausdorff_distance(relation_graph(est.estimate, grid), truth_graph, grid);
        out.emplace_back(n, dist);
    }
    return out;
}

void append_estimate_jsonl(const EstimateResult& result, const std::string& path,
                           const std::vector<std::pair<std::string, std::string>>& extra) {
    nlohmann::json j;
    j["family"] = result.estimate.family_name();
    j["space"] = result.estimate.space().name();
    j["d"] = result.estimate.space().dim();
    j["loss"] = result.loss;
    j["exact"] = result.exact;
    j["candidates_evaluated"] = result.candidates_evaluated;
    nlohmann::json params;
    if (const auto* eu = result.estimate.as<ExpectedUtilityFamily>()) {
        params["v"] = eu->index;
    } else if (const auto* du = result.estimate.as<DiscountedUtilityFamily>()) {
        params["delta"] = du->discounts;
        params["knots_x"] = du->value.knots_x();
        params["knots_y"] = du->value.knots_y();
    } else if (const auto* er = result.estimate.as<ErraticFamily>()) {
        params["level"] = er->level;
        params["base_points"] = er->base_points;
    }
    j["parameters"] = params;
    for (const auto& [k, v] : extra) j[k] = v;
    std::ofstream out(path, std::ios::app);
    if (!out) throw IoError("cannot open for appending: " + path);
    out << j.dump() << '\n';
    if (!out) throw IoError("failed writing: " + path);
}

}  // namespace prefrec
