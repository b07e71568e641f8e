#include "prefrec/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "prefrec/errors.hpp"

namespace prefrec {

namespace {

// Dyadic enumeration, one resolution level at a time. A point is emitted at
// the first level where it is representable, so prefixes are stable.
class DenseEnumerator {
public:
    explicit DenseEnumerator(const AlternativeSpace& space) : space_(space) {}

    const Point& at(std::size_t idx) {
        while (cache_.size() <= idx) {
            if (level_ > 24) throw ValidationError("exhaustive enumeration: resolution limit exceeded");
            emit_level(level_++);
        }
        return cache_[idx];
    }

private:
    void emit_level(int level) {
        switch (space_.kind()) {
            case SpaceKind::RealLine: emit_line(level); return;
            case SpaceKind::Simplex: emit_simplex(level, 0); return;
            case SpaceKind::InteriorSimplex: emit_simplex(level, 1); return;
            case SpaceKind::PositiveOrthant:
            case SpaceKind::DatedReward: emit_orthant(level); return;
        }
        throw ContractViolation("dense enumeration: unhandled space kind");
    }

    void emit_line(int level) {
        // Within a level, closest to the origin first: the observed hull
        // grows outward while the interior refines.
        const long scale = 1L << level;
        const long span = static_cast<long>(level + 1) * scale;
        std::vector<long> ks;
        for (long k = -span; k <= span; ++k) {
            const bool seen_before =
                level > 0 && k % 2 == 0 && std::abs(k) <= static_cast<long>(level) * scale;
            if (!seen_before) ks.push_back(k);
        }
        std::sort(ks.begin(), ks.end(), [](long a, long b) {
            const long aa = std::abs(a), ab = std::abs(b);
            return aa != ab ? aa < ab : a < b;
        });
        for (long k : ks) cache_.push_back({static_cast<double>(k) / static_cast<double>(scale)});
    }

    void emit_simplex(int level, std::size_t min_part) {
        const std::size_t total = static_cast<std::size_t>(1) << level;
        const std::size_t d = space_.dim();
        if (total < min_part * d) return;  // interior lattice needs enough mass
        std::vector<std::size_t> parts(d, 0);
        emit_compositions(parts, 0, total, min_part, level);
    }

    void emit_compositions(std::vector<std::size_t>& parts, std::size_t pos, std::size_t remaining,
                           std::size_t min_part, int level) {
        const std::size_t d = space_.dim();
        if (pos + 1 == d) {
            if (remaining < min_part) return;
            parts[pos] = remaining;
            bool any_odd = false;
            for (std::size_t k : parts) any_odd = any_odd || (k % 2 == 1);
            // All-even compositions already appeared one level down.
            if (any_odd || level == 0) {
                Point p(d);
                const double denom = static_cast<double>(static_cast<std::size_t>(1) << level);
                for (std::size_t i = 0; i < d; ++i) p[i] = static_cast<double>(parts[i]) / denom;
                cache_.push_back(std::move(p));
            }
            return;
        }
        for (std::size_t k = min_part; k + min_part * (d - pos - 1) <= remaining; ++k) {
            parts[pos] = k;
            emit_compositions(parts, pos + 1, remaining - k, min_part, level);
        }
    }

    void emit_orthant(int level) {
        const std::size_t d = space_.dim();
        const long scale = 1L << level;
        const long hi = static_cast<long>(level + 1) * scale;
        std::vector<long> k(d, 1);
        while (true) {
            bool seen_before = level > 0;
            if (seen_before) {
                for (std::size_t i = 0; i < d; ++i) {
                    if (k[i] % 2 != 0 || k[i] > static_cast<long>(level) * scale) {
                        seen_before = false;
                        break;
                    }
                }
            }
            if (!seen_before) {
                Point p(d);
                for (std::size_t i = 0; i < d; ++i) {
                    p[i] = static_cast<double>(k[i]) / static_cast<double>(scale);
                }
                cache_.push_back(std::move(p));
            }
            std::size_t i = 0;
            while (i < d && ++k[i] > hi) k[i++] = 1;
            if (i == d) break;
        }
    }

    AlternativeSpace space_;
    std::vector<Point> cache_;
    int level_ = 0;
};

}  // namespace

std::vector<Point> exhaustive_alternatives(const AlternativeSpace& space, std::size_t count) {
    DenseEnumerator e(space);
    std::vector<Point> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(e.at(i));
    return out;
}

ExperimentPlan exhaustive_plan(const AlternativeSpace& space, std::size_t n) {
    if (n < 1) throw ValidationError("exhaustive plan: n must be >= 1");
    DenseEnumerator e(space);
    ExperimentPlan plan{space, PlanDesign::Exhaustive, {}, 0};
    plan.problems.reserve(n);
    // Cantor diagonal order over index pairs i < j: by i + j, then by i.
    for (std::size_t s = 1; plan.problems.size() < n; ++s) {
        for (std::size_t i = 0; 2 * i < s && plan.problems.size() < n; ++i) {
            const std::size_t j = s - i;
            plan.problems.push_back({e.at(i), e.at(j)});
        }
    }
    return plan;
}

ExperimentPlan random_plan(const AlternativeSpace& space, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw ValidationError("random plan: n must be >= 1");
    ExperimentPlan plan{space, PlanDesign::Random, {}, seed};
    plan.problems.reserve(n);
    const Rng master(seed);
    for (std::size_t k = 0; k < n; ++k) {
        Rng rng = master.substream(k);
        Point x = sample_point(space, rng);
        Point y = sample_point(space, rng);
        plan.problems.push_back({std::move(x), std::move(y)});
    }
    return plan;
}

ErrorModel::ErrorModel(Kind kind, double param, PiecewiseLinear table)
    : kind_(kind), param_(param), table_(std::move(table)) {}

ErrorModel ErrorModel::exponential(double kappa) {
    if (!(kappa > 0.0)) throw ValidationError("exponential error model: kappa must be > 0");
    return ErrorModel(Kind::Exponential, kappa, {});
}

ErrorModel ErrorModel::linear_clamp(double slope) {
    if (!(slope > 0.0)) throw ValidationError("linear clamp error model: slope must be > 0");
    return ErrorModel(Kind::LinearClamp, slope, {});
}

ErrorModel ErrorModel::custom(std::vector<double> ts, std::vector<double> fs) {
    if (ts.size() < 2 || ts.size() != fs.size()) throw ValidationError("custom error model: bad table");
    if (ts.front() != 0.0) throw ValidationError("custom error model: table must start at t = 0");
    if (fs.front() != 1.0) throw ValidationError("custom error model: f(0) must equal 1");
    for (std::size_t i = 1; i < fs.size(); ++i) {
        if (!(fs[i] < fs[i - 1])) throw ValidationError("custom error model: f must be strictly decreasing");
        if (fs[i] < 0.0 || fs[i] > 1.0) throw ValidationError("custom error model: f must map into [0,1]");
    }
    if (!((fs[1] - fs[0]) / (ts[1] - ts[0]) < 0.0)) {
        throw ValidationError("custom error model: finite-difference slope at 0 must be negative");
    }
    return ErrorModel(Kind::Custom, 0.0, PiecewiseLinear(std::move(ts), std::move(fs)));
}

double ErrorModel::f(double t) const {
    if (t < 0.0) throw ContractViolation("error model: negative distance");
    switch (kind_) {
        case Kind::Exponential: return std::exp(-param_ * t);
        case Kind::LinearClamp: return std::max(0.0, 1.0 - param_ * t);
        case Kind::Custom: {
            const double v = table_(std::min(t, table_.knots_x().back()));
            return std::min(1.0, std::max(0.0, v));
        }
    }
    throw ContractViolation("error model: unhandled kind");
}

std::string ErrorModel::name() const {
    switch (kind_) {
        case Kind::Exponential: return "exponential";
        case Kind::LinearClamp: return "linear_clamp";
        case Kind::Custom: return "custom";
    }
    return "unknown";
}

std::size_t RevealedRelation::ties() const {
    std::size_t t = 0;
    for (const auto& r : records) t += r.tie ? 1 : 0;
    return t;
}

SimulationResult simulate_noiseless(const PreferenceSpec& p, const ExperimentPlan& plan, TieRule tie_rule) {
    if (!p.space().same_shape(plan.space)) throw ContractViolation("simulate_noiseless: space mismatch");
    SimulationResult out;
    out.relation.records.reserve(plan.size());
    for (const ChoiceProblem& prob : plan.problems) {
        const double ua = p.utility(prob.a);
        const double ub = p.utility(prob.b);
        if (ua > ub) {
            out.relation.records.push_back({prob.a, prob.b, false});
        } else if (ub > ua) {
            out.relation.records.push_back({prob.b, prob.a, false});
        } else {
            ++out.ties_flagged;
            if (tie_rule == TieRule::FlagAndSkip) {
                ++out.skipped;
                continue;
            }
            const bool a_first = lex_less(prob.a, prob.b);
            const Point& chosen = a_first ? prob.a : prob.b;
            const Point& rejected = a_first ? prob.b : prob.a;
            out.relation.records.push_back({chosen, rejected, true});
        }
    }
    return out;
}

double choice_probability(const PreferenceSpec& p, const ErrorModel& em, const Point& x, const Point& y) {
    const double ux = p.utility(x);
    const double uy = p.utility(y);
    if (ux == uy) return 0.5;
    const double half_f = 0.5 * em.f(distance(x, y));
    return ux > uy ? 1.0 - half_f : half_f;
}

RevealedRelation simulate_noisy(const PreferenceSpec& p, const ExperimentPlan& plan, const ErrorModel& em,
                                std::uint64_t seed) {
    if (!p.space().same_shape(plan.space)) throw ContractViolation("simulate_noisy: space mismatch");
    RevealedRelation rel;
    rel.records.reserve(plan.size());
    const Rng master(seed);
    for (std::size_t i = 0; i < plan.size(); ++i) {
        const ChoiceProblem& prob = plan.problems[i];
        Rng rng = master.substream(i);
        const double p_choose_a = choice_probability(p, em, prob.a, prob.b);
        const bool tie = p.utility(prob.a) == p.utility(prob.b);
        if (rng.uniform01() < p_choose_a) {
            rel.records.push_back({prob.a, prob.b, tie});
        } else {
            rel.records.push_back({prob.b, prob.a, tie});
        }
    }
    return rel;
}

void write_choice_csv(const RevealedRelation& rel, const ExperimentPlan& plan, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    const std::size_t d = plan.space.dim();
    out << "problem_index";
    for (std::size_t i = 0; i < d; ++i) out << ",x" << i;
    for (std::size_t i = 0; i < d; ++i) out << ",y" << i;
    out << ",chosen,tie_flag\n";
    std::size_t cursor = 0;
    for (std::size_t pi = 0; pi < plan.size(); ++pi) {
        if (cursor >= rel.records.size()) break;
        const ChoiceProblem& prob = plan.problems[pi];
        const ChoiceRecord& rec = rel.records[cursor];
        const bool chose_a = rec.chosen == prob.a && rec.rejected == prob.b;
        const bool chose_b = rec.chosen == prob.b && rec.rejected == prob.a;
        if (!chose_a && !chose_b) continue;  // problem skipped by the tie rule
        ++cursor;
        out << pi;
        for (double v : prob.a) out << ',' << format_double(v);
        for (double v : prob.b) out << ',' << format_double(v);
        out << ',' << (chose_a ? 0 : 1) << ',' << (rec.tie ? 1 : 0) << '\n';
    }
    if (cursor != rel.records.size()) {
        throw ContractViolation("write_choice_csv: records do not align with the plan");
    }
    if (!out) throw IoError("failed writing: " + path);
}

std::pair<RevealedRelation, ExperimentPlan> read_choice_csv(const std::string& path,
                                                            const AlternativeSpace& space) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open choice data: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("choice data: missing header in " + path);
    const std::size_t d = space.dim();
    RevealedRelation rel;
    ExperimentPlan plan{space, PlanDesign::Random, {}, 0};
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 2 * d + 3) {
            throw ValidationError("choice data: cannot parse row " + std::to_string(row) + " of " + path +
                                  " (expected " + std::to_string(2 * d + 3) + " fields, found " +
                                  std::to_string(fields.size()) + ")");
        }
        try {
            Point x(d), y(d);
            for (std::size_t i = 0; i < d; ++i) x[i] = std::stod(fields[1 + i]);
            for (std::size_t i = 0; i < d; ++i) y[i] = std::stod(fields[1 + d + i]);
            const int chosen = std::stoi(fields[1 + 2 * d]);
            const int tie = std::stoi(fields[2 + 2 * d]);
            if (chosen != 0 && chosen != 1) throw std::invalid_argument("chosen flag");
            plan.problems.push_back({x, y});
            if (chosen == 0) {
                rel.records.push_back({std::move(x), std::move(y), tie != 0});
            } else {
                rel.records.push_back({std::move(y), std::move(x), tie != 0});
            }
        } catch (const std::exception&) {
            throw ValidationError("choice data: cannot parse row " + std::to_string(row) + " of " + path);
        }
    }
    if (rel.records.empty()) throw ValidationError("choice data: no records in " + path);
    return {std::move(rel), std::move(plan)};
}

}  // namespace prefrec
