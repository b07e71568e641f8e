#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prefrec/geometry.hpp"
#include "prefrec/preference.hpp"
#include "prefrec/rng.hpp"

namespace prefrec {

struct ChoiceProblem {
    Point a;
    Point b;
};

enum class PlanDesign { Exhaustive, Random };

struct ExperimentPlan {
    AlternativeSpace space;
    PlanDesign design;
    std::vector<ChoiceProblem> problems;
    std::uint64_t seed = 0;  // random designs only

    std::size_t size() const { return problems.size(); }
};

// Deterministic enumeration of a countable dense set (dyadic lattices of
// increasing resolution, interior for interior spaces). Prefixes agree
// across calls.
std::vector<Point> exhaustive_alternatives(const AlternativeSpace& space, std::size_t count);

// First n unordered problems of the diagonal pairing of the dense
// enumeration; plan(n) is a prefix of plan(n') for n <= n'.
ExperimentPlan exhaustive_plan(const AlternativeSpace& space, std::size_t n);

// 2n i.i.d. draws from the uniform distribution on the space's support,
// paired consecutively. Identical seeds give identical plans.
ExperimentPlan random_plan(const AlternativeSpace& space, std::size_t n, std::uint64_t seed);

class ErrorModel {
public:
    static ErrorModel exponential(double kappa = 2.0);
    static ErrorModel linear_clamp(double slope);
    // Tabulated f on a knot grid starting at 0; checked for f(0)=1, strict
    // decrease, and a negative finite-difference slope at 0.
    static ErrorModel custom(std::vector<double> ts, std::vector<double> fs);

    // f(t): probability scale of mistakes at alternative distance t.
    double f(double t) const;
    std::string name() const;

private:
    enum class Kind { Exponential, LinearClamp, Custom };
    ErrorModel(Kind kind, double param, PiecewiseLinear table);
    Kind kind_;
    double param_ = 0.0;
    PiecewiseLinear table_;
};

enum class TieRule { Lexicographic, FlagAndSkip };

struct ChoiceRecord {
    Point chosen;
    Point rejected;
    bool tie = false;
};

struct RevealedRelation {
    std::vector<ChoiceRecord> records;

    std::size_t n() const { return records.size(); }
    std::size_t ties() const;
};

struct SimulationResult {
    RevealedRelation relation;
    std::size_t ties_flagged = 0;  // indifferent problems encountered
    std::size_t skipped = 0;       // dropped under FlagAndSkip
};

// Chooses the strictly preferred alternative in each problem; exact
// indifference falls to the tie rule.
SimulationResult simulate_noiseless(const PreferenceSpec& p, const ExperimentPlan& plan,
                                    TieRule tie_rule = TieRule::Lexicographic);

// Probability that the subject picks x facing {x, y}: 1 - f(|x-y|)/2 when
// x is strictly preferred, f(|x-y|)/2 when y is, 1/2 under indifference.
double choice_probability(const PreferenceSpec& p, const ErrorModel& em, const Point& x, const Point& y);

// Error-model simulation; per-problem substreams make the output a pure
// function of (seed, plan).
RevealedRelation simulate_noisy(const PreferenceSpec& p, const ExperimentPlan& plan, const ErrorModel& em,
                                std::uint64_t seed);

void write_choice_csv(const RevealedRelation& rel, const ExperimentPlan& plan, const std::string& path);
// Returns records plus the problem list implied by the file.
std::pair<RevealedRelation, ExperimentPlan> read_choice_csv(const std::string& path,
                                                            const AlternativeSpace& space);

}  // namespace prefrec
