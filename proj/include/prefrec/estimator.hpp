#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "prefrec/experiment.hpp"
#include "prefrec/grid.hpp"
#include "prefrec/metric.hpp"
#include "prefrec/preference.hpp"

namespace prefrec {

enum class EstimateMethod { ExactEnumeration, MultiStartSearch };

struct EstimatorConfig {
    EstimateMethod method = EstimateMethod::ExactEnumeration;
    std::size_t starts = 32;
    std::size_t iterations = 500;
    double step_decay = 0.9;
    double initial_step = 0.5;
    double eps_tilt = 1e-9;
    std::uint64_t seed = 0;
};

struct EstimateResult {
    PreferenceSpec estimate;
    double loss = 0.0;
    std::uint64_t candidates_evaluated = 0;
    bool exact = false;
};

// Fraction of observed choices the preference strictly contradicts.
double kemeny_loss(const PreferenceSpec& p, const RevealedRelation& r);

// Weak rationalization: zero Kemeny loss, exactly.
bool rationalizes(const PreferenceSpec& p, const RevealedRelation& r);

// Exact empirical 0-1 loss minimizer over nonconstant expected-utility
// preferences, by enumerating one candidate index per cell of the central
// hyperplane arrangement spanned by the record difference vectors.
EstimateResult kemeny_minimize_eu(const RevealedRelation& r, std::size_t d, const EstimatorConfig& cfg = {});

// A finitely parameterized preference family the search estimator can walk.
struct FamilyTemplate {
    std::string name;
    std::size_t param_count = 0;
    std::function<PreferenceSpec(const std::vector<double>&)> decode;
    std::function<std::vector<double>(Rng&)> sample_params;
    std::function<void(std::vector<double>&)> clamp;  // may be empty
    std::vector<std::vector<double>> extra_starts;    // tried before random starts
};

FamilyTemplate eu_family_template(const AlternativeSpace& space);
FamilyTemplate du_family_template(const AlternativeSpace& space, std::vector<double> knot_grid,
                                  double epsilon = 0.05, double slope_min = 0.5, double slope_max = 2.0);

// Multi-start coordinate descent with geometric step decay; heuristic, no
// optimality claim. Deterministic given cfg.seed.
EstimateResult kemeny_minimize_search(const FamilyTemplate& family, const RevealedRelation& r,
                                      const EstimatorConfig& cfg);

// For each scheduled n: noiseless choices on the exhaustive prefix, an exact
// rationalizer (loss must be 0), and its grid distance to the truth.
std::vector<std::pair<std::size_t, double>> rationalizing_sequence(const PreferenceSpec& p_true,
                                                                   const std::vector<std::size_t>& schedule,
                                                                   const EvaluationGrid& grid,
                                                                   const EstimatorConfig& cfg = {});

void append_estimate_jsonl(const EstimateResult& result, const std::string& path,
                           const std::vector<std::pair<std::string, std::string>>& extra = {});

namespace detail {

using CandidateVisitor = std::function<void(const std::vector<double>&)>;

// Candidate directions covering every cell of the central arrangement
// {w : w . z_k = 0} on the unit sphere of R^m: the exact unit normals of
// every (m-1)-subset, tilted copies entering the adjacent open cells, and
// the normalized difference vectors themselves. The visitor must not keep
// the reference.
void for_each_arrangement_candidate(const std::vector<std::vector<double>>& zetas, double eps_tilt,
                                    const CandidateVisitor& visit);

std::vector<std::vector<double>> arrangement_candidates(const std::vector<std::vector<double>>& zetas,
                                                        double eps_tilt);

}  // namespace detail

}  // namespace prefrec
