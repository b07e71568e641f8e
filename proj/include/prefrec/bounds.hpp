#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "prefrec/estimator.hpp"
#include "prefrec/experiment.hpp"
#include "prefrec/grid.hpp"
#include "prefrec/metric.hpp"
#include "prefrec/preference.hpp"

namespace prefrec {

// One lambda draw with the truth's choice probabilities attached, so every
// candidate preference is scored on common random numbers.
struct PairDraw {
    Point x;
    Point y;
    double q_choose_x;  // truth's probability of picking x in {x,y}
    double q_choose_y;
};

std::vector<PairDraw> draw_mu_sample(const PreferenceSpec& p_true, const ErrorModel& em,
                                     const AlternativeSpace& lambda_space, std::size_t mc,
                                     std::uint64_t seed);

// Probability that the subject's random choice is consistent with pA,
// averaged over the prepared draws.
double estimate_mu(const PreferenceSpec& pA, const std::vector<PairDraw>& draws);

// Convenience wrapper: builds the draw sample internally (same seed, same draws).
double estimate_mu(const PreferenceSpec& pA, const PreferenceSpec& p_true, const ErrorModel& em,
                   const AlternativeSpace& lambda_space, std::size_t mc, std::uint64_t seed);

struct GapEstimate {
    double eta = 0.0;
    double gap = 0.0;        // min over probes of mu(truth) - mu(probe)
    double stderr_ = 0.0;    // Monte Carlo standard error at the argmin
    std::uint64_t pairs_probed = 0;
    std::uint64_t mc_samples = 0;
};

using FamilySampler = std::function<PreferenceSpec(Rng&)>;

FamilySampler eu_family_sampler(const AlternativeSpace& space);

// Rejection-samples preferences at grid distance >= eta from the truth and
// reports the smallest fitted advantage of the truth (an upper bound on the
// population infimum).
GapEstimate estimate_r(const FamilySampler& sampler, const PreferenceSpec& p_true, double eta,
                       const EvaluationGrid& grid, const ErrorModel& em,
                       const AlternativeSpace& lambda_space, std::size_t probes, std::size_t mc,
                       std::uint64_t seed);

struct ComplexityCell {
    std::size_t n = 0;
    std::size_t successes = 0;
};

struct ComplexityRow {
    double eta = 0.0;
    double delta = 0.0;
    std::size_t replications = 0;
    std::vector<ComplexityCell> cells;
    std::optional<std::size_t> n_star;  // empty when the schedule never reached 1 - delta
};

// Full pipeline per scheduled n: random plan, noisy choices, exact EU
// estimate, grid distance to the truth; success when distance < eta.
ComplexityRow estimate_sample_complexity(const PreferenceSpec& p_true, double eta, double delta,
                                         const ErrorModel& em, const EvaluationGrid& grid,
                                         std::size_t replications, const std::vector<std::size_t>& n_schedule,
                                         std::uint64_t seed, std::size_t threads = 1);

struct VcSampleBound {
    double vc_term = 0.0;             // r^-2 (144 sqrt(V log 4e^2) + sqrt(2 ln 2/delta))^2
    double c_solved = 0.0;            // the n >= C condition solved for n: 24 sqrt(V log(4e^2) / 5)
    double c_literal_numerator = 0.0; // 24^2 V log(4e^2) / 5, the literal C times n

    // The displayed bound, max of the two terms, with the self-referential C
    // taken in its solved reading.
    double value() const { return vc_term > c_solved ? vc_term : c_solved; }
};

VcSampleBound vc_sample_bound(std::size_t vc_dimension, double r, double delta);

struct ShatterResult {
    std::uint64_t max_patterns = 0;
    std::size_t k = 0;
    bool shattered = false;
};

// Counts distinct weak-choice sign patterns over random k-tuples of decision
// problems; exact for expected utility via the arrangement candidates.
ShatterResult shatter_probe_eu(std::size_t d, std::size_t k, std::size_t trials, std::uint64_t seed);

// Sampled fallback for families without the linear structure.
ShatterResult shatter_probe_sampled(const FamilySampler& sampler, const AlternativeSpace& space,
                                    std::size_t k, std::size_t trials, std::size_t prefs_per_trial,
                                    std::uint64_t seed);

void write_complexity_csv(const std::vector<ComplexityRow>& rows, std::uint64_t seed,
                          const std::string& config_hash, const std::string& path);
void write_gap_csv(const std::vector<GapEstimate>& gaps, std::uint64_t seed, const std::string& config_hash,
                   const std::string& path);

}  // namespace prefrec
