#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "prefrec/dominance.hpp"
#include "prefrec/grid.hpp"
#include "prefrec/preference.hpp"
#include "prefrec/rng.hpp"

namespace prefrec {

struct ProbeReport {
    bool ok = true;
    std::uint64_t checked = 0;
    bool exhaustive = true;
    std::string detail;
};

// Sampled necessary check for local strictness: for every weakly ranked grid
// pair, a fixed offset pattern within `radius` must contain a strictly ranked
// pair. False means thick indifference was witnessed; true is not a proof.
bool is_locally_strict_probe(const PreferenceSpec& p, const EvaluationGrid& grid, double radius,
                             ProbeReport* report = nullptr);

using WeakPrefFn = std::function<bool(const Point&, const Point&)>;

struct GrodalProbeOptions {
    std::uint64_t max_tuples = 2'000'000;  // above this, a seeded random subsample
    std::uint64_t seed = 7;
};

// Checks the chain condition x >= y > z >= w implies x >= w over grid
// 4-tuples, exhaustively or (budgeted) by subsample.
bool is_grodal_transitive_probe(const WeakPrefFn& prefers, const EvaluationGrid& grid,
                                GrodalProbeOptions opts = {}, ProbeReport* report = nullptr);
bool is_grodal_transitive_probe(const PreferenceSpec& p, const EvaluationGrid& grid,
                                GrodalProbeOptions opts = {}, ProbeReport* report = nullptr);

// Samples dominating pairs and checks strict preference for each.
bool is_strictly_monotone_probe(const PreferenceSpec& p, const DominanceRelation& rel,
                                std::size_t pairs, std::uint64_t seed, ProbeReport* report = nullptr);

bool dominance_irreflexive_probe(const DominanceRelation& rel, const AlternativeSpace& space,
                                 std::size_t samples, std::uint64_t seed, ProbeReport* report = nullptr);

// For sampled dominating pairs, random perturbations of magnitude <= eps must
// preserve dominance (openness at the sampled scale).
bool dominance_open_probe(const DominanceRelation& rel, const AlternativeSpace& space, std::size_t pairs,
                          double eps, std::uint64_t seed, ProbeReport* report = nullptr);

// Rejection-samples a dominating pair (x, y) with x dominating.
std::pair<Point, Point> sample_dominating_pair(const DominanceRelation& rel, const AlternativeSpace& space,
                                               Rng& rng, std::size_t max_tries = 100000);

}  // namespace prefrec
