#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "prefrec/bounds.hpp"
#include "prefrec/errors.hpp"
#include "prefrec/rng.hpp"

using namespace prefrec;

namespace {

PreferenceSpec random_eu(std::size_t d, Rng& rng) {
    return PreferenceSpec::expected_utility(AlternativeSpace::simplex(d), sample_eu_index(d, rng));
}

PreferenceSpec reversed(const PreferenceSpec& p) {
    std::vector<double> v = p.as<ExpectedUtilityFamily>()->index;
    for (double& x : v) x = -x;
    return PreferenceSpec::expected_utility(p.space(), v);
}

}  // namespace

TEST_CASE("mu estimates") {
    const auto space = AlternativeSpace::simplex(2);
    Rng rng(201);
    const auto truth = random_eu(2, rng);
    const auto em = ErrorModel::exponential(2.0);
    const auto draws = draw_mu_sample(truth, em, space, 20000, 5);

    const double mu_truth = estimate_mu(truth, draws);
    CHECK(mu_truth > 0.5);  // strict pairs are chosen correctly more often than not

    // the exact reversal collects the complementary mass on the same draws
    const double mu_rev = estimate_mu(reversed(truth), draws);
    CHECK(mu_rev == doctest::Approx(1.0 - mu_truth).epsilon(1e-12));

    // near-noiseless limit: consistent mass approaches 1
    const auto sharp = ErrorModel::exponential(1e9);
    const auto sharp_draws = draw_mu_sample(truth, sharp, space, 5000, 5);
    CHECK(estimate_mu(truth, sharp_draws) > 0.999);

    // common random numbers: same seed, same value
    CHECK(estimate_mu(truth, truth, em, space, 5000, 9) == estimate_mu(truth, truth, em, space, 5000, 9));
}

TEST_CASE("identification gap estimates") {
    const auto space = AlternativeSpace::simplex(2);
    const auto grid = simplex_grid(2, 15);
    Rng rng(203);
    const auto truth = random_eu(2, rng);
    const auto em = ErrorModel::exponential(2.0);

    const auto gap = estimate_r(eu_family_sampler(space), truth, 0.2, grid, em, space, 8, 20000, 31);
    CHECK(gap.gap > 0.0);                      // the truth fits strictly better
    CHECK(gap.gap >= -3.0 * gap.stderr_);      // sanity band
    CHECK(gap.pairs_probed == 8);
    CHECK(gap.mc_samples == 20000);

    // reproducible under a fixed seed
    const auto gap2 = estimate_r(eu_family_sampler(space), truth, 0.2, grid, em, space, 8, 20000, 31);
    CHECK(gap.gap == gap2.gap);

    // no family member sits beyond the diameter
    CHECK_THROWS_AS(estimate_r(eu_family_sampler(space), truth, 50.0, grid, em, space, 4, 1000, 7),
                    ValidationError);
}

TEST_CASE("gap positivity holds for every probe at d=3") {
    // On a continuum family every probed rival fits strictly worse at Monte
    // Carlo precision.
    const auto space = AlternativeSpace::simplex(3);
    const auto grid = simplex_grid(3, 8);
    Rng rng(207);
    const auto truth = random_eu(3, rng);
    const auto em = ErrorModel::exponential(2.0);
    const auto draws = draw_mu_sample(truth, em, space, 40000, 13);
    const double mu_truth = estimate_mu(truth, draws);
    const RelationGraph tg = relation_graph(truth, grid);
    for (int i = 0; i < 25; ++i) {
        Rng local = rng.substream(i);
        const auto rival = random_eu(3, local);
        if (hausdorff_distance(relation_graph(rival, grid), tg, grid) < 0.05) continue;
        CHECK(mu_truth - estimate_mu(rival, draws) > 0.0);
    }
    // larger separation requirements can only raise the infimum estimate
    const auto near = estimate_r(eu_family_sampler(space), truth, 0.2, grid, em, space, 12, 40000, 13);
    const auto far = estimate_r(eu_family_sampler(space), truth, 0.8, grid, em, space, 12, 40000, 13);
    CHECK(far.gap >= near.gap - 3.0 * (near.stderr_ + far.stderr_));
}

TEST_CASE("explicit VC sample bound arithmetic") {
    // golden value frozen from an independent long-double evaluation
    const auto b = vc_sample_bound(3, 0.1, 0.05);
    CHECK(b.vc_term == doctest::Approx(21315529.552513376).epsilon(1e-12));
    CHECK(b.c_solved == doctest::Approx(34.209696450027647).epsilon(1e-12));
    CHECK(b.c_literal_numerator == doctest::Approx(1170.3033312030342).epsilon(1e-12));
    CHECK(b.value() == doctest::Approx(b.vc_term));

    // doubling r quarters the leading term
    const auto b2 = vc_sample_bound(3, 0.2, 0.05);
    CHECK(b2.vc_term == doctest::Approx(b.vc_term / 4.0).epsilon(1e-12));

    // monotone: nonincreasing in r, nondecreasing in 1/delta
    double prev = 1e300;
    for (double r : {0.05, 0.1, 0.2, 0.4, 0.8}) {
        const double v = vc_sample_bound(3, r, 0.05).value();
        CHECK(v <= prev);
        prev = v;
    }
    prev = 0.0;
    for (double delta : {0.5, 0.2, 0.1, 0.01, 0.001}) {
        const double v = vc_sample_bound(3, 0.1, delta).value();
        CHECK(v >= prev);
        prev = v;
    }

    CHECK_THROWS_AS(vc_sample_bound(3, 0.0, 0.05), ValidationError);
    CHECK_THROWS_AS(vc_sample_bound(3, 0.1, 1.5), ValidationError);
    CHECK_THROWS_AS(vc_sample_bound(0, 0.1, 0.05), ValidationError);
}

TEST_CASE("shattering of expected-utility choice patterns") {
    // One problem is always shattered: both patterns are realizable.
    CHECK(shatter_probe_eu(2, 1, 50, 1).shattered);
    CHECK(shatter_probe_eu(3, 1, 50, 2).shattered);

    // d = 2 has exactly two nonconstant preferences, so no tuple of two or
    // more problems can realize more than two patterns. (The paper's d+1
    // ceiling holds with lots of room.)
    const auto d2k3 = shatter_probe_eu(2, 3, 200, 3);
    CHECK_FALSE(d2k3.shattered);
    CHECK(d2k3.max_patterns == 2);
    CHECK_FALSE(shatter_probe_eu(2, 4, 200, 4).shattered);

    // d = 3: the index circle realizes 2k patterns on k problems in general
    // position, matching the exact central-arrangement cell count.
    const auto d3k2 = shatter_probe_eu(3, 2, 100, 5);
    CHECK(d3k2.shattered);  // 4 = 2^2 patterns
    const auto d3k3 = shatter_probe_eu(3, 3, 100, 6);
    CHECK_FALSE(d3k3.shattered);
    CHECK(d3k3.max_patterns == 6);  // 2k < 2^3
    const auto d3k5 = shatter_probe_eu(3, 5, 60, 7);
    CHECK(d3k5.max_patterns == 10);

    // sampled fallback agrees on the easy case
    Rng rng(209);
    const auto sampled = shatter_probe_sampled(eu_family_sampler(AlternativeSpace::simplex(3)),
                                               AlternativeSpace::simplex(3), 2, 50, 400, 8);
    CHECK(sampled.shattered);
}

TEST_CASE("sample complexity pipeline") {
    const auto space = AlternativeSpace::simplex(2);
    const auto grid = simplex_grid(2, 15);
    Rng rng(211);
    const auto truth = random_eu(2, rng);
    const auto em = ErrorModel::exponential(2.0);

    // delta = 1: the requirement is vacuous, the first scheduled n wins
    auto row = estimate_sample_complexity(truth, 0.2, 1.0, em, grid, 5, {10, 20}, 3);
    REQUIRE(row.n_star.has_value());
    CHECK(*row.n_star == 10);

    // eta beyond the family diameter: every replication succeeds everywhere
    row = estimate_sample_complexity(truth, 10.0, 0.1, em, grid, 5, {5, 10}, 3);
    for (const auto& cell : row.cells) CHECK(cell.successes == row.replications);

    // success rates do not degrade along the schedule (2-sigma slack)
    row = estimate_sample_complexity(truth, 0.2, 0.1, em, grid, 20, {25, 50, 100}, 7);
    for (std::size_t i = 1; i < row.cells.size(); ++i) {
        const double prev_rate = static_cast<double>(row.cells[i - 1].successes) / 20.0;
        const double rate = static_cast<double>(row.cells[i].successes) / 20.0;
        CHECK(rate >= prev_rate - 2.0 * std::sqrt(0.25 / 20.0));
    }

    // threaded run reproduces the single-threaded result
    const auto threaded = estimate_sample_complexity(truth, 0.2, 0.1, em, grid, 20, {25, 50, 100}, 7, 4);
    REQUIRE(threaded.cells.size() == row.cells.size());
    for (std::size_t i = 0; i < row.cells.size(); ++i) {
        CHECK(threaded.cells[i].successes == row.cells[i].successes);
    }

    CHECK_THROWS_AS(estimate_sample_complexity(truth, 0.2, 0.1, em, grid, 5, {20, 10}, 3), ValidationError);
}

TEST_CASE("curve csv exports") {
    const auto space = AlternativeSpace::simplex(2);
    const auto grid = simplex_grid(2, 15);
    Rng rng(213);
    const auto truth = random_eu(2, rng);
    const auto em = ErrorModel::exponential(2.0);
    const auto row = estimate_sample_complexity(truth, 0.3, 0.5, em, grid, 5, {10, 20}, 3);
    const auto gap = estimate_r(eu_family_sampler(space), truth, 0.2, grid, em, space, 4, 2000, 3);

    write_complexity_csv({row}, 3, "cafebabe", "complexity_test.csv");
    write_gap_csv({gap}, 3, "cafebabe", "gap_test.csv");
    std::ifstream c("complexity_test.csv");
    std::string header;
    std::getline(c, header);
    CHECK(header == "eta,delta,n,successes,replications,success_rate,n_star,seed,config_hash");
    std::string line;
    std::size_t rows = 0;
    while (std::getline(c, line)) {
        if (line.empty()) continue;
        ++rows;
        CHECK(line.find("cafebabe") != std::string::npos);
    }
    CHECK(rows == 2);
    std::ifstream g("gap_test.csv");
    std::getline(g, header);
    CHECK(header == "eta,gap,stderr,pairs_probed,mc_samples,seed,config_hash");
    std::remove("complexity_test.csv");
    std::remove("gap_test.csv");
}
