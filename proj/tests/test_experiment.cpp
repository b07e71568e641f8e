#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <set>

#include "prefrec/errors.hpp"
#include "prefrec/estimator.hpp"
#include "prefrec/experiment.hpp"
#include "prefrec/rng.hpp"

using namespace prefrec;

TEST_CASE("exhaustive plans are prefix-stable and duplicate-free") {
    const auto line = AlternativeSpace::real_line();
    const auto p10 = exhaustive_plan(line, 10);
    const auto p50 = exhaustive_plan(line, 50);
    REQUIRE(p10.size() == 10);
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(p10.problems[i].a == p50.problems[i].a);
        CHECK(p10.problems[i].b == p50.problems[i].b);
    }
    // the first problem pairs the first two enumerated dyadics
    const auto alts = exhaustive_alternatives(line, 2);
    CHECK(p50.problems[0].a == alts[0]);
    CHECK(p50.problems[0].b == alts[1]);

    std::set<std::pair<Point, Point>> seen;
    for (const auto& prob : p50.problems) {
        CHECK(prob.a != prob.b);
        auto key = prob.a < prob.b ? std::make_pair(prob.a, prob.b) : std::make_pair(prob.b, prob.a);
        CHECK(seen.insert(key).second);  // every unordered pair at most once
    }

    // diagonal completeness: all pairs within the first m alternatives show
    // up once the diagonal index passes 2m - 3
    const auto simplex = AlternativeSpace::simplex(3);
    const auto plan = exhaustive_plan(simplex, 60);
    const auto first = exhaustive_alternatives(simplex, 8);
    std::set<std::pair<std::size_t, std::size_t>> want;
    for (std::size_t i = 0; i < 8; ++i) {
        for (std::size_t j = i + 1; j < 8; ++j) {
            if (i + j <= 10) want.emplace(i, j);  // s <= 10 fully enumerated within 60 problems
        }
    }
    std::size_t found = 0;
    for (const auto& prob : plan.problems) {
        for (const auto& [i, j] : want) {
            if (prob.a == first[i] && prob.b == first[j]) ++found;
        }
    }
    CHECK(found == want.size());
}

TEST_CASE("exhaustive enumeration is dense at each dyadic level") {
    // Every ball of radius 2^-L * diam around a probe point contains an
    // enumerated alternative once level L is exhausted.
    const auto line = AlternativeSpace::real_line();
    const auto alts_line = exhaustive_alternatives(line, 64);  // covers level 3 on [-2, 2]
    for (double probe = -1.0; probe <= 1.0; probe += 0.03) {
        double best = 1e300;
        for (const auto& a : alts_line) best = std::min(best, std::abs(a[0] - probe));
        CHECK(best <= 2.0 * std::pow(2.0, -3.0));
    }

    const auto simplex = AlternativeSpace::simplex(3);
    const auto alts = exhaustive_alternatives(simplex, 45);  // all of levels 0..3
    Rng rng(19);
    const double diam = std::sqrt(2.0);
    for (int t = 0; t < 200; ++t) {
        const Point probe = sample_unit_simplex(3, rng);
        double best = 1e300;
        for (const auto& a : alts) best = std::min(best, distance(a, probe));
        CHECK(best <= diam * std::pow(2.0, -3.0));
    }
}

TEST_CASE("random plans are seed-deterministic") {
    const auto simplex = AlternativeSpace::simplex(3);
    const auto a = random_plan(simplex, 50, 123);
    const auto b = random_plan(simplex, 50, 123);
    const auto c = random_plan(simplex, 50, 124);
    REQUIRE(a.size() == b.size());
    bool identical = true, differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        identical = identical && a.problems[i].a == b.problems[i].a && a.problems[i].b == b.problems[i].b;
        differs = differs || a.problems[i].a != c.problems[i].a;
        CHECK(a.problems[i].a != a.problems[i].b);  // repetition has probability zero
    }
    CHECK(identical);
    CHECK(differs);
}

TEST_CASE("random plan marginals look uniform on the simplex") {
    const auto simplex = AlternativeSpace::simplex(3);
    const auto plan = random_plan(simplex, 10000, 7);
    Point mean(3, 0.0);
    for (const auto& prob : plan.problems) {
        for (std::size_t i = 0; i < 3; ++i) mean[i] += prob.a[i] + prob.b[i];
    }
    for (std::size_t i = 0; i < 3; ++i) {
        mean[i] /= 2.0 * static_cast<double>(plan.size());
        CHECK(std::abs(mean[i] - 1.0 / 3.0) < 0.01);
    }
}

TEST_CASE("error model validation and shape") {
    const auto em = ErrorModel::exponential(2.0);
    CHECK(em.f(0.0) == doctest::Approx(1.0));
    CHECK(em.f(0.5) == doctest::Approx(std::exp(-1.0)));
    CHECK_THROWS_AS(ErrorModel::exponential(0.0), ValidationError);

    const auto lin = ErrorModel::linear_clamp(2.0);
    CHECK(lin.f(0.25) == doctest::Approx(0.5));
    CHECK(lin.f(3.0) == 0.0);

    CHECK_NOTHROW(ErrorModel::custom({0.0, 0.5, 1.0}, {1.0, 0.6, 0.3}));
    CHECK_THROWS_AS(ErrorModel::custom({0.0, 0.5}, {0.9, 0.5}), ValidationError);   // f(0) != 1
    CHECK_THROWS_AS(ErrorModel::custom({0.0, 0.5}, {1.0, 1.0}), ValidationError);   // not decreasing
}

TEST_CASE("noiseless simulation follows the preference") {
    const auto space = AlternativeSpace::simplex(2);
    const auto p = PreferenceSpec::expected_utility(space, {1.0, -1.0});
    ExperimentPlan plan{space, PlanDesign::Random, {{{1.0, 0.0}, {0.0, 1.0}}}, 0};
    const auto sim = simulate_noiseless(p, plan);
    REQUIRE(sim.relation.n() == 1);
    CHECK(sim.relation.records[0].chosen == Point{1.0, 0.0});
    CHECK(kemeny_loss(p, sim.relation) == 0.0);

    const auto indiff = PreferenceSpec::total_indifference(space);
    const auto plan2 = random_plan(space, 40, 3);
    const auto lex = simulate_noiseless(indiff, plan2, TieRule::Lexicographic);
    CHECK(lex.relation.n() == 40);
    CHECK(lex.ties_flagged == 40);
    for (const auto& rec : lex.relation.records) {
        CHECK(lex_less(rec.chosen, rec.rejected));  // lexicographically smaller point wins ties
        CHECK(rec.tie);
    }
    const auto skipped = simulate_noiseless(indiff, plan2, TieRule::FlagAndSkip);
    CHECK(skipped.relation.n() == 0);
    CHECK(skipped.skipped == 40);

    // noiseless output is rationalized by its generator
    Rng rng(31);
    const auto q = PreferenceSpec::expected_utility(AlternativeSpace::simplex(3), sample_eu_index(3, rng));
    const auto plan3 = random_plan(AlternativeSpace::simplex(3), 200, 5);
    CHECK(kemeny_loss(q, simulate_noiseless(q, plan3).relation) == 0.0);
}

TEST_CASE("noisy choice frequencies match the error model") {
    // P(correct) = 1 - f(|x-y|)/2 with f(t) = exp(-2t): at distance 0.5 the
    // frequency should sit near 1 - e^{-1}/2.
    const auto space = AlternativeSpace::simplex(2);
    const auto p = PreferenceSpec::expected_utility(space, {1.0, -1.0});
    const auto em = ErrorModel::exponential(2.0);
    ExperimentPlan plan{space, PlanDesign::Random, {}, 0};
    const Point a = {0.75, 0.25};
    const Point b = {0.75 - 0.5 / std::sqrt(2.0), 0.25 + 0.5 / std::sqrt(2.0)};
    REQUIRE(distance(a, b) == doctest::Approx(0.5));
    for (int i = 0; i < 10000; ++i) plan.problems.push_back({a, b});
    const auto rel = simulate_noisy(p, plan, em, 99);
    std::size_t correct = 0;
    for (const auto& rec : rel.records) correct += rec.chosen == a ? 1 : 0;
    const double freq = static_cast<double>(correct) / 10000.0;
    CHECK(std::abs(freq - (1.0 - std::exp(-1.0) / 2.0)) < 0.01);

    // at vanishing distance the choice is a coin flip
    const Point c = {0.5 + 5e-10, 0.5 - 5e-10};
    const Point dpt = {0.5 - 5e-10, 0.5 + 5e-10};
    ExperimentPlan tiny{space, PlanDesign::Random, {}, 0};
    for (int i = 0; i < 10000; ++i) tiny.problems.push_back({c, dpt});
    const auto rel2 = simulate_noisy(p, tiny, em, 100);
    std::size_t picked = 0;
    for (const auto& rec : rel2.records) picked += rec.chosen == c ? 1 : 0;
    CHECK(std::abs(static_cast<double>(picked) / 10000.0 - 0.5) < 0.02);

    // an exactly indifferent pair is 50/50
    const auto indiff_pref = PreferenceSpec::expected_utility(space, {1.0, -1.0});
    const Point e1 = {0.5, 0.5};
    const Point e2 = {0.5, 0.5};
    ExperimentPlan even{space, PlanDesign::Random, {}, 0};
    for (int i = 0; i < 10000; ++i) even.problems.push_back({e1, e2});
    const auto rel3 = simulate_noisy(indiff_pref, even, em, 101);
    std::size_t first = 0;
    for (const auto& rec : rel3.records) first += rec.tie ? 1 : 0;
    CHECK(first == 10000);  // all flagged as ties
}

TEST_CASE("strict pairs are chosen correctly more than half the time") {
    // 3-sigma check over 10^4 draws for 20 random strict pairs.
    const auto space = AlternativeSpace::simplex(3);
    Rng rng(55);
    const auto p = PreferenceSpec::expected_utility(space, sample_eu_index(3, rng));
    const auto em = ErrorModel::exponential(2.0);
    for (int pair_i = 0; pair_i < 20; ++pair_i) {
        Rng local = rng.substream(pair_i);
        Point x = sample_point(space, local);
        Point y = sample_point(space, local);
        if (!strictly_prefers(p, x, y)) std::swap(x, y);
        REQUIRE(strictly_prefers(p, x, y));
        ExperimentPlan plan{space, PlanDesign::Random, {}, 0};
        for (int i = 0; i < 10000; ++i) plan.problems.push_back({x, y});
        const auto rel = simulate_noisy(p, plan, em, 1000 + pair_i);
        std::size_t correct = 0;
        for (const auto& rec : rel.records) correct += rec.chosen == x ? 1 : 0;
        const double freq = static_cast<double>(correct) / 10000.0;
        const double sigma = 0.5 / std::sqrt(10000.0);
        CHECK(freq > 0.5 + 3.0 * sigma);
    }
}

TEST_CASE("noisy simulation is bit-reproducible") {
    const auto space = AlternativeSpace::simplex(3);
    Rng rng(77);
    const auto p = PreferenceSpec::expected_utility(space, sample_eu_index(3, rng));
    const auto plan = random_plan(space, 300, 11);
    const auto em = ErrorModel::exponential(2.0);
    const auto r1 = simulate_noisy(p, plan, em, 42);
    const auto r2 = simulate_noisy(p, plan, em, 42);
    REQUIRE(r1.n() == r2.n());
    for (std::size_t i = 0; i < r1.n(); ++i) {
        CHECK(r1.records[i].chosen == r2.records[i].chosen);
        CHECK(r1.records[i].rejected == r2.records[i].rejected);
    }
}

TEST_CASE("choice csv round trip") {
    const auto space = AlternativeSpace::simplex(3);
    Rng rng(81);
    const auto p = PreferenceSpec::expected_utility(space, sample_eu_index(3, rng));
    const auto plan = random_plan(space, 25, 13);
    const auto rel = simulate_noisy(p, plan, ErrorModel::exponential(2.0), 5);
    const std::string path = "choices_test.csv";
    write_choice_csv(rel, plan, path);
    const auto [loaded, loaded_plan] = read_choice_csv(path, space);
    REQUIRE(loaded.n() == rel.n());
    for (std::size_t i = 0; i < rel.n(); ++i) {
        CHECK(loaded.records[i].chosen == rel.records[i].chosen);
        CHECK(loaded.records[i].rejected == rel.records[i].rejected);
        CHECK(loaded.records[i].tie == rel.records[i].tie);
    }
    CHECK(loaded_plan.size() == plan.size());
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_choice_csv("definitely_missing.csv", space), IoError);
}
