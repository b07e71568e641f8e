#include "prefrec/probes.hpp"

#include <cmath>

#include "prefrec/errors.hpp"

namespace prefrec {

namespace {

// Probe directions that respect the space: transfers for simplexes (sum
// preserved), axes plus the diagonal elsewhere.
std::vector<Point> probe_directions(const AlternativeSpace& space) {
    const std::size_t d = space.dim();
    std::vector<Point> dirs;
    switch (space.kind()) {
        case SpaceKind::Simplex:
        case SpaceKind::InteriorSimplex: {
            const double s = 1.0 / std::sqrt(2.0);
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = i + 1; j < d; ++j) {
                    Point u(d, 0.0);
                    u[i] = s;
                    u[j] = -s;
                    dirs.push_back(std::move(u));
                }
            }
            break;
        }
        case SpaceKind::PositiveOrthant:
        case SpaceKind::DatedReward: {
            for (std::size_t i = 0; i < d; ++i) {
                Point u(d, 0.0);
                u[i] = 1.0;
                dirs.push_back(std::move(u));
            }
            Point diag(d, 1.0 / std::sqrt(static_cast<double>(d)));
            dirs.push_back(std::move(diag));
            if (space.kind() == SpaceKind::DatedReward) {
                // Earlier and larger, the direction the dominance relation rewards.
                const double s = 1.0 / std::sqrt(2.0);
                dirs.push_back({-s, s});
            }
            break;
        }
        case SpaceKind::RealLine:
            dirs.push_back({1.0});
            break;
    }
    return dirs;
}

Point shifted(const Point& p, const Point& u, double step) {
    Point q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) q[i] = p[i] + step * u[i];
    return q;
}

}  // namespace

bool is_locally_strict_probe(const PreferenceSpec& p, const EvaluationGrid& grid, double radius,
                             ProbeReport* report) {
    if (!(radius > 0.0)) throw ValidationError("local strictness probe: radius must be > 0");
    if (!p.space().same_shape(grid.space)) throw ContractViolation("local strictness probe: space mismatch");
    const auto dirs = probe_directions(grid.space);
    std::uint64_t checked = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const Point& x = grid.points[i];
            const Point& y = grid.points[j];
            if (!weak_prefers(p, x, y)) continue;
            ++checked;
            bool found = strictly_prefers(p, x, y);
            for (std::size_t k = 0; k < dirs.size() && !found; ++k) {
                for (double sign : {1.0, -1.0}) {
                    const Point xp = shifted(x, dirs[k], sign * radius);
                    const Point ym = shifted(y, dirs[k], -sign * radius);
                    const bool x_ok = grid.space.contains(xp);
                    const bool y_ok = grid.space.contains(ym);
                    if (x_ok && strictly_prefers(p, xp, y)) { found = true; break; }
                    if (y_ok && strictly_prefers(p, x, ym)) { found = true; break; }
                    if (x_ok && y_ok && strictly_prefers(p, xp, ym)) { found = true; break; }
                }
            }
            if (!found) {
                if (report) {
                    report->ok = false;
                    report->checked = checked;
                    report->detail = "no strict pair near grid pair (" + std::to_string(i) + "," +
                                     std::to_string(j) + ")";
                }
                return false;
            }
        }
    }
    if (report) {
        report->ok = true;
        report->checked = checked;
    }
    return true;
}

bool is_grodal_transitive_probe(const WeakPrefFn& prefers, const EvaluationGrid& grid,
                                GrodalProbeOptions opts, ProbeReport* report) {
    const std::size_t n = grid.size();
    if (n == 0) throw ValidationError("grodal probe: empty grid");
    std::vector<std::uint8_t> weak(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            weak[i * n + j] = prefers(grid.points[i], grid.points[j]) ? 1 : 0;
        }
    }
    auto ge = [&](std::size_t a, std::size_t b) { return weak[a * n + b] != 0; };
    auto violates = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        return ge(i, j) && ge(j, k) && !ge(k, j) && ge(k, l) && !ge(i, l);
    };
    const std::uint64_t total = static_cast<std::uint64_t>(n) * n * n * n;
    std::uint64_t checked = 0;
    bool exhaustive = total <= opts.max_tuples;
    if (exhaustive) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (!ge(i, j)) continue;
                for (std::size_t k = 0; k < n; ++k) {
                    if (!ge(j, k) || ge(k, j)) continue;
                    for (std::size_t l = 0; l < n; ++l) {
                        ++checked;
                        if (ge(k, l) && !ge(i, l)) {
                            if (report) {
                                report->ok = false;
                                report->checked = checked;
                                report->exhaustive = true;
                                report->detail = "chain violation at tuple (" + std::to_string(i) + "," +
                                                 std::to_string(j) + "," + std::to_string(k) + "," +
                                                 std::to_string(l) + ")";
                            }
                            return false;
                        }
                    }
                }
            }
        }
    } else {
        Rng rng(opts.seed);
        for (std::uint64_t t = 0; t < opts.max_tuples; ++t) {
            const std::size_t i = rng.next_below(n), j = rng.next_below(n);
            const std::size_t k = rng.next_below(n), l = rng.next_below(n);
            ++checked;
            if (violates(i, j, k, l)) {
                if (report) {
                    report->ok = false;
                    report->checked = checked;
                    report->exhaustive = false;
                    report->detail = "chain violation (sampled)";
                }
                return false;
            }
        }
    }
    if (report) {
        report->ok = true;
        report->checked = checked;
        report->exhaustive = exhaustive;
    }
    return true;
}

bool is_grodal_transitive_probe(const PreferenceSpec& p, const EvaluationGrid& grid, GrodalProbeOptions opts,
                                ProbeReport* report) {
    return is_grodal_transitive_probe(
        [&p](const Point& x, const Point& y) { return weak_prefers(p, x, y); }, grid, opts, report);
}

std::pair<Point, Point> sample_dominating_pair(const DominanceRelation& rel, const AlternativeSpace& space,
                                               Rng& rng, std::size_t max_tries) {
    for (std::size_t t = 0; t < max_tries; ++t) {
        Point x = sample_point(space, rng);
        Point y = sample_point(space, rng);
        if (dominates(rel, x, y)) return {std::move(x), std::move(y)};
        if (dominates(rel, y, x)) return {std::move(y), std::move(x)};
    }
    throw ValidationError("could not sample a dominating pair for relation " + rel.name());
}

bool is_strictly_monotone_probe(const PreferenceSpec& p, const DominanceRelation& rel, std::size_t pairs,
                                std::uint64_t seed, ProbeReport* report) {
    Rng rng(seed);
    for (std::size_t t = 0; t < pairs; ++t) {
        auto [x, y] = sample_dominating_pair(rel, p.space(), rng);
        if (!strictly_prefers(p, x, y)) {
            if (report) {
                report->ok = false;
                report->checked = t + 1;
                report->detail = "dominating pair not strictly preferred";
            }
            return false;
        }
    }
    if (report) {
        report->ok = true;
        report->checked = pairs;
    }
    return true;
}

bool dominance_irreflexive_probe(const DominanceRelation& rel, const AlternativeSpace& space,
                                 std::size_t samples, std::uint64_t seed, ProbeReport* report) {
    Rng rng(seed);
    for (std::size_t t = 0; t < samples; ++t) {
        const Point x = sample_point(space, rng);
        if (dominates(rel, x, x)) {
            if (report) {
                report->ok = false;
                report->checked = t + 1;
                report->detail = "relation holds on the diagonal";
            }
            return false;
        }
    }
    if (report) {
        report->ok = true;
        report->checked = samples;
    }
    return true;
}

bool dominance_open_probe(const DominanceRelation& rel, const AlternativeSpace& space, std::size_t pairs,
                          double eps, std::uint64_t seed, ProbeReport* report) {
    Rng rng(seed);
    const std::size_t d = space.dim();
    const bool simplex = space.kind() == SpaceKind::Simplex || space.kind() == SpaceKind::InteriorSimplex;
    auto perturb = [&](const Point& p) {
        Point noise(d);
        double mean = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            noise[i] = rng.uniform(-1.0, 1.0);
            mean += noise[i];
        }
        if (simplex && d > 1) {
            mean /= static_cast<double>(d);
            for (double& v : noise) v -= mean;  // keep the probability sum intact
        }
        const double n = norm(noise);
        const double scale = n > 0.0 ? rng.uniform01() * eps / n : 0.0;
        Point q(d);
        for (std::size_t i = 0; i < d; ++i) q[i] = p[i] + scale * noise[i];
        return q;
    };
    for (std::size_t t = 0; t < pairs; ++t) {
        auto [x, y] = sample_dominating_pair(rel, space, rng);
        for (int rep = 0; rep < 4; ++rep) {
            const Point xp = perturb(x);
            const Point yp = perturb(y);
            if (!dominates(rel, xp, yp)) {
                if (report) {
                    report->ok = false;
                    report->checked = t + 1;
                    report->detail = "perturbation destroyed dominance";
                }
                return false;
            }
        }
    }
    if (report) {
        report->ok = true;
        report->checked = pairs;
    }
    return true;
}

}  // namespace prefrec
