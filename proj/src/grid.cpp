#include "prefrec/grid.hpp"

#include <algorithm>
#include <cmath>

#include "prefrec/errors.hpp"

namespace prefrec {

EvaluationGrid make_grid(AlternativeSpace space, std::vector<Point> points) {
    if (points.size() < 2) throw ValidationError("evaluation grid needs at least two points");
    for (const Point& p : points) space.require_valid(p, "evaluation grid");
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (points[i] == points[j]) throw ValidationError("evaluation grid points must be distinct");
        }
    }
    return EvaluationGrid{std::move(space), std::move(points)};
}

namespace {

void compositions(std::size_t d, std::size_t total, std::size_t min_part, std::vector<std::size_t>& acc,
                  std::vector<std::vector<std::size_t>>& out) {
    if (acc.size() + 1 == d) {
        if (total >= min_part) {
            acc.push_back(total);
            out.push_back(acc);
            acc.pop_back();
        }
        return;
    }
    for (std::size_t k = min_part; k + min_part * (d - acc.size() - 1) <= total; ++k) {
        acc.push_back(k);
        compositions(d, total - k, min_part, acc, out);
        acc.pop_back();
    }
}

}  // namespace

EvaluationGrid simplex_grid(std::size_t d, std::size_t points_per_dim, bool interior) {
    if (points_per_dim < 2) throw ValidationError("simplex grid needs at least 2 points per dimension");
    const std::size_t denom = points_per_dim - 1;
    const std::size_t min_part = interior ? 1 : 0;
    if (interior && denom < d) throw ValidationError("interior simplex grid: points_per_dim too small for d");
    std::vector<std::vector<std::size_t>> comps;
    std::vector<std::size_t> acc;
    compositions(d, denom, min_part, acc, comps);
    std::vector<Point> pts;
    pts.reserve(comps.size());
    for (const auto& c : comps) {
        Point p(d);
        for (std::size_t i = 0; i < d; ++i) p[i] = static_cast<double>(c[i]) / static_cast<double>(denom);
        pts.push_back(std::move(p));
    }
    AlternativeSpace space = interior ? AlternativeSpace::interior_simplex(d) : AlternativeSpace::simplex(d);
    return make_grid(std::move(space), std::move(pts));
}

EvaluationGrid box_grid(const AlternativeSpace& space, std::size_t per_dim) {
    if (per_dim < 2) throw ValidationError("box grid needs at least 2 points per dimension");
    const Box& box = space.sampling_support();
    const std::size_t d = box.dim();
    std::vector<Point> pts;
    std::vector<std::size_t> idx(d, 0);
    while (true) {
        Point p(d);
        for (std::size_t i = 0; i < d; ++i) {
            p[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * static_cast<double>(idx[i]) /
                                   static_cast<double>(per_dim - 1);
        }
        pts.push_back(std::move(p));
        std::size_t i = 0;
        while (i < d && ++idx[i] == per_dim) idx[i++] = 0;
        if (i == d) break;
    }
    return make_grid(space, std::move(pts));
}

EvaluationGrid line_grid(double lo, double hi, std::size_t count) {
    if (!(lo < hi) || count < 2) throw ValidationError("line grid needs lo < hi and count >= 2");
    std::vector<Point> pts;
    pts.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        pts.push_back({lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1)});
    }
    return make_grid(AlternativeSpace::real_line(Box({lo}, {hi})), std::move(pts));
}

double covering_radius_estimate(const EvaluationGrid& grid, std::size_t refinement) {
    if (refinement < 2) throw ValidationError("covering radius: refinement must be >= 2");
    std::vector<Point> probes;
    const std::size_t d = grid.space.dim();
    switch (grid.space.kind()) {
        case SpaceKind::Simplex:
        case SpaceKind::InteriorSimplex: {
            // Probe on a much finer composition lattice over the same simplex.
            // The factor 3 lands probes on cell circumcenters (thirds), where
            // the distance to the lattice peaks.
            double min_gap = 1.0;
            for (std::size_t i = 1; i < grid.points.size(); ++i) {
                min_gap = std::min(min_gap, distance(grid.points[0], grid.points[i]));
            }
            std::size_t denom =
                static_cast<std::size_t>(std::ceil(std::sqrt(2.0) / std::max(min_gap, 1e-6))) * refinement * 3;
            denom = std::min<std::size_t>(denom, 120);
            std::vector<std::vector<std::size_t>> comps;
            std::vector<std::size_t> acc;
            compositions(d, denom, 0, acc, comps);
            for (const auto& c : comps) {
                Point p(d);
                for (std::size_t i = 0; i < d; ++i) p[i] = static_cast<double>(c[i]) / static_cast<double>(denom);
                probes.push_back(std::move(p));
            }
            break;
        }
        default: {
            // Bounding box of the grid points, refined uniformly.
            std::vector<double> lo = grid.points.front(), hi = grid.points.front();
            for (const Point& p : grid.points) {
                for (std::size_t i = 0; i < d; ++i) {
                    lo[i] = std::min(lo[i], p[i]);
                    hi[i] = std::max(hi[i], p[i]);
                }
            }
            std::size_t per_dim = refinement * 8 + 1;
            if (d >= 3) per_dim = refinement * 4 + 1;
            std::vector<std::size_t> idx(d, 0);
            while (true) {
                Point p(d);
                for (std::size_t i = 0; i < d; ++i) {
                    p[i] = lo[i] + (hi[i] - lo[i]) * static_cast<double>(idx[i]) / static_cast<double>(per_dim - 1);
                }
                probes.push_back(std::move(p));
                std::size_t i = 0;
                while (i < d && ++idx[i] == per_dim) idx[i++] = 0;
                if (i == d) break;
            }
            break;
        }
    }
    double worst = 0.0;
    for (const Point& q : probes) {
        double best = distance(q, grid.points.front());
        for (std::size_t i = 1; i < grid.points.size() && best > 0.0; ++i) {
            best = std::min(best, distance(q, grid.points[i]));
        }
        worst = std::max(worst, best);
    }
    return worst;
}

std::uint64_t grid_fingerprint(const EvaluationGrid& grid) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const Point& p : grid.points) h = hash_doubles(p, h);
    return h;
}

}  // namespace prefrec
