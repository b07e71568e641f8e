#include "prefrec/metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "prefrec/errors.hpp"

namespace prefrec {

RelationGraph::RelationGraph(std::size_t n_points, std::vector<std::uint8_t> members)
    : n_(n_points), members_(std::move(members)) {
    if (members_.size() != n_ * n_) throw ContractViolation("relation graph: member matrix size mismatch");
    for (std::size_t i = 0; i < n_; ++i) {
        if (!members_[i * n_ + i]) throw ContractViolation("relation graph: missing reflexive pair");
        for (std::size_t j = 0; j < n_; ++j) {
            if (!members_[i * n_ + j] && !members_[j * n_ + i]) {
                throw ContractViolation("relation graph: incomplete at a grid pair");
            }
        }
    }
}

std::size_t RelationGraph::member_count() const {
    std::size_t c = 0;
    for (auto m : members_) c += m;
    return c;
}

RelationGraph relation_graph(const std::function<bool(const Point&, const Point&)>& prefers,
                             const EvaluationGrid& grid) {
    const std::size_t n = grid.size();
    std::vector<std::uint8_t> members(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            members[i * n + j] = prefers(grid.points[i], grid.points[j]) ? 1 : 0;
        }
    }
    return RelationGraph(n, std::move(members));
}

RelationGraph relation_graph(const PreferenceSpec& p, const EvaluationGrid& grid) {
    if (!p.space().same_shape(grid.space)) throw ContractViolation("relation_graph: space mismatch");
    return relation_graph([&p](const Point& x, const Point& y) { return weak_prefers(p, x, y); }, grid);
}

namespace {

// Squared point distances, so pair distances are one addition away.
std::vector<double> distance_sq_matrix(const EvaluationGrid& grid) {
    const std::size_t n = grid.size();
    std::vector<double> d2(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = distance(grid.points[i], grid.points[j]);
            d2[i * n + j] = d * d;
            d2[j * n + i] = d * d;
        }
    }
    return d2;
}

struct PairSet {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

double directed_distance(const PairSet& from, const PairSet& to, const std::vector<double>& d2,
                         std::size_t n) {
    if (from.pairs.empty()) return 0.0;
    if (to.pairs.empty()) throw ContractViolation("directed distance: empty target member set");
    double worst = 0.0;
    for (const auto& [i, j] : from.pairs) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& [k, l] : to.pairs) {
            const double v = d2[i * n + k] + d2[j * n + l];
            if (v < best) {
                best = v;
                if (best == 0.0) break;
            }
        }
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

PairSet all_members(const RelationGraph& g) {
    PairSet s;
    for (std::size_t i = 0; i < g.point_count(); ++i) {
        for (std::size_t j = 0; j < g.point_count(); ++j) {
            if (g.member(i, j)) s.pairs.emplace_back(i, j);
        }
    }
    return s;
}

}  // namespace

double hausdorff_distance(const RelationGraph& a, const RelationGraph& b, const EvaluationGrid& grid) {
    if (a.point_count() != grid.size() || b.point_count() != grid.size()) {
        throw ContractViolation("hausdorff_distance: graphs do not match the grid");
    }
    if (a == b) return 0.0;
    const auto d2 = distance_sq_matrix(grid);
    const PairSet sa = all_members(a);
    const PairSet sb = all_members(b);
    if (sa.pairs.empty() || sb.pairs.empty()) {
        throw ContractViolation("hausdorff_distance: empty member set");
    }
    return std::max(directed_distance(sa, sb, d2, grid.size()), directed_distance(sb, sa, d2, grid.size()));
}

double fudged_distance(const RelationGraph& a, const RelationGraph& b, const EvaluationGrid& grid,
                       const Box& k, double theta) {
    if (theta < 0.0) throw ValidationError("fudged distance: theta must be >= 0");
    if (a.point_count() != grid.size() || b.point_count() != grid.size()) {
        throw ContractViolation("fudged_distance: graphs do not match the grid");
    }
    const std::size_t n = grid.size();
    std::vector<double> dist_to_k(n, 0.0);
    bool any_in_k = false;
    for (std::size_t i = 0; i < n; ++i) {
        dist_to_k[i] = k.distance_to(grid.points[i]);
        any_in_k = any_in_k || dist_to_k[i] == 0.0;
    }
    if (!any_in_k) throw ValidationError("fudged distance: no grid points inside K");

    const auto d2 = distance_sq_matrix(grid);
    const double theta2 = theta * theta;
    auto restricted = [&](const RelationGraph& g) {
        PairSet s;
        for (std::size_t i = 0; i < n; ++i) {
            if (dist_to_k[i] > 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (dist_to_k[j] == 0.0 && g.member(i, j)) s.pairs.emplace_back(i, j);
            }
        }
        return s;
    };
    auto enlarged = [&](const RelationGraph& g) {
        PairSet s;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (!g.member(i, j)) continue;
                const double dd = dist_to_k[i] * dist_to_k[i] + dist_to_k[j] * dist_to_k[j];
                if (dd <= theta2 + 1e-18) s.pairs.emplace_back(i, j);
            }
        }
        return s;
    };
    const PairSet a_in_k = restricted(a);
    const PairSet b_in_k = restricted(b);
    const PairSet a_near = enlarged(a);
    const PairSet b_near = enlarged(b);
    // Reflexive pairs of K-points are always present, so the targets are
    // nonempty whenever K meets the grid.
    return std::max(directed_distance(a_in_k, b_near, d2, n), directed_distance(b_in_k, a_near, d2, n));
}

void write_relation_csv(const RelationGraph& graph, const EvaluationGrid& grid, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(grid_fingerprint(grid)));
    out << "# grid_fingerprint=" << buf << "\n";
    out << "i,j\n";
    for (std::size_t i = 0; i < graph.point_count(); ++i) {
        for (std::size_t j = 0; j < graph.point_count(); ++j) {
            if (graph.member(i, j)) out << i << ',' << j << '\n';
        }
    }
    if (!out) throw IoError("failed writing: " + path);
}

}  // namespace prefrec
