#include "prefrec/dominance.hpp"

#include <algorithm>
#include <cmath>

#include "prefrec/errors.hpp"

namespace prefrec {

DominanceRelation DominanceRelation::alpha_tradeoff(double alpha) {
    if (!(alpha >= 0.0) || !(alpha < 1.0)) {
        throw ValidationError("alpha tradeoff dominance requires alpha in [0, 1)");
    }
    return DominanceRelation(DominanceKind::AlphaTradeoff, alpha);
}

DominanceRelation DominanceRelation::parse(const std::string& name, double alpha) {
    if (name == "all_coords_greater") return all_coords_greater();
    if (name == "alpha_tradeoff") return alpha_tradeoff(alpha);
    if (name == "prefix_sums") return prefix_sums();
    if (name == "sorted_greater") return sorted_greater();
    if (name == "fsd") return first_order_stochastic();
    if (name == "earlier_larger") return earlier_larger();
    if (name == "menu_support") return menu_support();
    throw ValidationError("unknown dominance relation: " + name);
}

std::string DominanceRelation::name() const {
    switch (kind_) {
        case DominanceKind::AllCoordsGreater: return "all_coords_greater";
        case DominanceKind::AlphaTradeoff: return "alpha_tradeoff";
        case DominanceKind::PrefixSums: return "prefix_sums";
        case DominanceKind::SortedGreater: return "sorted_greater";
        case DominanceKind::FirstOrderStochastic: return "fsd";
        case DominanceKind::EarlierLarger: return "earlier_larger";
        case DominanceKind::MenuSupport: return "menu_support";
    }
    return "unknown";
}

bool dominates(const DominanceRelation& rel, const Point& x, const Point& y) {
    if (x.size() != y.size()) throw ContractViolation("dominates: point dimension mismatch");
    const std::size_t d = x.size();
    switch (rel.kind()) {
        case DominanceKind::AllCoordsGreater:
            for (std::size_t i = 0; i < d; ++i) {
                if (!(x[i] > y[i])) return false;
            }
            return true;
        case DominanceKind::AlphaTradeoff: {
            if (d < 2) throw ContractViolation("alpha tradeoff dominance needs d >= 2");
            double total = 0.0;
            for (std::size_t i = 0; i < d; ++i) total += x[i] - y[i];
            const double scale = rel.alpha() / static_cast<double>(d - 1);
            for (std::size_t i = 0; i < d; ++i) {
                const double di = x[i] - y[i];
                if (!(di > scale * (total - di))) return false;
            }
            return true;
        }
        case DominanceKind::PrefixSums: {
            double sx = 0.0, sy = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                sx += x[i];
                sy += y[i];
                if (!(sx > sy)) return false;
            }
            return true;
        }
        case DominanceKind::SortedGreater: {
            // Equivalent to the existential-permutation definition: sort both
            // descending and compare componentwise.
            Point xs = x, ys = y;
            std::sort(xs.begin(), xs.end(), std::greater<>());
            std::sort(ys.begin(), ys.end(), std::greater<>());
            for (std::size_t i = 0; i < d; ++i) {
                if (!(xs[i] > ys[i])) return false;
            }
            return true;
        }
        case DominanceKind::FirstOrderStochastic: {
            // Rewards are ordered increasing; the dominant lottery carries
            // strictly less cumulative mass at every level below the top.
            if (d < 2) throw ContractViolation("stochastic dominance needs d >= 2");
            double sx = 0.0, sy = 0.0;
            for (std::size_t i = 0; i + 1 < d; ++i) {
                sx += x[i];
                sy += y[i];
                if (!(sx < sy)) return false;
            }
            return true;
        }
        case DominanceKind::EarlierLarger:
            if (d != 2) throw ContractViolation("dated-reward dominance needs dimension 2");
            return x[0] < y[0] && x[1] > y[1];
        case DominanceKind::MenuSupport:
            throw ContractViolation("menu dominance compares menus, not points; use menu_dominates");
    }
    throw ContractViolation("dominates: unhandled relation kind");
}

Menu make_menu(const AlternativeSpace& space, std::vector<Point> vertices) {
    if (space.kind() != SpaceKind::InteriorSimplex && space.kind() != SpaceKind::Simplex) {
        throw ValidationError("menus are sets of lotteries; expected a simplex space");
    }
    const std::size_t d = space.dim();
    if (vertices.size() < d) throw ValidationError("menu needs at least d vertices");
    for (const Point& v : vertices) {
        if (v.size() != d) throw ValidationError("menu vertex dimension mismatch");
        for (double c : v) {
            if (!(c > 0.0)) throw ValidationError("menu vertices must lie strictly inside the simplex");
        }
    }
    // Nonempty interior within the simplex's affine span: the vertex
    // differences must span the full sum-zero subspace (rank d-1).
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 1; i < vertices.size(); ++i) {
        std::vector<double> r(d);
        for (std::size_t j = 0; j < d; ++j) r[j] = vertices[i][j] - vertices[0][j];
        rows.push_back(std::move(r));
    }
    std::size_t rank = 0;
    for (std::size_t col = 0; col < d && rank < rows.size(); ++col) {
        std::size_t pivot = rank;
        for (std::size_t r = rank; r < rows.size(); ++r) {
            if (std::abs(rows[r][col]) > std::abs(rows[pivot][col])) pivot = r;
        }
        if (std::abs(rows[pivot][col]) < 1e-12) continue;
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            const double f = rows[r][col] / rows[rank][col];
            for (std::size_t c = col; c < d; ++c) rows[r][c] -= f * rows[rank][c];
        }
        ++rank;
    }
    if (rank < d - 1) throw ValidationError("menu vertices are affinely degenerate (empty interior)");
    return Menu{std::move(vertices)};
}

std::vector<std::vector<double>> index_sphere_directions(std::size_t d, std::size_t count) {
    if (d < 2) throw ContractViolation("index sphere needs d >= 2");
    if (count == 0) throw ValidationError("index sphere sample count must be >= 1");
    const auto basis = sum_zero_basis(d);
    const std::size_t m = d - 1;
    std::vector<std::vector<double>> dirs;
    dirs.reserve(count);
    auto embed = [&](const std::vector<double>& w) {
        std::vector<double> u(d, 0.0);
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t j = 0; j < d; ++j) u[j] += w[r] * basis[r][j];
        }
        return u;
    };
    if (m == 1) {
        // The index set is two antipodal points; alternate them.
        for (std::size_t i = 0; i < count; ++i) dirs.push_back(embed({i % 2 == 0 ? 1.0 : -1.0}));
        return dirs;
    }
    if (m == 2) {
        // Golden-angle sequence on the circle.
        const double golden = 0.6180339887498949;
        for (std::size_t i = 0; i < count; ++i) {
            const double t = std::fmod(static_cast<double>(i) * golden + 0.5 * golden, 1.0);
            const double theta = 6.283185307179586 * t;
            dirs.push_back(embed({std::cos(theta), std::sin(theta)}));
        }
        return dirs;
    }
    // Halton points mapped through the normal quantile, then normalized.
    static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    if (m > sizeof(primes) / sizeof(primes[0])) throw ValidationError("index sphere: dimension too large");
    auto halton = [](std::size_t i, int base) {
        double f = 1.0, r = 0.0;
        std::size_t n = i;
        while (n > 0) {
            f /= base;
            r += f * static_cast<double>(n % base);
            n /= base;
        }
        return r;
    };
    std::size_t i = 1;
    while (dirs.size() < count) {
        std::vector<double> w(m, 0.0);
        double n2 = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
            double u = halton(i, primes[r]);
            u = std::min(std::max(u, 1e-12), 1.0 - 1e-12);
            w[r] = inverse_normal_cdf(u);
            n2 += w[r] * w[r];
        }
        ++i;
        if (n2 < 1e-12) continue;
        const double inv = 1.0 / std::sqrt(n2);
        for (double& x : w) x *= inv;
        dirs.push_back(embed(w));
    }
    return dirs;
}

double support_value(const Menu& m, const std::vector<double>& direction) {
    double best = dot(m.vertices.front(), direction);
    for (std::size_t i = 1; i < m.vertices.size(); ++i) {
        best = std::max(best, dot(m.vertices[i], direction));
    }
    return best;
}

bool menu_dominates(const Menu& a, const Menu& b, std::size_t u_samples) {
    if (a.vertices.empty() || b.vertices.empty()) throw ValidationError("menu_dominates: empty menu");
    const std::size_t d = a.vertices.front().size();
    if (b.vertices.front().size() != d) throw ValidationError("menu_dominates: menus of mismatched dimension");
    if (u_samples == 0) throw ValidationError("menu_dominates: u_samples must be >= 1");
    for (const auto& u : index_sphere_directions(d, u_samples)) {
        if (!(support_value(a, u) > support_value(b, u))) return false;
    }
    return true;
}

}  // namespace prefrec
