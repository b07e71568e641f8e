#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "prefrec/geometry.hpp"

namespace prefrec {

enum class DominanceKind {
    AllCoordsGreater,      // every coordinate strictly larger
    AlphaTradeoff,         // x_i - y_i > alpha/(d-1) * sum_{j!=i}(x_j - y_j), alpha in [0,1)
    PrefixSums,            // every prefix sum strictly larger (earlier consumption counts)
    SortedGreater,         // some index permutation of x beats y coordinatewise
    FirstOrderStochastic,  // strict first-order stochastic dominance on ordered rewards
    EarlierLarger,         // dated rewards: paid earlier and paid more
    MenuSupport,           // menus compared through support functions; use menu_dominates
};

class DominanceRelation {
public:
    static DominanceRelation all_coords_greater() { return DominanceRelation(DominanceKind::AllCoordsGreater, 0.0); }
    static DominanceRelation alpha_tradeoff(double alpha);
    static DominanceRelation prefix_sums() { return DominanceRelation(DominanceKind::PrefixSums, 0.0); }
    static DominanceRelation sorted_greater() { return DominanceRelation(DominanceKind::SortedGreater, 0.0); }
    static DominanceRelation first_order_stochastic() {
        return DominanceRelation(DominanceKind::FirstOrderStochastic, 0.0);
    }
    static DominanceRelation earlier_larger() { return DominanceRelation(DominanceKind::EarlierLarger, 0.0); }
    static DominanceRelation menu_support() { return DominanceRelation(DominanceKind::MenuSupport, 0.0); }
    static DominanceRelation parse(const std::string& name, double alpha = 0.0);

    DominanceKind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    std::string name() const;

private:
    DominanceRelation(DominanceKind kind, double alpha) : kind_(kind), alpha_(alpha) {}
    DominanceKind kind_;
    double alpha_;
};

// Exact evaluation of the relation's defining inequalities. MenuSupport is
// rejected here (menus are not points).
bool dominates(const DominanceRelation& rel, const Point& x, const Point& y);

// Convex menu of full-support lotteries, given by its vertex list.
struct Menu {
    std::vector<Point> vertices;
};

Menu make_menu(const AlternativeSpace& space, std::vector<Point> vertices);

// Deterministic low-discrepancy sample of the normalized index set
// {u : sum u_i = 0, |u| = 1}.
std::vector<std::vector<double>> index_sphere_directions(std::size_t d, std::size_t count);

double support_value(const Menu& m, const std::vector<double>& direction);

// Sampled sufficient check of menu dominance: strict support-function
// ordering at u_samples sampled index directions. Exact per direction
// (vertex maximization), sampled over directions.
bool menu_dominates(const Menu& a, const Menu& b, std::size_t u_samples = 512);

}  // namespace prefrec
