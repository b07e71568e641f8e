#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "prefrec/grid.hpp"
#include "prefrec/preference.hpp"

namespace prefrec {

// Weak preference restricted to a grid: member(i, j) means points[i] is at
// least as good as points[j]. Complete and reflexive by construction.
class RelationGraph {
public:
    RelationGraph(std::size_t n_points, std::vector<std::uint8_t> members);

    std::size_t point_count() const { return n_; }
    bool member(std::size_t i, std::size_t j) const { return members_[i * n_ + j] != 0; }
    std::size_t member_count() const;
    bool operator==(const RelationGraph& other) const {
        return n_ == other.n_ && members_ == other.members_;
    }

private:
    std::size_t n_;
    std::vector<std::uint8_t> members_;
};

RelationGraph relation_graph(const PreferenceSpec& p, const EvaluationGrid& grid);
RelationGraph relation_graph(const std::function<bool(const Point&, const Point&)>& prefers,
                             const EvaluationGrid& grid);

// Hausdorff distance between the two member sets, with the distance between
// ordered pairs taken in the Euclidean product norm. Zero iff the graphs
// coincide.
double hausdorff_distance(const RelationGraph& a, const RelationGraph& b, const EvaluationGrid& grid);

// The fudged variant: one side restricted to K, the other intersected with
// the theta-enlargement of K x K, symmetrized by max. Monotonically
// nonincreasing in theta; equals the plain distance when K covers the grid
// and theta is large.
double fudged_distance(const RelationGraph& a, const RelationGraph& b, const EvaluationGrid& grid,
                       const Box& k, double theta);

void write_relation_csv(const RelationGraph& graph, const EvaluationGrid& grid, const std::string& path);

}  // namespace prefrec
