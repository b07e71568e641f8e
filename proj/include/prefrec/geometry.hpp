#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace prefrec {

// An alternative is a coordinate vector; the owning AlternativeSpace fixes
// its meaning (lottery probabilities, bundle quantities, or (date, money)).
using Point = std::vector<double>;

double dot(const Point& a, const Point& b);
double norm(const Point& a);
double distance(const Point& a, const Point& b);
// Euclidean product norm between ordered pairs (ax,ay) and (bx,by).
double pair_distance(const Point& ax, const Point& ay, const Point& bx, const Point& by);
bool lex_less(const Point& a, const Point& b);

// Axis-aligned compact box, used as sampling support and as the K of the
// fudged metric.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    Box() = default;
    Box(std::vector<double> lo_, std::vector<double> hi_);
    static Box cube(std::size_t dim, double lo, double hi);

    std::size_t dim() const { return lo.size(); }
    bool contains(const Point& p) const;
    // Euclidean distance from p to the box (0 when inside).
    double distance_to(const Point& p) const;
};

enum class SpaceKind {
    Simplex,          // closed probability simplex, d >= 2 coordinates
    InteriorSimplex,  // strictly positive lotteries
    PositiveOrthant,  // consumption bundles, all coordinates > 0
    DatedReward,      // (date, money), both > 0
    RealLine,         // one real coordinate (the non-closedness demo only)
};

class AlternativeSpace {
public:
    static AlternativeSpace simplex(std::size_t d);
    static AlternativeSpace interior_simplex(std::size_t d);
    static AlternativeSpace positive_orthant(std::size_t d, std::optional<Box> support = std::nullopt);
    static AlternativeSpace dated_reward(std::optional<Box> support = std::nullopt);
    static AlternativeSpace real_line(std::optional<Box> support = std::nullopt);

    SpaceKind kind() const { return kind_; }
    std::size_t dim() const { return dim_; }
    // Compact sampling support for lambda; simplex kinds sample the whole
    // simplex and ignore it.
    const Box& sampling_support() const { return support_; }

    bool contains(const Point& p) const;
    // Throws ContractViolation on dimension mismatch, ValidationError when
    // the coordinates break the space invariants.
    void require_valid(const Point& p, const char* who) const;

    std::string name() const;
    bool same_shape(const AlternativeSpace& other) const {
        return kind_ == other.kind_ && dim_ == other.dim_;
    }

private:
    AlternativeSpace(SpaceKind kind, std::size_t dim, Box support);

    SpaceKind kind_;
    std::size_t dim_;
    Box support_;
};

AlternativeSpace parse_space(const std::string& name, std::size_t d);

// Orthonormal rows spanning the sum-zero subspace of R^d (d-1 rows of length d).
std::vector<std::vector<double>> sum_zero_basis(std::size_t d);

// Acklam's rational approximation, |error| < 1.2e-9; enough for sampling.
double inverse_normal_cdf(double p);

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t hash_doubles(const std::vector<double>& xs, std::uint64_t seed = 0xcbf29ce484222325ULL);

// Shortest printable decimal that round-trips the double (17 significant digits).
std::string format_double(double x);

}  // namespace prefrec
