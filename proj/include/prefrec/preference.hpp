#pragma once

#include <string>
#include <variant>
#include <vector>

#include "prefrec/geometry.hpp"

namespace prefrec {

// Piecewise-linear function on a strictly increasing knot grid; outside the
// knot range it extrapolates with the first/last segment slope, which keeps
// the global slope bounds intact.
class PiecewiseLinear {
public:
    PiecewiseLinear() = default;
    PiecewiseLinear(std::vector<double> xs, std::vector<double> ys);

    double operator()(double x) const;
    const std::vector<double>& knots_x() const { return xs_; }
    const std::vector<double>& knots_y() const { return ys_; }
    double min_slope() const;
    double max_slope() const;

private:
    std::vector<double> xs_;
    std::vector<double> ys_;
};

struct ExpectedUtilityFamily {
    std::vector<double> index;  // sum-zero, unit norm
};

struct DiscountedUtilityFamily {
    std::vector<double> discounts;  // each in [epsilon, 1]
    PiecewiseLinear value;          // per-period value of consumption, slopes in [slope_min, slope_max]
    double epsilon = 0.05;
    double slope_min = 0.5;
    double slope_max = 2.0;
};

struct TotalIndifferenceFamily {};

// The oscillating rationalizer: arctan at the observed alternatives and
// outside their hull, with interior knots at thirds of each gap pinned to
// utility 1 and 0.
struct ErraticFamily {
    int level = 0;
    std::vector<double> base_points;
    PiecewiseLinear interior;
};

// Utility known only at an explicit point list; lookups must hit a stored
// point exactly. Used as an oracle stand-in (e.g. the >= order on a grid).
struct TabulatedFamily {
    std::vector<Point> points;
    std::vector<double> values;
};

class PreferenceSpec {
public:
    using Family = std::variant<ExpectedUtilityFamily, DiscountedUtilityFamily, TotalIndifferenceFamily,
                                ErraticFamily, TabulatedFamily>;

    // Normalizes raw_index onto the sum-zero unit sphere; rejects constant indexes.
    static PreferenceSpec expected_utility(AlternativeSpace space, std::vector<double> raw_index);
    // Stores index bit-for-bit; it must already satisfy the normalization
    // invariants within 1e-12. For callers whose loss accounting depends on
    // the exact stored vector.
    static PreferenceSpec expected_utility_normalized(AlternativeSpace space, std::vector<double> index);
    static PreferenceSpec discounted_utility(AlternativeSpace space, std::vector<double> discounts,
                                             PiecewiseLinear value, double epsilon = 0.05,
                                             double slope_min = 0.5, double slope_max = 2.0);
    static PreferenceSpec total_indifference(AlternativeSpace space);
    static PreferenceSpec tabulated(AlternativeSpace space, std::vector<Point> points, std::vector<double> values);
    static PreferenceSpec erratic(AlternativeSpace space, int level, std::vector<double> base_points);

    const AlternativeSpace& space() const { return space_; }
    const Family& family() const { return family_; }
    std::string family_name() const;

    double utility(const Point& x) const;

    std::string serialize() const;
    static PreferenceSpec parse(const std::string& text);

    template <typename T>
    const T* as() const {
        return std::get_if<T>(&family_);
    }

private:
    PreferenceSpec(AlternativeSpace space, Family family);

    AlternativeSpace space_;
    Family family_;
};

// x at least as good as y under p; exact comparison, no tolerance band.
bool weak_prefers(const PreferenceSpec& p, const Point& x, const Point& y);
bool strictly_prefers(const PreferenceSpec& p, const Point& x, const Point& y);

// Projects onto the sum-zero subspace and scales to unit norm; throws
// ValidationError if v is (numerically) constant.
std::vector<double> eu_normalize(const std::vector<double>& v);

// The oscillating rationalizer for the first n observed alternatives
// (base_points strictly increasing, size >= 2). Lives on the real line.
PreferenceSpec erratic_utility(int n, const std::vector<double>& base_points);

}  // namespace prefrec
