#include "prefrec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>

#include "prefrec/errors.hpp"

namespace prefrec {

namespace {
constexpr double kSimplexSumTol = 1e-12;
}

double dot(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const Point& a) { return std::sqrt(dot(a, a)); }

double distance(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double pair_distance(const Point& ax, const Point& ay, const Point& bx, const Point& by) {
    const double dx = distance(ax, bx);
    const double dy = distance(ay, by);
    return std::sqrt(dx * dx + dy * dy);
}

bool lex_less(const Point& a, const Point& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Box::Box(std::vector<double> lo_, std::vector<double> hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo.size() != hi.size()) throw ValidationError("box: lo/hi dimension mismatch");
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (!(lo[i] < hi[i])) throw ValidationError("box: requires lo < hi in every coordinate");
    }
}

Box Box::cube(std::size_t dim, double lo, double hi) {
    return Box(std::vector<double>(dim, lo), std::vector<double>(dim, hi));
}

bool Box::contains(const Point& p) const {
    if (p.size() != lo.size()) return false;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < lo[i] || p[i] > hi[i]) return false;
    }
    return true;
}

double Box::distance_to(const Point& p) const {
    double s = 0.0;
    for (std::size_t i = 0; i < lo.size(); ++i) {
        double d = 0.0;
        if (p[i] < lo[i]) d = lo[i] - p[i];
        else if (p[i] > hi[i]) d = p[i] - hi[i];
        s += d * d;
    }
    return std::sqrt(s);
}

AlternativeSpace::AlternativeSpace(SpaceKind kind, std::size_t dim, Box support)
    : kind_(kind), dim_(dim), support_(std::move(support)) {}

AlternativeSpace AlternativeSpace::simplex(std::size_t d) {
    if (d < 2) throw ValidationError("simplex space requires d >= 2");
    return AlternativeSpace(SpaceKind::Simplex, d, Box::cube(d, 0.0, 1.0));
}

AlternativeSpace AlternativeSpace::interior_simplex(std::size_t d) {
    if (d < 2) throw ValidationError("interior simplex space requires d >= 2");
    return AlternativeSpace(SpaceKind::InteriorSimplex, d, Box::cube(d, 0.0, 1.0));
}

AlternativeSpace AlternativeSpace::positive_orthant(std::size_t d, std::optional<Box> support) {
    if (d < 2) throw ValidationError("positive orthant space requires d >= 2");
    Box box = support ? *support : Box::cube(d, 0.25, 2.25);
    if (box.dim() != d) throw ValidationError("positive orthant: support dimension mismatch");
    for (double v : box.lo) {
        if (v <= 0.0) throw ValidationError("positive orthant: support must be strictly positive");
    }
    return AlternativeSpace(SpaceKind::PositiveOrthant, d, std::move(box));
}

AlternativeSpace AlternativeSpace::dated_reward(std::optional<Box> support) {
    Box box = support ? *support : Box::cube(2, 0.25, 4.0);
    if (box.dim() != 2) throw ValidationError("dated reward: support must be two-dimensional");
    for (double v : box.lo) {
        if (v <= 0.0) throw ValidationError("dated reward: support must be strictly positive");
    }
    return AlternativeSpace(SpaceKind::DatedReward, 2, std::move(box));
}

AlternativeSpace AlternativeSpace::real_line(std::optional<Box> support) {
    Box box = support ? *support : Box::cube(1, -2.0, 2.0);
    if (box.dim() != 1) throw ValidationError("real line: support must be one-dimensional");
    return AlternativeSpace(SpaceKind::RealLine, 1, std::move(box));
}

bool AlternativeSpace::contains(const Point& p) const {
    if (p.size() != dim_) return false;
    switch (kind_) {
        case SpaceKind::Simplex:
        case SpaceKind::InteriorSimplex: {
            double sum = 0.0;
            for (double v : p) {
                if (kind_ == SpaceKind::Simplex ? v < 0.0 : v <= 0.0) return false;
                sum += v;
            }
            return std::abs(sum - 1.0) <= kSimplexSumTol;
        }
        case SpaceKind::PositiveOrthant:
        case SpaceKind::DatedReward:
            for (double v : p) {
                if (v <= 0.0) return false;
            }
            return true;
        case SpaceKind::RealLine:
            return std::isfinite(p[0]);
    }
    return false;
}

void AlternativeSpace::require_valid(const Point& p, const char* who) const {
    if (p.size() != dim_) {
        throw ContractViolation(std::string(who) + ": point dimension " + std::to_string(p.size()) +
                                " does not match space dimension " + std::to_string(dim_));
    }
    if (!contains(p)) {
        throw ValidationError(std::string(who) + ": point violates the invariants of space " + name());
    }
}

std::string AlternativeSpace::name() const {
    switch (kind_) {
        case SpaceKind::Simplex: return "simplex";
        case SpaceKind::InteriorSimplex: return "interior_simplex";
        case SpaceKind::PositiveOrthant: return "positive_orthant";
        case SpaceKind::DatedReward: return "dated_reward";
        case SpaceKind::RealLine: return "real_line";
    }
    return "unknown";
}

AlternativeSpace parse_space(const std::string& name, std::size_t d) {
    if (name == "simplex") return AlternativeSpace::simplex(d);
    if (name == "interior_simplex") return AlternativeSpace::interior_simplex(d);
    if (name == "positive_orthant") return AlternativeSpace::positive_orthant(d);
    if (name == "dated_reward") return AlternativeSpace::dated_reward();
    if (name == "real_line") return AlternativeSpace::real_line();
    throw ValidationError("unknown space kind: " + name);
}

std::vector<std::vector<double>> sum_zero_basis(std::size_t d) {
    if (d < 2) throw ContractViolation("sum_zero_basis: d must be >= 2");
    // Helmert rows: k ones followed by -k, scaled to unit norm.
    std::vector<std::vector<double>> rows;
    rows.reserve(d - 1);
    for (std::size_t k = 1; k < d; ++k) {
        std::vector<double> row(d, 0.0);
        const double scale = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
        for (std::size_t i = 0; i < k; ++i) row[i] = scale;
        row[k] = -static_cast<double>(k) * scale;
        rows.push_back(std::move(row));
    }
    return rows;
}

double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) throw ContractViolation("inverse_normal_cdf: p must lie in (0,1)");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                               1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                               6.680131188771972e+01,  -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                               -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static const double dd[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t hash_doubles(const std::vector<double>& xs, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (double x : xs) {
        std::uint64_t bits;
        std::memcpy(&bits, &x, sizeof(bits));
        h = fnv1a64(&bits, sizeof(bits), h);
    }
    return h;
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace prefrec
