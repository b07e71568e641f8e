#include "prefrec/preference.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "prefrec/errors.hpp"

namespace prefrec {

PiecewiseLinear::PiecewiseLinear(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() != ys_.size()) throw ValidationError("piecewise linear: knot count mismatch");
    if (xs_.size() < 2) throw ValidationError("piecewise linear: needs at least two knots");
    for (std::size_t i = 1; i < xs_.size(); ++i) {
        if (!(xs_[i - 1] < xs_[i])) throw ValidationError("piecewise linear: knots must be strictly increasing");
    }
}

double PiecewiseLinear::operator()(double x) const {
    std::size_t hi = xs_.size() - 1;
    if (x <= xs_[0]) hi = 1;
    else if (x < xs_[hi]) hi = std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin();
    const std::size_t lo = hi - 1;
    const double t = (x - xs_[lo]) / (xs_[hi] - xs_[lo]);
    return ys_[lo] + t * (ys_[hi] - ys_[lo]);
}

double PiecewiseLinear::min_slope() const {
    double m = (ys_[1] - ys_[0]) / (xs_[1] - xs_[0]);
    for (std::size_t i = 1; i + 1 < xs_.size(); ++i) {
        m = std::min(m, (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]));
    }
    return m;
}

double PiecewiseLinear::max_slope() const {
    double m = (ys_[1] - ys_[0]) / (xs_[1] - xs_[0]);
    for (std::size_t i = 1; i + 1 < xs_.size(); ++i) {
        m = std::max(m, (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]));
    }
    return m;
}

std::vector<double> eu_normalize(const std::vector<double>& v) {
    if (v.size() < 2) throw ValidationError("expected utility index needs d >= 2");
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    std::vector<double> w(v.size());
    double n2 = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        w[i] = v[i] - mean;
        n2 += w[i] * w[i];
    }
    if (n2 < 1e-24) throw ValidationError("expected utility index is constant (trivial preference)");
    const double inv = 1.0 / std::sqrt(n2);
    for (double& x : w) x *= inv;
    return w;
}

PreferenceSpec::PreferenceSpec(AlternativeSpace space, Family family)
    : space_(std::move(space)), family_(std::move(family)) {}

PreferenceSpec PreferenceSpec::expected_utility(AlternativeSpace space, std::vector<double> raw_index) {
    if (space.kind() != SpaceKind::Simplex && space.kind() != SpaceKind::InteriorSimplex) {
        throw ValidationError("expected utility preferences live on a simplex space");
    }
    if (raw_index.size() != space.dim()) throw ValidationError("expected utility index dimension mismatch");
    ExpectedUtilityFamily f;
    f.index = eu_normalize(raw_index);
    return PreferenceSpec(std::move(space), std::move(f));
}

PreferenceSpec PreferenceSpec::expected_utility_normalized(AlternativeSpace space, std::vector<double> index) {
    if (space.kind() != SpaceKind::Simplex && space.kind() != SpaceKind::InteriorSimplex) {
        throw ValidationError("expected utility preferences live on a simplex space");
    }
    if (index.size() != space.dim()) throw ValidationError("expected utility index dimension mismatch");
    double sum = 0.0, n2 = 0.0;
    for (double x : index) {
        sum += x;
        n2 += x * x;
    }
    if (std::abs(sum) > 1e-12 || std::abs(std::sqrt(n2) - 1.0) > 1e-12) {
        throw ValidationError("expected utility index is not normalized");
    }
    ExpectedUtilityFamily f;
    f.index = std::move(index);
    return PreferenceSpec(std::move(space), std::move(f));
}

PreferenceSpec PreferenceSpec::discounted_utility(AlternativeSpace space, std::vector<double> discounts,
                                                  PiecewiseLinear value, double epsilon, double slope_min,
                                                  double slope_max) {
    if (space.kind() != SpaceKind::PositiveOrthant) {
        throw ValidationError("discounted utility preferences live on the positive orthant");
    }
    if (discounts.size() != space.dim()) throw ValidationError("discount vector dimension mismatch");
    if (!(epsilon > 0.0) || !(slope_min > 0.0) || !(slope_min < slope_max)) {
        throw ValidationError("discounted utility requires epsilon > 0 and 0 < slope_min < slope_max");
    }
    for (double d : discounts) {
        if (d < epsilon || d > 1.0) throw ValidationError("discount factors must lie in [epsilon, 1]");
    }
    const double tol = 1e-9;
    if (value.min_slope() < slope_min - tol || value.max_slope() > slope_max + tol) {
        throw ValidationError("discounted utility: piecewise slopes must lie in [slope_min, slope_max]");
    }
    DiscountedUtilityFamily f;
    f.discounts = std::move(discounts);
    f.value = std::move(value);
    f.epsilon = epsilon;
    f.slope_min = slope_min;
    f.slope_max = slope_max;
    return PreferenceSpec(std::move(space), std::move(f));
}

PreferenceSpec PreferenceSpec::total_indifference(AlternativeSpace space) {
    return PreferenceSpec(std::move(space), TotalIndifferenceFamily{});
}

PreferenceSpec PreferenceSpec::tabulated(AlternativeSpace space, std::vector<Point> points,
                                         std::vector<double> values) {
    if (points.size() != values.size()) throw ValidationError("tabulated utility: point/value count mismatch");
    if (points.empty()) throw ValidationError("tabulated utility: empty table");
    for (const Point& p : points) space.require_valid(p, "tabulated utility");
    TabulatedFamily f;
    f.points = std::move(points);
    f.values = std::move(values);
    return PreferenceSpec(std::move(space), std::move(f));
}

PreferenceSpec PreferenceSpec::erratic(AlternativeSpace space, int level, std::vector<double> base_points) {
    if (space.kind() != SpaceKind::RealLine) throw ValidationError("erratic rationalizers live on the real line");
    if (base_points.size() < 2) throw ValidationError("erratic utility needs at least two base points");
    for (std::size_t i = 1; i < base_points.size(); ++i) {
        if (!(base_points[i - 1] < base_points[i])) {
            throw ValidationError("erratic utility: base points must be strictly increasing and distinct");
        }
    }
    // Knots: every base point at arctan value, plus the 1-knot and 0-knot at
    // thirds of each gap.
    std::vector<double> xs, ys;
    xs.reserve(3 * base_points.size());
    ys.reserve(3 * base_points.size());
    for (std::size_t i = 0; i < base_points.size(); ++i) {
        const double b = base_points[i];
        xs.push_back(b);
        ys.push_back(std::atan(b));
        if (i + 1 < base_points.size()) {
            const double gap = base_points[i + 1] - b;
            xs.push_back(b + gap / 3.0);
            ys.push_back(1.0);
            xs.push_back(b + 2.0 * gap / 3.0);
            ys.push_back(0.0);
        }
    }
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i - 1] < xs[i])) {
            throw ValidationError("erratic utility: degenerate gap produced colliding knots");
        }
    }
    ErraticFamily f;
    f.level = level;
    f.base_points = std::move(base_points);
    f.interior = PiecewiseLinear(std::move(xs), std::move(ys));
    return PreferenceSpec(std::move(space), std::move(f));
}

PreferenceSpec erratic_utility(int n, const std::vector<double>& base_points) {
    return PreferenceSpec::erratic(AlternativeSpace::real_line(), n, base_points);
}

std::string PreferenceSpec::family_name() const {
    struct Visitor {
        std::string operator()(const ExpectedUtilityFamily&) const { return "expected_utility"; }
        std::string operator()(const DiscountedUtilityFamily&) const { return "discounted_utility"; }
        std::string operator()(const TotalIndifferenceFamily&) const { return "total_indifference"; }
        std::string operator()(const ErraticFamily&) const { return "erratic_pwl"; }
        std::string operator()(const TabulatedFamily&) const { return "tabulated_utility"; }
    };
    return std::visit(Visitor{}, family_);
}

double PreferenceSpec::utility(const Point& x) const {
    if (x.size() != space_.dim()) {
        throw ContractViolation("utility: point dimension does not match preference space");
    }
    if (const auto* eu = std::get_if<ExpectedUtilityFamily>(&family_)) {
        return dot(eu->index, x);
    }
    if (const auto* du = std::get_if<DiscountedUtilityFamily>(&family_)) {
        double u = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) u += du->discounts[i] * du->value(x[i]);
        return u;
    }
    if (std::get_if<TotalIndifferenceFamily>(&family_)) {
        return 0.0;
    }
    if (const auto* er = std::get_if<ErraticFamily>(&family_)) {
        const double v = x[0];
        if (v < er->base_points.front() || v > er->base_points.back()) return std::atan(v);
        return er->interior(v);
    }
    const auto& tab = std::get<TabulatedFamily>(family_);
    for (std::size_t i = 0; i < tab.points.size(); ++i) {
        if (tab.points[i] == x) return tab.values[i];
    }
    throw ContractViolation("tabulated utility: point not present in the table");
}

bool weak_prefers(const PreferenceSpec& p, const Point& x, const Point& y) {
    return p.utility(x) >= p.utility(y);
}

bool strictly_prefers(const PreferenceSpec& p, const Point& x, const Point& y) {
    return weak_prefers(p, x, y) && !weak_prefers(p, y, x);
}

namespace {

void write_vector(std::ostringstream& out, const char* key, const std::vector<double>& xs) {
    out << key << " =";
    for (double x : xs) out << ' ' << format_double(x);
    out << '\n';
}

std::vector<double> parse_vector(const std::string& text) {
    std::istringstream in(text);
    std::vector<double> xs;
    double v;
    while (in >> v) xs.push_back(v);
    return xs;
}

}  // namespace

std::string PreferenceSpec::serialize() const {
    std::ostringstream out;
    out << "family = " << family_name() << '\n';
    out << "space = " << space_.name() << '\n';
    out << "d = " << space_.dim() << '\n';
    if (const auto* eu = std::get_if<ExpectedUtilityFamily>(&family_)) {
        write_vector(out, "v", eu->index);
    } else if (const auto* du = std::get_if<DiscountedUtilityFamily>(&family_)) {
        out << "epsilon = " << format_double(du->epsilon) << '\n';
        out << "slope_min = " << format_double(du->slope_min) << '\n';
        out << "slope_max = " << format_double(du->slope_max) << '\n';
        write_vector(out, "delta", du->discounts);
        write_vector(out, "knots_x", du->value.knots_x());
        write_vector(out, "knots_y", du->value.knots_y());
    } else if (const auto* er = std::get_if<ErraticFamily>(&family_)) {
        out << "level = " << er->level << '\n';
        write_vector(out, "base_points", er->base_points);
    } else if (const auto* tab = std::get_if<TabulatedFamily>(&family_)) {
        std::vector<double> flat;
        for (const Point& p : tab->points) flat.insert(flat.end(), p.begin(), p.end());
        write_vector(out, "points", flat);
        write_vector(out, "values", tab->values);
    }
    return out.str();
}

PreferenceSpec PreferenceSpec::parse(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            s = (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
        };
        trim(key);
        trim(val);
        kv[key] = val;
    }
    auto need = [&](const char* key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) throw ValidationError(std::string("preference text missing key: ") + key);
        return it->second;
    };
    const std::string family = need("family");
    const std::size_t d = std::stoul(need("d"));
    AlternativeSpace space = parse_space(need("space"), d);
    if (family == "expected_utility") {
        return expected_utility(std::move(space), parse_vector(need("v")));
    }
    if (family == "discounted_utility") {
        return discounted_utility(std::move(space), parse_vector(need("delta")),
                                  PiecewiseLinear(parse_vector(need("knots_x")), parse_vector(need("knots_y"))),
                                  std::stod(need("epsilon")), std::stod(need("slope_min")),
                                  std::stod(need("slope_max")));
    }
    if (family == "total_indifference") {
        return total_indifference(std::move(space));
    }
    if (family == "erratic_pwl") {
        return erratic(std::move(space), std::stoi(need("level")), parse_vector(need("base_points")));
    }
    if (family == "tabulated_utility") {
        const std::vector<double> flat = parse_vector(need("points"));
        const std::vector<double> values = parse_vector(need("values"));
        if (values.empty() || flat.size() != values.size() * d) {
            throw ValidationError("tabulated utility text: inconsistent point/value sizes");
        }
        std::vector<Point> points(values.size(), Point(d, 0.0));
        for (std::size_t i = 0; i < values.size(); ++i) {
            for (std::size_t j = 0; j < d; ++j) points[i][j] = flat[i * d + j];
        }
        return tabulated(std::move(space), std::move(points), values);
    }
    throw ValidationError("unknown preference family: " + family);
}

}  // namespace prefrec
