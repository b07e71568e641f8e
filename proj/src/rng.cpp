#include "prefrec/rng.hpp"

#include <cmath>

#include "prefrec/errors.hpp"

namespace prefrec {

Point sample_unit_simplex(std::size_t d, Rng& rng) {
    Point p(d, 0.0);
    double sum = 0.0;
    do {
        sum = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            p[i] = -std::log1p(-rng.uniform01());
            sum += p[i];
        }
    } while (sum <= 0.0);
    for (std::size_t i = 0; i < d; ++i) p[i] /= sum;
    return p;
}

Point sample_box(const Box& box, Rng& rng) {
    Point p(box.dim(), 0.0);
    for (std::size_t i = 0; i < box.dim(); ++i) p[i] = rng.uniform(box.lo[i], box.hi[i]);
    return p;
}

Point sample_point(const AlternativeSpace& space, Rng& rng) {
    switch (space.kind()) {
        case SpaceKind::Simplex:
            return sample_unit_simplex(space.dim(), rng);
        case SpaceKind::InteriorSimplex: {
            Point p;
            do {
                p = sample_unit_simplex(space.dim(), rng);
            } while (!space.contains(p));
            return p;
        }
        case SpaceKind::PositiveOrthant:
        case SpaceKind::DatedReward:
        case SpaceKind::RealLine:
            return sample_box(space.sampling_support(), rng);
    }
    throw ContractViolation("sample_point: unhandled space kind");
}

std::vector<double> sample_eu_index(std::size_t d, Rng& rng) {
    while (true) {
        std::vector<double> v(d, 0.0);
        double mean = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            v[i] = rng.normal();
            mean += v[i];
        }
        mean /= static_cast<double>(d);
        double n2 = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            v[i] -= mean;
            n2 += v[i] * v[i];
        }
        if (n2 < 1e-20) continue;  // essentially constant, resample
        const double inv = 1.0 / std::sqrt(n2);
        for (std::size_t i = 0; i < d; ++i) v[i] *= inv;
        return v;
    }
}

}  // namespace prefrec
