#pragma once

// Deterministic direction sets and seeded random state sampling.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "cathyp/assembly.hpp"

namespace cathyp {

/// n points of the Fibonacci lattice on the unit sphere.
inline std::vector<Direction> fibonacci_sphere(int n) {
    std::vector<Direction> out;
    if (n <= 0) return out;
    out.reserve(n);
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / n;
        const double radius = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * i;
        out.push_back(Direction::normalized(Vector3(radius * std::cos(phi), radius * std::sin(phi), z)));
    }
    return out;
}

inline std::vector<Direction> canonical_axes(int dim) {
    std::vector<Direction> out;
    for (int i = 0; i < dim; ++i) out.push_back(Direction::axis(dim, i));
    return out;
}

/// Ranges for random states: rho, theta log-uniform, v and q uniform.
struct StateSampling {
    double thermo_min = 0.1;
    double thermo_max = 10.0;
    double vector_bound = 5.0;
};

/// Seeded sampler; the same seed reproduces the same sequence.
class StateSampler {
public:
    explicit StateSampler(std::uint64_t seed, StateSampling ranges = {})
        : rng_(seed), ranges_(ranges) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng_);
    }

    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    ThermoPoint thermo() {
        const double rho = log_uniform(ranges_.thermo_min, ranges_.thermo_max);
        const double theta = log_uniform(ranges_.thermo_min, ranges_.thermo_max);
        return {rho, theta};
    }

    State state(int dim) {
        State s;
        s.dim = dim;
        const ThermoPoint pt = thermo();
        s.rho = pt.rho;
        s.theta = pt.theta;
        s.v = Vector(dim);
        s.q = Vector(dim);
        for (int i = 0; i < dim; ++i) s.v(i) = uniform(-ranges_.vector_bound, ranges_.vector_bound);
        for (int i = 0; i < dim; ++i) s.q(i) = uniform(-ranges_.vector_bound, ranges_.vector_bound);
        return s;
    }

    /// Uniform on the sphere (normalized Gaussian); +-1 in 1D.
    Direction direction(int dim) {
        if (dim == 1) return Direction(Vector::Constant(1, uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0));
        std::normal_distribution<double> normal(0.0, 1.0);
        Vector3 g;
        do {
            g = Vector3(normal(rng_), normal(rng_), normal(rng_));
        } while (g.norm() < 1e-6);
        return Direction::normalized(g);
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
    StateSampling ranges_;
};

} // namespace cathyp
