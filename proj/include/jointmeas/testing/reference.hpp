// Reference implementations used only to cross-validate the library. They
// deliberately share no code with the paths they check: the sharpness
// solver here is a grid search over the direction norm constraints, error
// bars are re-derived by finite differences and by bootstrap resampling.

#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "jointmeas/bloch.hpp"
#include "jointmeas/estimator.hpp"
#include "jointmeas/montecarlo.hpp"

namespace jointmeas::testing {

// ---------------------------------------------------------------------------
// Brute-force sharpness solver
// ---------------------------------------------------------------------------

struct GridSolution {
    double alpha;
    double beta;
    double residual;
};

// Solve |alpha a + beta b| = 2p, |alpha a - beta b| = 2(1-p) for axes at
// angle 2*theta by coarse scan plus nested grid refinement, to residuals at
// machine level. The constraints are symmetric under swapping the pair;
// the search runs over 0 < alpha <= beta <= 1, which selects the same
// ordering the closed form produces.
inline GridSolution grid_solve_sharpness(double p, double theta,
                                         int coarse = 201) {
    const BlochVector a = z_axis();
    const BlochVector b = {std::sin(2.0 * theta), 0.0, std::cos(2.0 * theta)};
    auto residual = [&](double alpha, double beta) {
        const double r1 = norm(alpha * a + beta * b) - 2.0 * p;
        const double r2 = norm(alpha * a - beta * b) - 2.0 * (1.0 - p);
        return r1 * r1 + r2 * r2;
    };

    GridSolution best{0.5, 0.5, std::numeric_limits<double>::infinity()};
    const double step = 1.0 / (coarse - 1);
    for (int i = 1; i < coarse; ++i) {
        const double alpha = i * step;
        for (int j = i; j < coarse; ++j) {
            const double beta = j * step;
            const double r = residual(alpha, beta);
            if (r < best.residual) best = {alpha, beta, r};
        }
    }

    double h = step;
    for (int round = 0; round < 120 && h > 1e-18; ++round) {
        GridSolution local = best;
        for (int i = -6; i <= 6; ++i) {
            for (int j = -6; j <= 6; ++j) {
                const double alpha = best.alpha + i * (h / 6.0);
                const double beta = best.beta + j * (h / 6.0);
                if (alpha <= 0.0 || beta > 1.0 || beta < alpha) continue;
                const double r = residual(alpha, beta);
                if (r < local.residual) local = {alpha, beta, r};
            }
        }
        best = local;
        h *= 0.5;
    }
    return best;
}

// Feasible (p, theta) lattice: p sweeps [0.5, 0.95]; for each p > 1/2 theta
// sweeps fractions of the feasibility limit, while the p = 1/2 fiber
// contributes its full range (the closed form applies only for p > 1/2
// there, so solver-comparison tests skip that fiber).
inline std::vector<std::pair<double, double>> feasibility_lattice(
    int n_p = 25, int n_theta = 21) {
    std::vector<std::pair<double, double>> points;
    for (int i = 0; i < n_p; ++i) {
        const double p = 0.5 + 0.45 * i / (n_p - 1);
        const double limit = max_theta(p);
        for (int j = 0; j < n_theta; ++j) {
            const double frac = 0.05 + 0.90 * j / (n_theta - 1);
            points.emplace_back(p, frac * limit);
        }
    }
    return points;
}

// ---------------------------------------------------------------------------
// Geometry helpers
// ---------------------------------------------------------------------------

// Rodrigues rotation of v about a unit axis.
inline BlochVector rotate(BlochVector v, BlochVector axis, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return c * v + s * cross(axis, v) + (1.0 - c) * dot(axis, v) * axis;
}

inline BlochVector random_unit(SplitMix64& rng) {
    const double z = 2.0 * rng.next_unit() - 1.0;
    const double phi = 2.0 * std::numbers::pi * rng.next_unit();
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
}

// Uniformly oriented pair of unit vectors subtending the given angle.
inline std::pair<BlochVector, BlochVector> random_pair_at_angle(
    double two_theta, SplitMix64& rng) {
    const BlochVector a = random_unit(rng);
    const BlochVector pick =
        std::abs(a.x) < 0.9 ? x_axis() : y_axis();
    const BlochVector e1 = normalized(pick - dot(pick, a) * a);
    const BlochVector e2 = cross(a, e1);
    const double psi = 2.0 * std::numbers::pi * rng.next_unit();
    const BlochVector b = std::cos(two_theta) * a +
                          std::sin(two_theta) * std::cos(psi) * e1 +
                          std::sin(two_theta) * std::sin(psi) * e2;
    return {a, normalized(b)};
}

// ---------------------------------------------------------------------------
// Error-bar oracles
// ---------------------------------------------------------------------------

// First-order propagated error recomputed by central finite differences.
inline double finite_difference_err(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x, const std::vector<double>& sigma) {
    double var = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double h = std::max(1e-7, 1e-7 * std::abs(x[i]));
        const double x0 = x[i];
        x[i] = x0 + h;
        const double fp = f(x);
        x[i] = x0 - h;
        const double fm = f(x);
        x[i] = x0;
        const double deriv = (fp - fm) / (2.0 * h);
        var += deriv * deriv * sigma[i] * sigma[i];
    }
    return std::sqrt(var);
}

inline std::uint64_t binomial_draw(std::uint64_t n, double q,
                                   SplitMix64& rng) {
    std::uint64_t k = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        if (rng.bernoulli(q)) ++k;
    }
    return k;
}

// Parametric bootstrap of the unsharpness-product error: resample all count
// records at their empirical rates and report the spread of the recomputed
// product.
inline double bootstrap_delta_product_err(const CountRecord& joint,
                                          const SharpCountRecord& sharp_a,
                                          const SharpCountRecord& sharp_b,
                                          double p, int resamples,
                                          RngSeed seed) {
    SplitMix64 rng(seed);
    const std::uint64_t nc = joint.c_plus + joint.c_minus;
    const std::uint64_t nd = joint.d_plus + joint.d_minus;
    const double qc = static_cast<double>(joint.c_plus) / nc;
    const double qd = static_cast<double>(joint.d_plus) / nd;
    const double qa =
        static_cast<double>(sharp_a.n_plus) / sharp_a.total();
    const double qb =
        static_cast<double>(sharp_b.n_plus) / sharp_b.total();

    std::vector<double> products;
    products.reserve(resamples);
    for (int i = 0; i < resamples; ++i) {
        const std::uint64_t kc = binomial_draw(nc, qc, rng);
        const std::uint64_t kd = binomial_draw(nd, qd, rng);
        const std::uint64_t ka = binomial_draw(sharp_a.total(), qa, rng);
        const std::uint64_t kb = binomial_draw(sharp_b.total(), qb, rng);
        const auto est = estimate_joint(
            expval_from_counts(static_cast<double>(kc),
                               static_cast<double>(nc - kc)),
            expval_from_counts(static_cast<double>(kd),
                               static_cast<double>(nd - kd)),
            expval_from_counts(static_cast<double>(ka),
                               static_cast<double>(sharp_a.total() - ka)),
            expval_from_counts(static_cast<double>(kb),
                               static_cast<double>(sharp_b.total() - kb)),
            p);
        products.push_back(est.delta_product.value);
    }
    double mean = 0.0;
    for (double v : products) mean += v;
    mean /= products.size();
    double ss = 0.0;
    for (double v : products) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / (products.size() - 1));
}

}  // namespace jointmeas::testing
