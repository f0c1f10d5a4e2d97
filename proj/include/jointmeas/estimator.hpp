// Turns count records into expectation values, joint-measurement
// expectations, experimental sharpnesses, and variances, each with a
// first-order (delta-method) standard error from binomial count statistics.
//
// Counts are taken as reals so that exact Born weights can be fed through
// the same chain as pseudo-counts.

#pragma once

#include <cmath>
#include <limits>

#include "jointmeas/errors.hpp"

namespace jointmeas {

// Sharp expectations smaller than this in magnitude make the sharpness
// ratio noise-dominated and are rejected.
inline constexpr double kSharpDenominatorGuard = 0.05;

struct EstimateResult {
    double value = 0.0;
    double std_err = 0.0;
};

// (n+ - n-)/(n+ + n-) with std_err = 2 sqrt(q(1-q)/N), q = n+/N.
inline EstimateResult expval_from_counts(double n_plus, double n_minus) {
    if (n_plus < 0.0 || n_minus < 0.0) {
        throw DomainError("counts must be non-negative");
    }
    const double total = n_plus + n_minus;
    if (!(total > 0.0)) {
        throw EstimateError("expectation value undefined for zero counts");
    }
    const double q = n_plus / total;
    return {(n_plus - n_minus) / total,
            2.0 * std::sqrt(std::max(q * (1.0 - q), 0.0) / total)};
}

struct JointExpectations {
    EstimateResult a_j_bar;
    EstimateResult b_j_bar;
};

// A_j = p<C> + (1-p)<D>, B_j = p<C> - (1-p)<D>; errors in quadrature with
// weights p and 1-p.
inline JointExpectations joint_expectations(EstimateResult c_est,
                                            EstimateResult d_est, double p) {
    if (std::abs(c_est.value) > 1.0 || std::abs(d_est.value) > 1.0) {
        throw DomainError("expectation values must lie in [-1, 1]");
    }
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("selection probability must lie in (0, 1)");
    }
    const double q = 1.0 - p;
    const double err = std::sqrt(p * p * c_est.std_err * c_est.std_err +
                                 q * q * d_est.std_err * d_est.std_err);
    return {{p * c_est.value + q * d_est.value, err},
            {p * c_est.value - q * d_est.value, err}};
}

struct SharpnessEstimates {
    EstimateResult alpha_exp;
    EstimateResult beta_exp;
};

namespace detail {

inline EstimateResult ratio_estimate(EstimateResult num, EstimateResult den) {
    if (std::abs(den.value) < kSharpDenominatorGuard) {
        throw IllConditionedRatioError(
            "sharp expectation too small for a meaningful sharpness ratio");
    }
    const double value = num.value / den.value;
    const double d2 = den.value * den.value;
    const double err =
        std::sqrt(num.std_err * num.std_err / d2 +
                  value * value * den.std_err * den.std_err / d2);
    return {value, err};
}

}  // namespace detail

// Experimental sharpnesses alpha = A_j / <a.sigma>, beta = B_j / <b.sigma>,
// with first-order ratio error propagation. Noisy inputs may produce
// estimates above 1.
inline SharpnessEstimates sharpness_estimates(EstimateResult a_j_bar,
                                              EstimateResult b_j_bar,
                                              EstimateResult sharp_a,
                                              EstimateResult sharp_b) {
    return {detail::ratio_estimate(a_j_bar, sharp_a),
            detail::ratio_estimate(b_j_bar, sharp_b)};
}

// Total variance of the joint measurement scaled by 1/alpha^2:
// (1-alpha^2)/alpha^2 + 1 - expectation^2. The first term is the
// unsharpness penalty, the second the intrinsic variance.
inline double joint_variance(double alpha, double sharp_expectation) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw DomainError("sharpness must lie in [0, 1]");
    }
    if (std::abs(sharp_expectation) > 1.0) {
        throw DomainError("expectation must lie in [-1, 1]");
    }
    if (alpha == 0.0) return std::numeric_limits<double>::infinity();
    const double a2 = alpha * alpha;
    return (1.0 - a2) / a2 + 1.0 - sharp_expectation * sharp_expectation;
}

// Experimental unsharpness product (1-a^2)(1-b^2)/(a^2 b^2) with errors
// propagated through both partial derivatives. Estimates above 1 are
// accepted (the product then goes negative); non-positive sharpness signals
// an infinite product.
inline EstimateResult delta_product(EstimateResult alpha_exp,
                                    EstimateResult beta_exp) {
    const double a = alpha_exp.value;
    const double b = beta_exp.value;
    if (a <= 0.0 || b <= 0.0) {
        const double inf = std::numeric_limits<double>::infinity();
        return {inf, inf};
    }
    const double ga = (1.0 - a * a) / (a * a);
    const double gb = (1.0 - b * b) / (b * b);
    const double df_da = -2.0 / (a * a * a) * gb;
    const double df_db = -2.0 / (b * b * b) * ga;
    return {ga * gb,
            std::sqrt(df_da * df_da * alpha_exp.std_err * alpha_exp.std_err +
                      df_db * df_db * beta_exp.std_err * beta_exp.std_err)};
}

// Product of two estimates with independent first-order errors.
inline EstimateResult product_estimate(EstimateResult x, EstimateResult y) {
    return {x.value * y.value,
            std::sqrt(y.value * y.value * x.std_err * x.std_err +
                      x.value * x.value * y.std_err * y.std_err)};
}

// 1 - <X>^2, the intrinsic variance of a sharp +-1 measurement.
inline EstimateResult intrinsic_variance(EstimateResult expectation) {
    return {1.0 - expectation.value * expectation.value,
            2.0 * std::abs(expectation.value) * expectation.std_err};
}

struct JointEstimate {
    EstimateResult a_j_bar;
    EstimateResult b_j_bar;
    EstimateResult alpha_exp;
    EstimateResult beta_exp;
    EstimateResult delta_product;
    EstimateResult var_a_joint;
    EstimateResult var_b_joint;
};

namespace detail {

// Same formula as joint_variance but tolerant of noisy sharpness estimates
// above 1, which the experimental chain can legitimately produce.
inline EstimateResult joint_variance_estimate(EstimateResult alpha,
                                              EstimateResult sharp) {
    const double a = alpha.value;
    if (a <= 0.0) {
        const double inf = std::numeric_limits<double>::infinity();
        return {inf, inf};
    }
    const double a2 = a * a;
    const double value =
        (1.0 - a2) / a2 + 1.0 - sharp.value * sharp.value;
    const double dv_da = -2.0 / (a2 * a);
    const double dv_de = -2.0 * sharp.value;
    return {value, std::sqrt(dv_da * dv_da * alpha.std_err * alpha.std_err +
                             dv_de * dv_de * sharp.std_err * sharp.std_err)};
}

}  // namespace detail

// Full estimation chain from branch and sharp expectation estimates.
inline JointEstimate estimate_joint(EstimateResult c_est, EstimateResult d_est,
                                    EstimateResult sharp_a,
                                    EstimateResult sharp_b, double p) {
    JointEstimate out{};
    const JointExpectations joint = joint_expectations(c_est, d_est, p);
    out.a_j_bar = joint.a_j_bar;
    out.b_j_bar = joint.b_j_bar;
    const SharpnessEstimates sharp =
        sharpness_estimates(joint.a_j_bar, joint.b_j_bar, sharp_a, sharp_b);
    out.alpha_exp = sharp.alpha_exp;
    out.beta_exp = sharp.beta_exp;
    out.delta_product = delta_product(sharp.alpha_exp, sharp.beta_exp);
    out.var_a_joint = detail::joint_variance_estimate(sharp.alpha_exp, sharp_a);
    out.var_b_joint = detail::joint_variance_estimate(sharp.beta_exp, sharp_b);
    return out;
}

}  // namespace jointmeas
