// Two-outcome qubit measurement operators, the sharpness tradeoff relation
//
//     |alpha a + beta b| + |alpha a - beta b| <= 2
//     <=>  (1-alpha^2)(1-beta^2)/(alpha^2 beta^2) >= sin^2(2 theta),
//
// and synthesis of the optimal joint measurement of a.sigma and b.sigma:
// a projective measurement along c with probability p, else along d, with
//
//     c = (alpha a + beta b)/(2p),   d = (alpha a - beta b)/(2(1-p)),
//     p = |alpha a + beta b|/2,    1-p = |alpha a - beta b|/2.
//
// Outcome assignment: C=+1 -> (A,B)=(+1,+1), C=-1 -> (-1,-1),
//                     D=+1 -> (+1,-1),       D=-1 -> (-1,+1).

#pragma once

#include <array>
#include <cmath>
#include <iostream>
#include <limits>
#include <optional>
#include <utility>

#include "jointmeas/bloch.hpp"
#include "jointmeas/errors.hpp"

namespace jointmeas {

// Tolerance for saturation checks on synthesized direction norms.
inline constexpr double kSaturationTol = 1e-9;

// ---------------------------------------------------------------------------
// Effect types
// ---------------------------------------------------------------------------

// General dichotomic qubit measurement:
//   Pi_+ = gamma_plus * 1 + gamma_k * k.sigma,
//   Pi_- = gamma_minus * 1 - gamma_k * k.sigma.
// Valid when gamma_plus + gamma_minus = 1 (completeness), gamma_k >= 0, and
// gamma_plus, gamma_minus >= gamma_k (positivity).
struct DichotomicEffectPair {
    double gamma_plus = 0.5;
    double gamma_minus = 0.5;
    double gamma_k = 0.0;
    BlochVector k;

    Matrix2c plus_matrix() const {
        return gamma_plus * identity2() + gamma_k * pauli_dot(k);
    }
    Matrix2c minus_matrix() const {
        return gamma_minus * identity2() + (-gamma_k) * pauli_dot(k);
    }
};

struct EffectValidity {
    bool completeness_ok;       // gamma_plus + gamma_minus = 1 within 1e-12
    bool positivity_ok;         // gamma_plus, gamma_minus >= gamma_k - 1e-12
    bool sharpness_weight_ok;   // gamma_k >= 0
    bool oracle_positive_ok;    // both effect matrices PSD (eigenvalue test)
    bool oracle_complete_ok;    // effect matrices sum to the identity

    bool ok() const {
        return completeness_ok && positivity_ok && sharpness_weight_ok &&
               oracle_positive_ok && oracle_complete_ok;
    }
};

// Report which structural invariants hold, cross-checked against the 2x2
// matrix representation.
inline EffectValidity validate_effect(const DichotomicEffectPair& e) {
    EffectValidity v{};
    v.completeness_ok = std::abs(e.gamma_plus + e.gamma_minus - 1.0) <= 1e-12;
    v.positivity_ok = e.gamma_plus >= e.gamma_k - 1e-12 &&
                      e.gamma_minus >= e.gamma_k - 1e-12;
    v.sharpness_weight_ok = e.gamma_k >= 0.0;

    const Matrix2c plus = e.plus_matrix();
    const Matrix2c minus = e.minus_matrix();
    v.oracle_positive_ok = hermitian_eigenvalues(plus)[0] >= -1e-12 &&
                           hermitian_eigenvalues(minus)[0] >= -1e-12;
    v.oracle_complete_ok = max_abs_diff(plus + minus, identity2()) <= 1e-12;
    return v;
}

// Unsharp measurement of axis.sigma: Pi_pm = (1 pm sharpness * axis.sigma)/2.
// sharpness = 1 is projective, sharpness = 0 a random guess.
struct MarginalPair {
    double sharpness;
    BlochVector axis;

    MarginalPair(double sharpness_, BlochVector axis_)
        : sharpness(sharpness_), axis(axis_) {
        if (!(sharpness >= 0.0 && sharpness <= 1.0)) {
            throw DomainError("sharpness must lie in [0, 1]");
        }
        require_unit(axis, "axis");
    }

    DichotomicEffectPair as_effect_pair() const {
        return {0.5, 0.5, sharpness / 2.0, axis};
    }
    Matrix2c plus_matrix() const { return as_effect_pair().plus_matrix(); }
    Matrix2c minus_matrix() const { return as_effect_pair().minus_matrix(); }
};

// ---------------------------------------------------------------------------
// Tradeoff relation
// ---------------------------------------------------------------------------

// Left-hand side |alpha a + beta b| + |alpha a - beta b| of the tradeoff
// relation. A joint measurement with these marginal sharpnesses exists iff
// the value is <= 2.
inline double tradeoff_lhs(double alpha, BlochVector a, double beta,
                           BlochVector b) {
    if (!(alpha >= 0.0 && alpha <= 1.0) || !(beta >= 0.0 && beta <= 1.0)) {
        throw DomainError("sharpnesses must lie in [0, 1]");
    }
    require_unit(a, "a");
    require_unit(b, "b");
    return norm(alpha * a + beta * b) + norm(alpha * a - beta * b);
}

// Product of unsharpnesses (1-alpha^2)(1-beta^2)/(alpha^2 beta^2). Bounded
// below by sin^2(2 theta). Returns +infinity when either sharpness is zero.
inline double unsharpness_product(double alpha, double beta) {
    if (!(alpha >= 0.0 && alpha <= 1.0) || !(beta >= 0.0 && beta <= 1.0)) {
        throw DomainError("sharpnesses must lie in [0, 1]");
    }
    if (alpha == 0.0 || beta == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double a2 = alpha * alpha;
    const double b2 = beta * beta;
    return (1.0 - a2) * (1.0 - b2) / (a2 * b2);
}

// ---------------------------------------------------------------------------
// Optimal sharpness solver
// ---------------------------------------------------------------------------

// Largest half-angle theta between observable axes reachable with selection
// probability p; at the boundary the solver's discriminant vanishes.
inline double max_theta(double p) {
    if (!(p >= 0.5 && p <= 1.0)) {
        throw DomainError("selection probability must lie in [1/2, 1]");
    }
    const double u = 2.0 * p * (p - 1.0) + 1.0;  // (alpha^2 + beta^2)/2
    return 0.5 * std::acos(std::min(std::abs(1.0 - 2.0 * p) / u, 1.0));
}

struct OptimalSharpness {
    double alpha;
    double beta;
    bool closed_form;  // false when the numeric fallback produced the value
};

namespace detail {

// Fallback 1-D bisection for beta: with s = alpha^2 + beta^2 and
// q = alpha*beta fixed by the norm constraints, solve (q/b)^2 + b^2 = s for
// b in [sqrt(s/2), min(1, sqrt(s))].
inline double solve_beta_bisection(double s, double q) {
    // On [sqrt(s/2), min(1, sqrt(s))] the excess is increasing and brackets
    // the larger root.
    double lo = std::sqrt(s / 2.0);
    double hi = std::min(1.0, std::sqrt(s));
    auto excess = [&](double b) { return (q / b) * (q / b) + b * b - s; };
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (excess(mid) > 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

// Optimal sharpnesses for a joint measurement at selection probability p of
// observables whose axes subtend angle 2*theta. The result saturates the
// tradeoff bound and satisfies the direction norm constraints; beta >= alpha
// (the ordering realized by the unique admissible sign branch of the closed
// form).
inline OptimalSharpness solve_optimal_sharpness(double p, double theta) {
    if (!(p >= 0.5 && p < 1.0)) {
        throw DomainError("selection probability must lie in [1/2, 1)");
    }
    if (!(theta >= 0.0)) {
        throw DomainError("theta must be non-negative");
    }
    if (theta > max_theta(p) + 1e-12) {
        throw InfeasibleAngleError(
            "theta exceeds the feasible range for this selection probability");
    }

    // At p = 1/2 the closed form degenerates to 0/0; the norm constraints
    // then admit a one-parameter family and the symmetric member
    // alpha = beta = 1/sqrt(1 + sin(2 theta)) is returned.
    if (p == 0.5) {
        const double s = 1.0 / std::sqrt(1.0 + std::sin(2.0 * theta));
        return {s, s, true};
    }

    const double u = 2.0 * p * (p - 1.0) + 1.0;
    const double cos2t = std::cos(2.0 * theta);
    const double sec2 = 1.0 / (cos2t * cos2t);
    const double two_p_minus_1 = 2.0 * p - 1.0;

    // Enumerate the four sign combinations of the closed form and keep the
    // admissible ones: beta real in (0, 1] and alpha in (0, 1].
    std::optional<OptimalSharpness> found;
    int n_admissible = 0;
    for (const double inner : {+1.0, -1.0}) {
        const double radicand =
            inner * u * u - two_p_minus_1 * two_p_minus_1 * sec2;
        // A feasible angle can leave the radicand a hair negative at the
        // boundary where it vanishes.
        if (radicand < -1e-9) continue;
        const double root = std::sqrt(std::max(radicand, 0.0));
        for (const double outer : {+1.0, -1.0}) {
            const double beta_sq = root + u;
            if (beta_sq < 0.0) continue;
            double beta = outer * std::sqrt(beta_sq);
            if (beta > 1.0 && beta <= 1.0 + 1e-12) beta = 1.0;
            if (!(beta > 0.0 && beta <= 1.0)) continue;
            double alpha = two_p_minus_1 / (beta * cos2t);
            if (alpha > 1.0 && alpha <= 1.0 + 1e-12) alpha = 1.0;
            if (!(alpha > 0.0 && alpha <= 1.0)) continue;
            ++n_admissible;
            found = OptimalSharpness{alpha, beta, true};
        }
    }
    if (n_admissible == 1) return *found;

    std::cerr << "jointmeas: closed-form sharpness solver found "
              << n_admissible << " admissible branches at p=" << p
              << " theta=" << theta << "; using numeric fallback\n";
    const double s = 2.0 * u;
    const double beta = detail::solve_beta_bisection(s, two_p_minus_1 / cos2t);
    return {two_p_minus_1 / (beta * cos2t), beta, false};
}

// ---------------------------------------------------------------------------
// Direction synthesis
// ---------------------------------------------------------------------------

struct DirectionSynthesis {
    BlochVector c;
    BlochVector d;
    double p;        // probability of the c branch, always >= 1/2
    bool b_flipped;  // true when b was mapped to -b so that p >= 1/2
};

// Projective directions and selection probability realizing the marginal
// sharpnesses (alpha, beta) along axes (a, b). Requires saturation of the
// tradeoff bound; otherwise the directions would not come out unit length.
//
// When alpha a = beta b the difference direction vanishes (a single
// projective measurement of a); that case throws unless
// degenerate_as_projective is set, which returns d = -a with p = 1.
inline DirectionSynthesis construct_directions(
    double alpha, double beta, BlochVector a, BlochVector b,
    bool degenerate_as_projective = false) {
    const double lhs = tradeoff_lhs(alpha, a, beta, b);  // validates inputs
    if (std::abs(lhs - 2.0) > kSaturationTol) {
        throw SynthesisError(
            "sharpnesses do not saturate the tradeoff bound; directions "
            "would not be unit vectors",
            lhs - 2.0);
    }

    BlochVector sum = alpha * a + beta * b;
    BlochVector diff = alpha * a - beta * b;
    bool flipped = false;
    if (norm(sum) < norm(diff)) {
        // Convention: the c branch is the more likely one. Flipping b swaps
        // the roles of sum and difference and negates the B outcome labels.
        flipped = true;
        std::swap(sum, diff);
    }

    const double p = norm(sum) / 2.0;
    const double q = norm(diff) / 2.0;
    if (q <= 1e-12) {
        if (!degenerate_as_projective) {
            throw DegenerateDirectionError(
                "alpha a = beta b: the difference direction vanishes");
        }
        return {normalized(sum), -normalized(sum), 1.0, flipped};
    }
    return {sum / (2.0 * p), diff / (2.0 * q), p, flipped};
}

// ---------------------------------------------------------------------------
// Joint-measurement designs
// ---------------------------------------------------------------------------

// A complete optimal joint measurement. b is the effective axis measured:
// if construct_directions had to flip b, the caller holds the flipped axis
// here and reinterprets B outcomes accordingly.
struct JointDesign {
    BlochVector a;
    BlochVector b;
    double alpha = 0.0;
    double beta = 0.0;
    BlochVector c;
    BlochVector d;
    double p = 0.0;

    void validate() const {
        require_unit(a, "a");
        require_unit(b, "b");
        if (!(alpha >= 0.0 && alpha <= 1.0) || !(beta >= 0.0 && beta <= 1.0)) {
            throw InvalidDesignError("sharpnesses must lie in [0, 1]");
        }
        if (!(p > 0.0 && p <= 1.0)) {
            throw InvalidDesignError(
                "selection probability must lie in (0, 1]");
        }
        if (!is_unit(c) || !is_unit(d)) {
            throw InvalidDesignError("c and d must be unit directions");
        }
        const BlochVector sum = alpha * a + beta * b;
        const BlochVector diff = alpha * a - beta * b;
        if (std::abs(norm(sum) / 2.0 - p) > kSaturationTol ||
            std::abs(norm(diff) / 2.0 - (1.0 - p)) > kSaturationTol) {
            throw InvalidDesignError(
                "selection probability inconsistent with sharpness vectors");
        }
        if (p == 1.0) {
            // Degenerate convention: a single projective measurement with
            // d fixed to -c.
            if (norm(c - sum / 2.0) > kSaturationTol ||
                norm(d + c) > kSaturationTol) {
                throw InvalidDesignError(
                    "degenerate design must have c = alpha a and d = -c");
            }
        } else if (norm(c - sum / (2.0 * p)) > kSaturationTol ||
                   norm(d - diff / (2.0 * (1.0 - p))) > kSaturationTol) {
            throw InvalidDesignError(
                "projective directions inconsistent with sharpness vectors");
        }
        if (tradeoff_lhs(alpha, a, beta, b) > 2.0 + kSaturationTol) {
            throw InvalidDesignError("tradeoff bound violated");
        }
    }

    bool is_valid() const {
        try {
            validate();
            return true;
        } catch (const std::exception&) {
            return false;
        }
    }
};

// Solve for the optimal sharpnesses of the pair (a, b) at selection
// probability p and synthesize the measurement directions.
inline JointDesign make_optimal_design(BlochVector a, BlochVector b, double p) {
    const double theta = angle_between(a, b) / 2.0;
    const OptimalSharpness s = solve_optimal_sharpness(p, theta);
    const DirectionSynthesis dirs = construct_directions(s.alpha, s.beta, a, b);
    const BlochVector b_eff = dirs.b_flipped ? -b : b;
    return {a, b_eff, s.alpha, s.beta, dirs.c, dirs.d, dirs.p};
}

// One effect of the four-outcome joint measurement: the projector of one
// branch scaled by that branch's selection probability.
struct JointEffect {
    int a_outcome;  // +1 or -1
    int b_outcome;  // +1 or -1
    double weight;
    BlochVector axis;
    int sign;  // which projector of the branch

    Matrix2c matrix() const {
        return (weight / 2.0) *
               (identity2() + static_cast<double>(sign) * pauli_dot(axis));
    }
};

struct FourOutcomeJointPovm {
    // Order: (+1,+1), (-1,-1), (+1,-1), (-1,+1).
    std::array<JointEffect, 4> effects;

    Matrix2c a_marginal_matrix(int a_outcome) const {
        Matrix2c m{0.0, 0.0, 0.0, 0.0};
        for (const auto& e : effects) {
            if (e.a_outcome == a_outcome) m = m + e.matrix();
        }
        return m;
    }
    Matrix2c b_marginal_matrix(int b_outcome) const {
        Matrix2c m{0.0, 0.0, 0.0, 0.0};
        for (const auto& e : effects) {
            if (e.b_outcome == b_outcome) m = m + e.matrix();
        }
        return m;
    }

    // Born-rule probabilities of the four outcomes, in effect order.
    std::array<double, 4> outcome_probabilities(BlochVector state) const {
        std::array<double, 4> probs{};
        for (std::size_t i = 0; i < effects.size(); ++i) {
            const auto& e = effects[i];
            const BornProbabilities born = born_probabilities(state, e.axis);
            probs[i] = e.weight * (e.sign > 0 ? born.p_plus : born.p_minus);
        }
        return probs;
    }
};

// Effects {p Pi^c_pm, (1-p) Pi^d_pm} with the outcome labels of the
// assignment rule. The A marginal reproduces (1 pm alpha a.sigma)/2 and the
// B marginal (1 pm beta b.sigma)/2.
inline FourOutcomeJointPovm assemble_joint_povm(const JointDesign& design) {
    design.validate();
    const double p = design.p;
    return {{{{+1, +1, p, design.c, +1},
              {-1, -1, p, design.c, -1},
              {+1, -1, 1.0 - p, design.d, +1},
              {-1, +1, 1.0 - p, design.d, -1}}}};
}

}  // namespace jointmeas
