#include <catch2/catch.hpp>

#include <cmath>
#include <vector>

#include "jointmeas/estimator.hpp"
#include "jointmeas/experiment.hpp"
#include "jointmeas/testing/reference.hpp"

using namespace jointmeas;

TEST_CASE("expval_from_counts basic values", "[estimator]") {
    const EstimateResult r = expval_from_counts(75, 25);
    REQUIRE(r.value == Approx(0.5));
    REQUIRE(r.std_err == Approx(2.0 * std::sqrt(0.75 * 0.25 / 100.0)));
    REQUIRE(r.std_err == Approx(0.0866).margin(5e-4));

    REQUIRE(expval_from_counts(50, 50).value == Approx(0.0).margin(1e-15));

    // Pseudo-counts pass through the same formulas.
    const EstimateResult pseudo = expval_from_counts(7.5, 2.5);
    REQUIRE(pseudo.value == Approx(0.5));

    REQUIRE_THROWS_AS(expval_from_counts(0, 0), EstimateError);
    REQUIRE_THROWS_AS(expval_from_counts(-1, 5), DomainError);
}

TEST_CASE("joint_expectations basic values", "[estimator]") {
    SECTION("aligned branches") {
        const auto j = joint_expectations({1.0, 0.0}, {1.0, 0.0}, 0.5);
        REQUIRE(j.a_j_bar.value == Approx(1.0));
        REQUIRE(j.b_j_bar.value == Approx(0.0).margin(1e-15));
    }
    SECTION("opposed branches") {
        const auto j = joint_expectations({1.0, 0.0}, {-1.0, 0.0}, 0.5);
        REQUIRE(j.a_j_bar.value == Approx(0.0).margin(1e-15));
        REQUIRE(j.b_j_bar.value == Approx(1.0));
    }
    SECTION("weighted combination") {
        const auto j = joint_expectations({0.9, 0.0}, {-0.5, 0.0}, 0.7);
        REQUIRE(j.a_j_bar.value == Approx(0.48));
        REQUIRE(j.b_j_bar.value == Approx(0.78));
    }
    SECTION("errors combine in quadrature") {
        const auto j = joint_expectations({0.9, 0.01}, {-0.5, 0.02}, 0.7);
        const double expected = std::sqrt(0.49 * 1e-4 + 0.09 * 4e-4);
        REQUIRE(j.a_j_bar.std_err == Approx(expected));
        REQUIRE(j.b_j_bar.std_err == Approx(expected));
    }
    SECTION("domain checks") {
        REQUIRE_THROWS_AS(joint_expectations({1.2, 0.0}, {0.0, 0.0}, 0.5),
                          DomainError);
        REQUIRE_THROWS_AS(joint_expectations({0.5, 0.0}, {0.0, 0.0}, 1.0),
                          DomainError);
    }
}

TEST_CASE("sharpness_estimates basic values", "[estimator]") {
    SECTION("eigenstate denominator") {
        const auto s = sharpness_estimates({0.4, 0.0}, {0.3, 0.0}, {1.0, 0.0},
                                           {1.0, 0.0});
        REQUIRE(s.alpha_exp.value == Approx(0.4));
        REQUIRE(s.beta_exp.value == Approx(0.3));
    }
    SECTION("identity recovery") {
        const double beta = 0.83;
        const double cos2t = std::cos(0.4);
        const auto s = sharpness_estimates({beta * cos2t, 0.0},
                                           {beta * cos2t, 0.0},
                                           {cos2t, 0.0}, {cos2t, 0.0});
        REQUIRE(s.beta_exp.value == Approx(beta).margin(1e-12));
    }
    SECTION("first-order ratio propagation") {
        const auto s = sharpness_estimates({0.40, 0.01}, {0.40, 0.01},
                                           {0.98, 0.005}, {0.98, 0.005});
        REQUIRE(s.alpha_exp.value == Approx(0.4081632653).margin(1e-9));
        REQUIRE(s.alpha_exp.std_err == Approx(0.0104).margin(2e-4));

        const double fd = testing::finite_difference_err(
            [](const std::vector<double>& x) { return x[0] / x[1]; },
            {0.40, 0.98}, {0.01, 0.005});
        REQUIRE(s.alpha_exp.std_err == Approx(fd).epsilon(1e-5));
    }
    SECTION("guard threshold") {
        REQUIRE_THROWS_AS(sharpness_estimates({0.01, 0.0}, {0.3, 0.0},
                                              {0.04, 0.0}, {1.0, 0.0}),
                          IllConditionedRatioError);
    }
}

TEST_CASE("joint_variance basic values", "[estimator]") {
    SECTION("sharp limit leaves the intrinsic variance") {
        REQUIRE(joint_variance(1.0, 0.3) == Approx(1.0 - 0.09));
    }
    SECTION("unsharp eigenstate") {
        REQUIRE(joint_variance(1.0 / std::sqrt(2.0), 1.0) == Approx(1.0));
    }
    SECTION("sharp eigenstate") {
        REQUIRE(joint_variance(1.0, 1.0) == Approx(0.0).margin(1e-15));
    }
    SECTION("infinite variance signal") {
        REQUIRE(std::isinf(joint_variance(0.0, 0.5)));
    }
    SECTION("domain checks") {
        REQUIRE_THROWS_AS(joint_variance(1.2, 0.5), DomainError);
        REQUIRE_THROWS_AS(joint_variance(0.5, 1.5), DomainError);
    }
}

TEST_CASE("joint variance algebraic identity", "[estimator]") {
    SplitMix64 rng({301, 0});
    for (int i = 0; i < 300; ++i) {
        const double alpha = 0.05 + 0.95 * rng.next_unit();
        const double e = 2.0 * rng.next_unit() - 1.0;
        const double v = joint_variance(alpha, e);
        REQUIRE(v * alpha * alpha ==
                Approx(1.0 - alpha * alpha * e * e).margin(1e-12));
    }
}

TEST_CASE("delta_product basic values", "[estimator]") {
    SECTION("exact symmetric point") {
        const double s = 1.0 / std::sqrt(2.0);
        const EstimateResult r = delta_product({s, 0.0}, {s, 0.0});
        REQUIRE(r.value == Approx(1.0));
        REQUIRE(r.std_err == Approx(0.0).margin(1e-15));
    }
    SECTION("sharp marginal") {
        REQUIRE(delta_product({1.0, 0.0}, {0.5, 0.0}).value ==
                Approx(0.0).margin(1e-15));
    }
    SECTION("propagated error against finite differences") {
        const EstimateResult r = delta_product({0.95, 0.01}, {0.90, 0.01});
        REQUIRE(r.value == Approx(0.0253411).margin(1e-6));

        const double fd = testing::finite_difference_err(
            [](const std::vector<double>& x) {
                const double ga = (1.0 - x[0] * x[0]) / (x[0] * x[0]);
                const double gb = (1.0 - x[1] * x[1]) / (x[1] * x[1]);
                return ga * gb;
            },
            {0.95, 0.90}, {0.01, 0.01});
        REQUIRE(r.std_err == Approx(fd).epsilon(1e-4));
    }
    SECTION("infinite signal at vanishing sharpness") {
        REQUIRE(std::isinf(delta_product({0.0, 0.0}, {0.5, 0.0}).value));
        REQUIRE(std::isinf(delta_product({-0.1, 0.0}, {0.5, 0.0}).value));
    }
    SECTION("noisy estimates above one give a negative product") {
        REQUIRE(delta_product({1.02, 0.0}, {0.9, 0.0}).value < 0.0);
    }
}

TEST_CASE("delta_product is strictly decreasing in each argument",
          "[estimator]") {
    for (double beta : {0.3, 0.6, 0.9}) {
        double prev = std::numeric_limits<double>::infinity();
        for (double alpha = 0.05; alpha <= 1.0; alpha += 0.05) {
            const double v = delta_product({alpha, 0.0}, {beta, 0.0}).value;
            REQUIRE(v < prev);
            prev = v;
        }
    }
    for (double alpha : {0.3, 0.6, 0.9}) {
        double prev = std::numeric_limits<double>::infinity();
        for (double beta = 0.05; beta <= 1.0; beta += 0.05) {
            const double v = delta_product({alpha, 0.0}, {beta, 0.0}).value;
            REQUIRE(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("exact pseudo-counts reproduce the design sharpnesses",
          "[estimator]") {
    const BlochVector b = b_direction(z_axis(), 13.0, -51.6);
    const JointDesign design = make_optimal_design(z_axis(), b, 0.67);
    const BlochVector state = z_axis();

    const double n = 1e6;
    const double qc = born_probabilities(state, design.c).p_plus;
    const double qd = born_probabilities(state, design.d).p_plus;
    const double qa = born_probabilities(state, design.a).p_plus;
    const double qb = born_probabilities(state, design.b).p_plus;
    const double nc = n * design.p;
    const double nd = n * (1.0 - design.p);

    const JointEstimate est = estimate_joint(
        expval_from_counts(nc * qc, nc * (1.0 - qc)),
        expval_from_counts(nd * qd, nd * (1.0 - qd)),
        expval_from_counts(n * qa, n * (1.0 - qa)),
        expval_from_counts(n * qb, n * (1.0 - qb)), design.p);

    REQUIRE(est.alpha_exp.value == Approx(design.alpha).margin(1e-12));
    REQUIRE(est.beta_exp.value == Approx(design.beta).margin(1e-12));
    REQUIRE(est.delta_product.value ==
            Approx(unsharpness_product(design.alpha, design.beta))
                .margin(1e-12));
    REQUIRE(est.a_j_bar.value ==
            Approx(design.alpha * dot(design.a, state)).margin(1e-12));
    REQUIRE(est.b_j_bar.value ==
            Approx(design.beta * dot(design.b, state)).margin(1e-12));
}

TEST_CASE("propagated product error matches the bootstrap", "[estimator]") {
    const BlochVector b = b_direction(z_axis(), 13.0, 30.0);
    const JointDesign design = make_optimal_design(z_axis(), b, 0.67);

    const std::uint64_t shots = 100000;
    const CountRecord joint = run_joint(z_axis(), design, shots, {404, 0});
    const SharpCountRecord sa = run_sharp(z_axis(), design.a, shots, {404, 1});
    const SharpCountRecord sb = run_sharp(z_axis(), design.b, shots, {404, 2});

    const JointEstimate est = estimate_joint(
        expval_from_counts(static_cast<double>(joint.c_plus),
                           static_cast<double>(joint.c_minus)),
        expval_from_counts(static_cast<double>(joint.d_plus),
                           static_cast<double>(joint.d_minus)),
        expval_from_counts(static_cast<double>(sa.n_plus),
                           static_cast<double>(sa.n_minus)),
        expval_from_counts(static_cast<double>(sb.n_plus),
                           static_cast<double>(sb.n_minus)),
        design.p);

    const double boot = testing::bootstrap_delta_product_err(
        joint, sa, sb, design.p, 400, {505, 0});
    REQUIRE(est.delta_product.std_err == Approx(boot).epsilon(0.2));
}

TEST_CASE("variance estimates propagate both inputs", "[estimator]") {
    const EstimateResult alpha{0.7, 0.01};
    const EstimateResult sharp{0.9, 0.004};
    const JointEstimate est = estimate_joint(
        {0.9, 0.0}, {0.1, 0.0}, {1.0, 0.0}, {1.0, 0.0}, 0.7);
    REQUIRE(std::isfinite(est.var_a_joint.value));

    // Cross-check the chain's variance error against finite differences on
    // the closed formula.
    const double fd = testing::finite_difference_err(
        [](const std::vector<double>& x) {
            const double a2 = x[0] * x[0];
            return (1.0 - a2) / a2 + 1.0 - x[1] * x[1];
        },
        {alpha.value, sharp.value}, {alpha.std_err, sharp.std_err});
    const EstimateResult direct =
        detail::joint_variance_estimate(alpha, sharp);
    REQUIRE(direct.std_err == Approx(fd).epsilon(1e-5));
    REQUIRE(direct.value ==
            Approx(joint_variance(alpha.value, sharp.value)).margin(1e-15));
}
