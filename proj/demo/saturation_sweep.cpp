// Minimal library walkthrough: synthesize the optimal joint measurement for
// a sweep of axis angles, simulate a short counting run for each, and print
// how close the estimated unsharpness product comes to the quantum limit.

#include <cstdio>

#include "jointmeas/jointmeas.hpp"

int main() {
    using namespace jointmeas;

    const double p = 0.670;
    const BlochVector a = z_axis();
    const BlochVector state = z_axis();

    std::printf("p = %.3f, 2theta_max = %.2f deg\n\n", p,
                2.0 * rad_to_deg(max_theta(p)));
    std::printf("%8s %10s %10s %12s %12s %10s\n", "theta", "alpha", "beta",
                "product", "sin^2(2t)", "pull");

    for (double theta_deg = 2.0; theta_deg <= 26.0; theta_deg += 4.0) {
        const BlochVector b = b_direction(a, theta_deg, -51.6);
        const JointDesign design = make_optimal_design(a, b, p);

        const auto seeds = split_runs(15000, 20, {2718, 0});
        CountRecord joint;
        SharpCountRecord sa, sb;
        for (const RngSeed& s : seeds) {
            joint += run_joint(state, design, 15000, s);
            sa += run_sharp(state, design.a, 15000, {s.master, s.stream + 1});
            sb += run_sharp(state, design.b, 15000, {s.master, s.stream + 2});
        }

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

        const double target =
            std::pow(std::sin(2.0 * deg_to_rad(theta_deg)), 2);
        const double pull =
            (est.delta_product.value - target) / est.delta_product.std_err;
        std::printf("%7.1f%1s %10.6f %10.6f %12.6f %12.6f %+9.2f\n",
                    theta_deg, "", design.alpha, design.beta,
                    est.delta_product.value, target, pull);
    }
    return 0;
}
