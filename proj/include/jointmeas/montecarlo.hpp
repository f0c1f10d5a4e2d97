// Seeded simulation of the heralded single-photon counting experiment.
//
// Each heralded shot selects the c branch with probability p (else the d
// branch) and draws a projective outcome from the Born probabilities of the
// selected direction. Losses and dark counts are not modeled: every shot
// produces exactly one count.
//
// Generator contract (fixed; golden files depend on it):
//   * SplitMix64 with increment 0x9E3779B97F4A7C15 and the standard
//     mix-finalizer (>>30 * 0xBF58476D1CE4E5B9, >>27 * 0x94D049BB133111EB,
//     >>31).
//   * A stream (master, stream) starts from state
//     mix(mix(master) + (stream + 1) * 0x9E3779B97F4A7C15).
//   * Uniform doubles in [0, 1) take the top 53 bits: (u64 >> 11) * 2^-53.
//   * run_joint draws two uniforms per shot (branch, then outcome);
//     run_sharp draws one.
// Identical (seed, stream, shot-count) triples therefore reproduce count
// records bit-for-bit on any platform.

#pragma once

#include <cstdint>
#include <vector>

#include "jointmeas/bloch.hpp"
#include "jointmeas/errors.hpp"
#include "jointmeas/povm.hpp"

namespace jointmeas {

struct RngSeed {
    std::uint64_t master = 0;
    std::uint64_t stream = 0;
};

class SplitMix64 {
  public:
    static constexpr std::uint64_t kIncrement = 0x9E3779B97F4A7C15ULL;

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    explicit SplitMix64(RngSeed seed)
        : state_(mix(mix(seed.master) + (seed.stream + 1) * kIncrement)) {}

    std::uint64_t next_u64() {
        state_ += kIncrement;
        return mix(state_);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return next_unit() < p; }

    // Poisson by summing exponential waiting times; O(mean) uniforms.
    std::uint64_t poisson(double mean) {
        std::uint64_t n = 0;
        double acc = 0.0;
        while (true) {
            double u = next_unit();
            if (u == 0.0) u = 0x1.0p-53;
            acc -= std::log(u);
            if (acc >= mean) return n;
            ++n;
        }
    }

  private:
    std::uint64_t state_;
};

// Fixed total per run is the default; Poisson totals are available for
// sensitivity studies.
enum class ShotModel { FixedTotal, PoissonTotal };

struct CountRecord {
    std::uint64_t c_plus = 0;
    std::uint64_t c_minus = 0;
    std::uint64_t d_plus = 0;
    std::uint64_t d_minus = 0;

    std::uint64_t total() const { return c_plus + c_minus + d_plus + d_minus; }

    CountRecord& operator+=(const CountRecord& r) {
        c_plus += r.c_plus;
        c_minus += r.c_minus;
        d_plus += r.d_plus;
        d_minus += r.d_minus;
        return *this;
    }
    friend bool operator==(const CountRecord&, const CountRecord&) = default;
};

struct SharpCountRecord {
    std::uint64_t n_plus = 0;
    std::uint64_t n_minus = 0;

    std::uint64_t total() const { return n_plus + n_minus; }

    SharpCountRecord& operator+=(const SharpCountRecord& r) {
        n_plus += r.n_plus;
        n_minus += r.n_minus;
        return *this;
    }
    friend bool operator==(const SharpCountRecord&,
                           const SharpCountRecord&) = default;
};

// Simulate `shots` heralded photons through the joint measurement. Single
// threaded per call; calls on distinct streams may run concurrently.
inline CountRecord run_joint(BlochVector state, const JointDesign& design,
                             std::uint64_t shots, RngSeed seed,
                             ShotModel model = ShotModel::FixedTotal) {
    require_pure(state, "state");
    design.validate();
    if (shots < 1) throw DomainError("shots must be >= 1");

    SplitMix64 rng(seed);
    const double q_c = born_probabilities(state, design.c).p_plus;
    const double q_d = born_probabilities(state, design.d).p_plus;
    const std::uint64_t n = model == ShotModel::PoissonTotal
                                ? rng.poisson(static_cast<double>(shots))
                                : shots;

    CountRecord rec;
    for (std::uint64_t i = 0; i < n; ++i) {
        if (rng.bernoulli(design.p)) {
            (rng.bernoulli(q_c) ? rec.c_plus : rec.c_minus) += 1;
        } else {
            (rng.bernoulli(q_d) ? rec.d_plus : rec.d_minus) += 1;
        }
    }
    return rec;
}

// Simulate a sharp (projective) measurement along `axis`.
inline SharpCountRecord run_sharp(BlochVector state, BlochVector axis,
                                  std::uint64_t shots, RngSeed seed,
                                  ShotModel model = ShotModel::FixedTotal) {
    require_pure(state, "state");
    if (shots < 1) throw DomainError("shots must be >= 1");

    SplitMix64 rng(seed);
    const double q = born_probabilities(state, axis).p_plus;
    const std::uint64_t n = model == ShotModel::PoissonTotal
                                ? rng.poisson(static_cast<double>(shots))
                                : shots;

    SharpCountRecord rec;
    for (std::uint64_t i = 0; i < n; ++i) {
        (rng.bernoulli(q) ? rec.n_plus : rec.n_minus) += 1;
    }
    return rec;
}

// Derive `runs` independent sub-streams from a master seed. Sub-stream i is
// {master, mix(stream + (i + 1) * increment)}; each element depends only on
// (seed, i), so the sequence is reproducible and order-independent. Run
// length does not enter the derivation.
inline std::vector<RngSeed> split_runs(std::uint64_t shots_per_run,
                                       std::uint64_t runs, RngSeed seed) {
    if (runs < 1) throw DomainError("runs must be >= 1");
    if (shots_per_run < 1) throw DomainError("shots_per_run must be >= 1");
    std::vector<RngSeed> seeds;
    seeds.reserve(runs);
    for (std::uint64_t i = 0; i < runs; ++i) {
        seeds.push_back(
            {seed.master,
             SplitMix64::mix(seed.stream + (i + 1) * SplitMix64::kIncrement)});
    }
    return seeds;
}

}  // namespace jointmeas
