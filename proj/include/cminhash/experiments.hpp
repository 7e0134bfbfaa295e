#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cminhash/binary_vector.hpp"
#include "cminhash/hashing.hpp"

namespace cmh {

enum class Placement { Random, Structured };

struct SyntheticPairSpec {
    std::uint32_t dim = 0;
    std::uint32_t f = 0;
    std::uint32_t a = 0;
    Placement placement = Placement::Random;
    std::uint64_t seed = 0;
};

/// Pair with exactly (a, f) on dim coordinates. Structured layout is a O's, then
/// f - a CROSS's, then DASH's; Random shuffles that layout uniformly.
std::pair<BinaryVector, BinaryVector> synth_pair(const SyntheticPairSpec& spec);

/// n vectors on dim coordinates drawn around a few shared topic sets, so pairwise
/// similarities and densities both spread widely. Every vector is nonempty.
std::vector<BinaryVector> synth_dataset(std::uint32_t n, std::uint32_t dim, std::uint64_t seed);

struct McResultRow {
    std::uint32_t K = 0;
    Scheme scheme = Scheme::MinHash;
    double mean = 0.0;
    double bias2 = 0.0;
    double variance = 0.0;  // population variance over trials
    double mse = 0.0;
    std::uint64_t trials = 0;
    double stderr_mean = 0.0;
    double stderr_mse = 0.0;  // not part of the CSV schema
};

struct MaeResultRow {
    std::uint32_t K = 0;
    Scheme scheme = Scheme::MinHash;
    double mae = 0.0;
    std::uint32_t reps = 0;
};

struct CollisionEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

/// Monte Carlo frequency of h_k(v) = h_k(w) over independent trials.
CollisionEstimate mc_per_k_collision(const BinaryVector& v, const BinaryVector& w, std::uint32_t k, Scheme scheme,
                                     std::uint64_t trials, std::uint64_t seed, unsigned threads = 1);

/// Per K in the grid: mean, bias^2 against the exact J, variance and MSE of the
/// estimator. Each trial draws one permutation set and evaluates every K as a
/// prefix of the same K_max sketch.
std::vector<McResultRow> mc_bias_mse(const BinaryVector& v, const BinaryVector& w, std::span<const std::uint32_t> k_grid,
                                     Scheme scheme, std::uint64_t trials, std::uint64_t seed, unsigned threads = 1);

struct MaeRun {
    std::vector<MaeResultRow> rows;  // scheme-major, K ascending within a scheme
    std::uint64_t pairs = 0;
    std::uint64_t skipped_pairs = 0;  // pairs involving an empty vector
};

/// Mean |J-hat - J| over all unordered pairs, averaged over reps.
MaeRun mae_all_pairs(std::span<const BinaryVector> dataset, std::span<const std::uint32_t> k_grid,
                     std::span<const Scheme> schemes, std::uint32_t reps, std::uint64_t seed, unsigned threads = 1);

/// Seed for trial t of a scheme: pure function of (master, scheme, t).
std::uint64_t trial_seed(std::uint64_t master, Scheme scheme, std::uint64_t trial) noexcept;

}  // namespace cmh
