#pragma once

#include <cstdint>

#include "cminhash/binary_vector.hpp"
#include "cminhash/hashing.hpp"

namespace cmh {

/// Exact pair statistics. J is kept as the rational a/f; `jaccard()` is the float view.
struct PairStats {
    std::uint32_t a = 0;  // |v ∩ w|
    std::uint32_t f = 0;  // |v ∪ w|, >= 1
    std::uint32_t dim = 0;

    double jaccard() const noexcept { return static_cast<double>(a) / static_cast<double>(f); }
    friend bool operator==(const PairStats&, const PairStats&) = default;
};

/// Throws UndefinedSimilarity when both vectors are empty.
PairStats exact_pair_stats(const BinaryVector& v, const BinaryVector& w);

/// Fraction of slots with equal hash values. Sketches must agree on scheme, K, dim and seed.
double estimate_jaccard(const Sketch& sv, const Sketch& sw);

/// J(1-J)/K.
double minhash_theoretical_variance(double jaccard, std::uint32_t K);

}  // namespace cmh
