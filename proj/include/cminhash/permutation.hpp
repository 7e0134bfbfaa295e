#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cminhash/binary_vector.hpp"
#include "cminhash/rng.hpp"

namespace cmh {

/// Bijection on {1..dim}. Storage is 0-based; every public accessor is 1-based.
/// `at(i)` and `inverse_at(j)` are the only adapters between the two.
class Permutation {
public:
    Permutation() = default;

    /// Wrap an explicit 1-based image array: forward[i-1] = pi(i).
    static Permutation from_forward(std::vector<Index> forward);
    static Permutation identity(Index dim);

    Index dim() const noexcept { return static_cast<Index>(forward_.size()); }
    Index at(Index i) const noexcept { return forward_[i - 1]; }
    Index inverse_at(Index j) const noexcept { return inverse_[j - 1]; }
    std::span<const Index> forward() const noexcept { return forward_; }
    std::span<const Index> inverse() const noexcept { return inverse_; }

    /// Identifies where the permutation came from (generator key or content hash).
    std::uint64_t lineage() const noexcept { return lineage_; }

    friend bool operator==(const Permutation& a, const Permutation& b) noexcept {
        return a.forward_ == b.forward_;
    }

private:
    friend Permutation generate_permutation(Index dim, std::uint64_t seed);

    std::vector<Index> forward_;
    std::vector<Index> inverse_;
    std::uint64_t lineage_ = 0;
};

/// Uniform random permutation by Fisher-Yates, driven by CounterRng(seed).
/// Identical (dim, seed) always yields the identical permutation.
Permutation generate_permutation(Index dim, std::uint64_t seed);

/// i* = ((i + k - 1) mod D) + 1.
Index circulant_index(Index i, Index k, Index dim);

/// i# = ((i - k - 1) mod D) + 1, the inverse of circulant_index for fixed k.
Index circulant_index_inverse(Index i, Index k, Index dim);

}  // namespace cmh
