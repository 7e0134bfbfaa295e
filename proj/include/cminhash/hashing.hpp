#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cminhash/binary_vector.hpp"
#include "cminhash/permutation.hpp"

namespace cmh {

enum class Scheme { MinHash, SigmaPi, PiPi, ZeroPi };

std::string_view scheme_name(Scheme s) noexcept;
std::optional<Scheme> parse_scheme(std::string_view name) noexcept;
inline bool is_circulant(Scheme s) noexcept { return s != Scheme::MinHash; }

/// K hash values of one vector plus what is needed to decide comparability.
struct Sketch {
    Scheme scheme = Scheme::MinHash;
    Index dim = 0;
    std::uint64_t seed = 0;
    std::vector<Index> values;

    std::size_t size() const noexcept { return values.size(); }
    friend bool operator==(const Sketch&, const Sketch&) = default;
};

/// Classical MinHash: values[k] = min over nonzero i of perms[k](i).
Sketch minhash_classic(const BinaryVector& v, std::span<const Permutation> perms);

/// C-MinHash with an initial shuffle sigma and a circulant generator pi.
/// The coordinate sent to position t by sigma hashes to pi(t#) under shift k,
/// i.e. pi's image array rotated right by k positions.
Sketch cminhash_sigma_pi(const BinaryVector& v, const Permutation& sigma, const Permutation& pi, Index K);

/// C-MinHash where pi serves as both the initial shuffle and the generator.
Sketch cminhash_pi_pi(const BinaryVector& v, const Permutation& pi, Index K);

/// C-MinHash without the initial shuffle.
Sketch cminhash_zero_pi(const BinaryVector& v, const Permutation& pi, Index K);

/// Circulant hash values for already-shuffled positions, written into `out`
/// (size K). Allocation-free building block shared by the three circulant schemes.
void circulant_hashes(std::span<const Index> positions, const Permutation& pi, std::span<Index> out);

/// Permutations for one scheme derived from a master seed, reusable across vectors.
class SketchFamily {
public:
    SketchFamily(Scheme scheme, Index dim, Index K, std::uint64_t seed);

    Scheme scheme() const noexcept { return scheme_; }
    Index dim() const noexcept { return dim_; }
    Index k() const noexcept { return k_; }

    Sketch sketch(const BinaryVector& v) const;

    /// Hash values only, into caller storage of size K. v must be nonempty.
    void hash_into(const BinaryVector& v, std::span<Index> out, std::vector<Index>& scratch) const;

private:
    Scheme scheme_;
    Index dim_;
    Index k_;
    std::vector<Permutation> perms_;  // MinHash: K permutations; SigmaPi: {sigma, pi}; others: {pi}
};

}  // namespace cmh
