#include "cminhash/hashing.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "cminhash/error.hpp"
#include "cminhash/rng.hpp"

namespace cmh {

namespace {

void check_nonempty(const BinaryVector& v) {
    if (v.empty()) fail(ErrorKind::EmptyVector, "cannot hash an empty vector");
}

void check_circulant_args(const BinaryVector& v, const Permutation& pi, Index K) {
    check_nonempty(v);
    if (pi.dim() != v.dim())
        fail(ErrorKind::InvalidArgument, "permutation dimension " + std::to_string(pi.dim()) +
                                             " does not match vector dimension " + std::to_string(v.dim()));
    if (K < 1 || K > v.dim())
        fail(ErrorKind::InvalidArgument, "circulant schemes need 1 <= K <= D (K=" + std::to_string(K) +
                                             ", D=" + std::to_string(v.dim()) + ")");
}

Sketch circulant_sketch(const BinaryVector& v, const Permutation* sigma, const Permutation& pi, Index K,
                        Scheme scheme, std::uint64_t seed) {
    std::vector<Index> positions(v.nonzeros().begin(), v.nonzeros().end());
    if (sigma != nullptr)
        for (auto& t : positions) t = sigma->at(t);
    Sketch s{scheme, v.dim(), seed, std::vector<Index>(K)};
    circulant_hashes(positions, pi, s.values);
    return s;
}

}  // namespace

std::string_view scheme_name(Scheme s) noexcept {
    switch (s) {
        case Scheme::MinHash: return "minhash";
        case Scheme::SigmaPi: return "sigma_pi";
        case Scheme::PiPi: return "pi_pi";
        case Scheme::ZeroPi: return "zero_pi";
    }
    return "unknown";
}

std::optional<Scheme> parse_scheme(std::string_view name) noexcept {
    for (Scheme s : {Scheme::MinHash, Scheme::SigmaPi, Scheme::PiPi, Scheme::ZeroPi})
        if (scheme_name(s) == name) return s;
    return std::nullopt;
}

void circulant_hashes(std::span<const Index> positions, const Permutation& pi, std::span<Index> out) {
    const Index dim = pi.dim();
    const auto image = pi.forward();
    for (std::size_t k = 1; k <= out.size(); ++k) {
        Index best = std::numeric_limits<Index>::max();
        // pi_{->k}(t) = pi(t#) with t# = ((t - k - 1) mod D) + 1; 0-based slot is (t - 1 - k) mod D.
        const auto back = static_cast<Index>(k % dim);
        for (Index t : positions) {
            const Index slot0 = t - 1;
            const Index slot = slot0 >= back ? slot0 - back : slot0 + dim - back;
            best = std::min(best, image[slot]);
        }
        out[k - 1] = best;
    }
}

Sketch minhash_classic(const BinaryVector& v, std::span<const Permutation> perms) {
    check_nonempty(v);
    if (perms.empty()) fail(ErrorKind::InvalidArgument, "MinHash needs at least one permutation");
    Sketch s{Scheme::MinHash, v.dim(), 0, {}};
    s.values.reserve(perms.size());
    std::uint64_t seed = perms.size();
    for (const auto& p : perms) {
        if (p.dim() != v.dim()) fail(ErrorKind::InvalidArgument, "permutation dimension does not match vector");
        Index best = std::numeric_limits<Index>::max();
        for (Index i : v.nonzeros()) best = std::min(best, p.at(i));
        s.values.push_back(best);
        seed = splitmix64(seed ^ p.lineage());
    }
    s.seed = seed;
    return s;
}

Sketch cminhash_sigma_pi(const BinaryVector& v, const Permutation& sigma, const Permutation& pi, Index K) {
    check_circulant_args(v, pi, K);
    if (sigma.dim() != v.dim()) fail(ErrorKind::InvalidArgument, "sigma dimension does not match vector");
    return circulant_sketch(v, &sigma, pi, K, Scheme::SigmaPi, derive_seed(sigma.lineage(), pi.lineage()));
}

Sketch cminhash_pi_pi(const BinaryVector& v, const Permutation& pi, Index K) {
    check_circulant_args(v, pi, K);
    return circulant_sketch(v, &pi, pi, K, Scheme::PiPi, pi.lineage());
}

Sketch cminhash_zero_pi(const BinaryVector& v, const Permutation& pi, Index K) {
    check_circulant_args(v, pi, K);
    return circulant_sketch(v, nullptr, pi, K, Scheme::ZeroPi, pi.lineage());
}

SketchFamily::SketchFamily(Scheme scheme, Index dim, Index K, std::uint64_t seed)
    : scheme_(scheme), dim_(dim), k_(K) {
    if (dim == 0) fail(ErrorKind::InvalidDimension, "dimension must be positive");
    if (K == 0) fail(ErrorKind::InvalidArgument, "K must be positive");
    if (is_circulant(scheme) && K > dim)
        fail(ErrorKind::InvalidArgument, "circulant schemes need K <= D (K=" + std::to_string(K) +
                                             ", D=" + std::to_string(dim) + ")");
    switch (scheme) {
        case Scheme::MinHash:
            perms_.reserve(K);
            for (Index k = 0; k < K; ++k) perms_.push_back(generate_permutation(dim, derive_seed(seed, Purpose::MinHash, k)));
            break;
        case Scheme::SigmaPi:
            perms_.push_back(generate_permutation(dim, derive_seed(seed, Purpose::Sigma)));
            perms_.push_back(generate_permutation(dim, derive_seed(seed, Purpose::Pi)));
            break;
        case Scheme::PiPi:
        case Scheme::ZeroPi:
            perms_.push_back(generate_permutation(dim, derive_seed(seed, Purpose::Pi)));
            break;
    }
}

Sketch SketchFamily::sketch(const BinaryVector& v) const {
    if (v.dim() != dim_) fail(ErrorKind::InvalidArgument, "vector dimension does not match sketch family");
    switch (scheme_) {
        case Scheme::MinHash: return minhash_classic(v, perms_);
        case Scheme::SigmaPi: return cminhash_sigma_pi(v, perms_[0], perms_[1], k_);
        case Scheme::PiPi: return cminhash_pi_pi(v, perms_[0], k_);
        case Scheme::ZeroPi: return cminhash_zero_pi(v, perms_[0], k_);
    }
    return {};
}

void SketchFamily::hash_into(const BinaryVector& v, std::span<Index> out, std::vector<Index>& scratch) const {
    if (scheme_ == Scheme::MinHash) {
        for (std::size_t k = 0; k < out.size(); ++k) {
            Index best = std::numeric_limits<Index>::max();
            for (Index i : v.nonzeros()) best = std::min(best, perms_[k].at(i));
            out[k] = best;
        }
        return;
    }
    scratch.assign(v.nonzeros().begin(), v.nonzeros().end());
    if (scheme_ != Scheme::ZeroPi) {
        const Permutation& shuffle = perms_[0];
        for (auto& t : scratch) t = shuffle.at(t);
    }
    circulant_hashes(scratch, perms_.back(), out);
}

}  // namespace cmh
