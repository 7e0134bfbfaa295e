#include "cminhash/permutation.hpp"

#include <numeric>
#include <string>

#include "cminhash/error.hpp"

namespace cmh {

namespace {

std::vector<Index> invert(const std::vector<Index>& forward) {
    std::vector<Index> inverse(forward.size(), 0);
    for (std::size_t i = 0; i < forward.size(); ++i) {
        const Index image = forward[i];
        if (image < 1 || image > forward.size() || inverse[image - 1] != 0)
            fail(ErrorKind::InvalidArgument, "forward array is not a bijection on {1..D}");
        inverse[image - 1] = static_cast<Index>(i + 1);
    }
    return inverse;
}

std::uint64_t content_hash(const std::vector<Index>& forward) {
    std::uint64_t h = splitmix64(forward.size());
    for (Index v : forward) h = splitmix64(h ^ v);
    return h;
}

void check_shift_args(Index i, Index k, Index dim) {
    if (dim == 0) fail(ErrorKind::InvalidDimension, "dimension must be positive");
    if (i < 1 || i > dim || k < 1 || k > dim)
        fail(ErrorKind::InvalidArgument, "circulant index arguments must lie in [1, " + std::to_string(dim) +
                                             "]: i=" + std::to_string(i) + " k=" + std::to_string(k));
}

}  // namespace

Permutation Permutation::from_forward(std::vector<Index> forward) {
    if (forward.empty()) fail(ErrorKind::InvalidDimension, "permutation dimension must be positive");
    Permutation p;
    p.inverse_ = invert(forward);
    p.lineage_ = content_hash(forward);
    p.forward_ = std::move(forward);
    return p;
}

Permutation Permutation::identity(Index dim) {
    std::vector<Index> forward(dim);
    std::iota(forward.begin(), forward.end(), Index{1});
    return from_forward(std::move(forward));
}

Permutation generate_permutation(Index dim, std::uint64_t seed) {
    if (dim == 0) fail(ErrorKind::InvalidDimension, "permutation dimension must be positive");
    Permutation p;
    p.forward_.resize(dim);
    std::iota(p.forward_.begin(), p.forward_.end(), Index{1});
    CounterRng rng(seed);
    for (Index i = dim - 1; i > 0; --i) {
        const auto j = static_cast<Index>(rng.below(std::uint64_t{i} + 1));
        std::swap(p.forward_[i], p.forward_[j]);
    }
    p.inverse_.resize(dim);
    for (Index i = 0; i < dim; ++i) p.inverse_[p.forward_[i] - 1] = i + 1;
    p.lineage_ = seed;
    return p;
}

Index circulant_index(Index i, Index k, Index dim) {
    check_shift_args(i, k, dim);
    return static_cast<Index>((std::uint64_t{i} + k - 1) % dim + 1);
}

Index circulant_index_inverse(Index i, Index k, Index dim) {
    check_shift_args(i, k, dim);
    // (i - k - 1) mod D, kept non-negative.
    return static_cast<Index>((std::uint64_t{i} + 2ULL * dim - k - 1) % dim + 1);
}

}  // namespace cmh
