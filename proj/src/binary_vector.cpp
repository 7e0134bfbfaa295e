#include "cminhash/binary_vector.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "cminhash/error.hpp"

namespace cmh {

BinaryVector::BinaryVector(Index dim, std::vector<Index> nonzeros) : dim_(dim), nonzeros_(std::move(nonzeros)) {
    if (dim_ == 0) fail(ErrorKind::InvalidDimension, "binary vector dimension must be positive");
    std::sort(nonzeros_.begin(), nonzeros_.end());
    if (std::adjacent_find(nonzeros_.begin(), nonzeros_.end()) != nonzeros_.end())
        fail(ErrorKind::InvalidArgument, "duplicate nonzero index");
    if (!nonzeros_.empty() && (nonzeros_.front() < 1 || nonzeros_.back() > dim_))
        fail(ErrorKind::InvalidArgument, "nonzero index outside [1, " + std::to_string(dim_) + "]");
}

BinaryVector BinaryVector::full(Index dim) {
    std::vector<Index> all(dim);
    std::iota(all.begin(), all.end(), Index{1});
    return BinaryVector(dim, std::move(all));
}

bool BinaryVector::contains(Index i) const noexcept {
    return std::binary_search(nonzeros_.begin(), nonzeros_.end(), i);
}

}  // namespace cmh
