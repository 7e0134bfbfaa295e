#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cmh {

using Index = std::uint32_t;

/// Sparse binary vector over {1..dim}. Nonzeros are 1-based, strictly ascending.
class BinaryVector {
public:
    BinaryVector() = default;

    /// Validating constructor. Indices may arrive in any order; duplicates and
    /// out-of-range entries are rejected.
    BinaryVector(Index dim, std::vector<Index> nonzeros);

    /// All coordinates 1..dim set.
    static BinaryVector full(Index dim);

    Index dim() const noexcept { return dim_; }
    std::span<const Index> nonzeros() const noexcept { return nonzeros_; }
    std::size_t count() const noexcept { return nonzeros_.size(); }
    bool empty() const noexcept { return nonzeros_.empty(); }
    bool contains(Index i) const noexcept;

    friend bool operator==(const BinaryVector&, const BinaryVector&) = default;

private:
    Index dim_ = 0;
    std::vector<Index> nonzeros_;
};

}  // namespace cmh
