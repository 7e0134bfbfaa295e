#include "cminhash/estimators.hpp"

#include <string>

#include "cminhash/error.hpp"

namespace cmh {

PairStats exact_pair_stats(const BinaryVector& v, const BinaryVector& w) {
    if (v.dim() != w.dim())
        fail(ErrorKind::InvalidArgument, "dimension mismatch: " + std::to_string(v.dim()) + " vs " + std::to_string(w.dim()));
    const auto lhs = v.nonzeros();
    const auto rhs = w.nonzeros();
    std::uint32_t both = 0;
    std::size_t x = 0, y = 0;
    while (x < lhs.size() && y < rhs.size()) {
        if (lhs[x] == rhs[y]) {
            ++both;
            ++x;
            ++y;
        } else if (lhs[x] < rhs[y]) {
            ++x;
        } else {
            ++y;
        }
    }
    const auto either = static_cast<std::uint32_t>(lhs.size() + rhs.size() - both);
    if (either == 0) fail(ErrorKind::UndefinedSimilarity, "Jaccard similarity undefined for two empty vectors");
    return PairStats{both, either, v.dim()};
}

double estimate_jaccard(const Sketch& sv, const Sketch& sw) {
    if (sv.scheme != sw.scheme || sv.size() != sw.size() || sv.dim != sw.dim || sv.seed != sw.seed)
        fail(ErrorKind::IncompatibleSketch, "sketches were not produced by the same scheme, K, dimension and seed");
    if (sv.size() == 0) fail(ErrorKind::IncompatibleSketch, "empty sketch");
    std::size_t equal = 0;
    for (std::size_t k = 0; k < sv.size(); ++k) equal += sv.values[k] == sw.values[k];
    return static_cast<double>(equal) / static_cast<double>(sv.size());
}

double minhash_theoretical_variance(double jaccard, std::uint32_t K) {
    if (!(jaccard >= 0.0 && jaccard <= 1.0)) fail(ErrorKind::InvalidArgument, "J must lie in [0, 1]");
    if (K == 0) fail(ErrorKind::InvalidArgument, "K must be positive");
    return jaccard * (1.0 - jaccard) / K;
}

}  // namespace cmh
