#pragma once

#include <vector>

#include "cminhash/rng.hpp"
#include "cminhash/theory.hpp"

namespace cmh::testing {

/// a O's, f - a CROSS's, rest DASH; shuffled when seed != 0.
inline LocationVector make_location(unsigned dim, unsigned f, unsigned a, std::uint64_t seed = 0) {
    std::vector<Location> c(dim, Location::Dash);
    for (unsigned i = 0; i < a; ++i) c[i] = Location::O;
    for (unsigned i = a; i < f; ++i) c[i] = Location::Cross;
    if (seed != 0) {
        CounterRng rng(seed);
        for (unsigned i = dim - 1; i > 0; --i) std::swap(c[i], c[rng.below(i + 1)]);
    }
    return LocationVector(std::move(c));
}

inline LocationVector parse_location(const char* s) {
    std::vector<Location> c;
    for (; *s; ++s) c.push_back(*s == 'O' ? Location::O : *s == 'X' ? Location::Cross : Location::Dash);
    return LocationVector(std::move(c));
}

}  // namespace cmh::testing
