#pragma once

// Exact expectation of the k-th C-MinHash-(pi,pi) collision indicator.
//
// Coordinates are classified by a location vector x (O: both set, CROSS: exactly
// one set, DASH: neither). For a threshold position j and shift k the coordinates
// split into A-(j) = {i : i* <= j} and A+(j) = {i : i* > j}, giving six class
// counts. Z counts, per group, the coordinates whose shifted position holds a
// DASH after the initial shuffle; it is multivariate hypergeometric with D - f
// draws. Conditional on Z the collision probability factors into closed-form
// pieces (P~, J-bar, J*), which are summed over j and the domain of Z.

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "cminhash/binary_vector.hpp"

namespace cmh {

enum class Location : std::uint8_t { O = 0, Cross = 1, Dash = 2 };

using ClassCounts = std::array<std::uint32_t, 3>;  // indexed by Location

class LocationVector {
public:
    LocationVector() = default;
    explicit LocationVector(std::vector<Location> classes);

    Index dim() const noexcept { return static_cast<Index>(classes_.size()); }
    Location at(Index i) const noexcept { return classes_[i - 1]; }
    const std::vector<Location>& classes() const noexcept { return classes_; }

    std::uint32_t a() const noexcept { return totals_[0]; }
    std::uint32_t f() const noexcept { return totals_[0] + totals_[1]; }
    const ClassCounts& totals() const noexcept { return totals_; }

    /// 1-based members of B1, B2, B3.
    std::vector<Index> members(Location q) const;

    friend bool operator==(const LocationVector& a, const LocationVector& b) noexcept {
        return a.classes_ == b.classes_;
    }

private:
    std::vector<Location> classes_;
    ClassCounts totals_{};
};

/// Per-coordinate classes of a vector pair. Requires equal dims and f >= 1.
LocationVector location_vector(const BinaryVector& v, const BinaryVector& w);

/// A vector pair with exactly the given location vector. O goes to both, CROSS
/// alternates v, w, v, ... in ascending index order.
std::pair<BinaryVector, BinaryVector> pair_from_location(const LocationVector& x);

struct CirculantCounts {
    Index j = 0;
    Index k = 0;
    ClassCounts minus{};  // classes within A-(j)
    ClassCounts plus{};   // classes within A+(j)
};

CirculantCounts class_counts(const LocationVector& x, Index j, Index k);

/// Z = (z-,1..3, z+,1..3).
struct ZDraw {
    ClassCounts minus{};
    ClassCounts plus{};
    friend bool operator==(const ZDraw&, const ZDraw&) = default;
};

enum class Numerics {
    Auto,          // exact integers for D <= 64, log-gamma above
    ExactInteger,  // 128-bit binomials, one rounding per ratio; D <= 64 only
    LogGamma,
};

/// Six-class hypergeometric probability of Z with `draws` draws; 0 off-domain.
double hypergeom_pmf(const CirculantCounts& counts, const ZDraw& z, std::uint32_t draws,
                     Numerics numerics = Numerics::Auto);

/// Visits the domain of Z in lexicographic order of (z-,1, z-,2, z-,3, z+,1, z+,2, z+,3).
void for_each_z(const CirculantCounts& counts, std::uint32_t draws, const std::function<void(const ZDraw&)>& visit);
std::vector<ZDraw> enumerate_z_domain(const CirculantCounts& counts, std::uint32_t draws);

/// |domain| without enumerating the last two coordinates.
std::uint64_t z_domain_size(const CirculantCounts& counts, std::uint32_t draws);

/// Every intermediate quantity for one (j, k, Z) term.
struct Theorem2Workspace {
    ZDraw z;
    std::uint32_t b0 = 0;          // DASH positions above j
    std::uint32_t high_slots = 0;  // non-DASH positions above j: D - j - b0
    std::uint32_t r1 = 0;          // O coordinates whose shifted position is non-DASH
    std::uint32_t r2 = 0;          // CROSS coordinates likewise
    std::uint32_t r3 = 0;          // DASH coordinates likewise
    double jstar = 0.0;
    std::array<double, 3> ptilde{};  // P~1 = P~2, P~3
    std::array<double, 3> jbar{};
    std::array<bool, 3> sharp{};  // 1{j# in B_q}
};

struct PairShape {
    std::uint32_t dim = 0;
    std::uint32_t f = 0;
    std::uint32_t a = 0;
};

Theorem2Workspace theorem2_workspace(const PairShape& shape, const CirculantCounts& counts, const ZDraw& z,
                                     Location sharp_class, Numerics numerics = Numerics::Auto);

/// Psi_q(j): contributions of argmin coordinates in class q with i* != j.
double psi(const Theorem2Workspace& ws, const CirculantCounts& counts, Location q);

/// Contribution of the O coordinate i = j#, i.e. the i* = j case.
double diagonal_term(const Theorem2Workspace& ws, const CirculantCounts& counts);

struct TheoryOptions {
    std::uint64_t term_budget = 100'000'000;  // max (j, Z) terms per shift k
    Numerics numerics = Numerics::Auto;
    unsigned threads = 1;
};

/// Number of (j, Z) terms the evaluator visits for shift k.
std::uint64_t theorem2_term_count(const LocationVector& x, Index k);

/// E[1{h_k(v) = h_k(w)}] for C-MinHash-(pi,pi). Throws Budget if the term count exceeds the budget.
double collision_expectation_k(const LocationVector& x, Index k, const TheoryOptions& options = {});

/// Per-shift expectations for k = 1..K.
std::vector<double> collision_expectations(const LocationVector& x, Index K, const TheoryOptions& options = {});

double estimator_mean(const LocationVector& x, Index K, const TheoryOptions& options = {});
double bias_squared(const LocationVector& x, Index K, const TheoryOptions& options = {});

struct Fraction {
    std::uint64_t num = 0;
    std::uint64_t den = 1;
    double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
};

inline constexpr Index kOracleMaxDim = 10;

/// Fraction of all D! permutations under which the k-th C-MinHash-(pi,pi) hashes of
/// the pair collide. Refuses D > 10.
Fraction bruteforce_collision_expectation_k(const LocationVector& x, Index k);

/// Same for k = 1..K in one sweep over the permutations.
std::vector<Fraction> bruteforce_collision_expectations(const LocationVector& x, Index K);

}  // namespace cmh
