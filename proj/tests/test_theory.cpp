#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cminhash/error.hpp"
#include "cminhash/estimators.hpp"
#include "cminhash/hashing.hpp"
#include "cminhash/permutation.hpp"
#include "cminhash/theory.hpp"
#include "test_support.hpp"

using namespace cmh;
using cmh::testing::make_location;
using cmh::testing::parse_location;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::Io;
}

}  // namespace

TEST_CASE("location_vector examples") {
    const BinaryVector v(9, {2, 5, 7});
    const auto same = location_vector(v, v);
    for (Index i = 1; i <= 9; ++i) CHECK(same.at(i) == (v.contains(i) ? Location::O : Location::Dash));

    const auto x = location_vector(BinaryVector(3, {1}), BinaryVector(3, {2}));
    CHECK(x == parse_location("XX-"));
    CHECK(x.a() == 0);
    CHECK(x.f() == 2);

    CHECK(make_location(8, 4, 2) == parse_location("OOXX----"));
    CHECK(make_location(8, 4, 2).members(Location::Cross) == std::vector<Index>{3, 4});
    CHECK(kind_of([] { location_vector(BinaryVector(3, {}), BinaryVector(3, {})); }) ==
          ErrorKind::UndefinedSimilarity);
}

TEST_CASE("pair_from_location inverts location_vector") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto x = make_location(12, 7, 3, seed);
        const auto [v, w] = pair_from_location(x);
        CHECK(location_vector(v, w) == x);
        const auto s = exact_pair_stats(v, w);
        CHECK(s.a == 3);
        CHECK(s.f == 7);
    }
}

TEST_CASE("class_counts against direct enumeration") {
    const auto x = parse_location("OX--");
    const auto c = class_counts(x, 2, 1);
    // i* = i + 1 wrapping: 1->2, 2->3, 3->4, 4->1, so A-(2) = {1, 4} = {O, DASH}
    CHECK(c.minus == ClassCounts{1, 0, 1});
    CHECK(c.plus == ClassCounts{0, 1, 1});

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto y = make_location(11, 6, 2, seed);
        for (Index k = 1; k <= 11; ++k)
            for (Index j = 1; j <= 11; ++j) {
                ClassCounts minus{}, plus{};
                for (Index i = 1; i <= 11; ++i) {
                    const auto q = static_cast<std::size_t>(y.at(i));
                    (circulant_index(i, k, 11) <= j ? minus : plus)[q] += 1;
                }
                const auto got = class_counts(y, j, k);
                REQUIRE(got.minus == minus);
                REQUIRE(got.plus == plus);
            }
        const auto full = class_counts(y, 11, 4);
        CHECK(full.plus == ClassCounts{0, 0, 0});
        CHECK(full.minus == y.totals());
    }
}

TEST_CASE("hypergeometric pmf") {
    CirculantCounts c{1, 1, {2, 2, 0}, {0, 0, 0}};
    CHECK(hypergeom_pmf(c, ZDraw{{1, 1, 0}, {0, 0, 0}}, 2) == doctest::Approx(4.0 / 6));
    CHECK(hypergeom_pmf(c, ZDraw{{1, 1, 0}, {0, 0, 0}}, 2, Numerics::LogGamma) == doctest::Approx(4.0 / 6));
    CHECK(hypergeom_pmf(c, ZDraw{{3, 0, 0}, {0, 0, 0}}, 3) == 0.0);

    CirculantCounts single{1, 1, {0, 0, 0}, {0, 0, 5}};
    CHECK(hypergeom_pmf(single, ZDraw{{0, 0, 0}, {0, 0, 3}}, 3) == doctest::Approx(1.0));

    CounterRng rng(9);
    for (int rep = 0; rep < 40; ++rep) {
        CirculantCounts r{};
        std::uint32_t D = 0;
        for (auto* arr : {&r.minus, &r.plus})
            for (auto& n : *arr) D += n = static_cast<std::uint32_t>(rng.below(4));
        if (D == 0 || D > 20) continue;
        const auto draws = static_cast<std::uint32_t>(rng.below(D + 1));
        for (Numerics mode : {Numerics::ExactInteger, Numerics::LogGamma}) {
            double total = 0.0;
            for_each_z(r, draws, [&](const ZDraw& z) { total += hypergeom_pmf(r, z, draws, mode); });
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("Z domain enumeration") {
    CirculantCounts c{1, 1, {2, 1, 1}, {1, 1, 2}};
    CHECK(enumerate_z_domain(c, 0) == std::vector<ZDraw>{ZDraw{}});
    CHECK(enumerate_z_domain(c, 8) == std::vector<ZDraw>{ZDraw{{2, 1, 1}, {1, 1, 2}}});

    std::uint64_t nested = 0;
    for (unsigned a = 0; a <= 2; ++a)
        for (unsigned b = 0; b <= 1; ++b)
            for (unsigned d = 0; d <= 1; ++d)
                for (unsigned e = 0; e <= 1; ++e)
                    for (unsigned g = 0; g <= 1; ++g)
                        for (unsigned h = 0; h <= 2; ++h) nested += (a + b + d + e + g + h == 4);
    const auto dom = enumerate_z_domain(c, 4);
    CHECK(dom.size() == nested);
    CHECK(z_domain_size(c, 4) == nested);
    CHECK(std::is_sorted(dom.begin(), dom.end(), [](const ZDraw& l, const ZDraw& r) {
        return std::tie(l.minus, l.plus) < std::tie(r.minus, r.plus);
    }));
    for (std::uint32_t draws = 0; draws <= 8; ++draws) CHECK(z_domain_size(c, draws) == enumerate_z_domain(c, draws).size());
}

TEST_CASE("expectation degenerate cases") {
    for (Index D : {1u, 5u, 12u}) {
        for (std::uint64_t seed : {0u, 3u}) {
            const auto all_o = make_location(D, std::min<Index>(D, 3), std::min<Index>(D, 3), seed);
            for (double e : collision_expectations(all_o, D)) CHECK(e == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(bias_squared(all_o, D) == doctest::Approx(0.0));
            if (D >= 2) {
                const auto no_o = make_location(D, 2, 0, seed);
                for (double e : collision_expectations(no_o, D)) CHECK(e == doctest::Approx(0.0));
            }
        }
    }
    for (Fraction fr : bruteforce_collision_expectations(make_location(6, 3, 3, 2), 6)) CHECK(fr.num == fr.den);
}

TEST_CASE("oracle hand values") {
    // x = [O, X, -]: all 6 permutations enumerated by hand
    const auto fr = bruteforce_collision_expectations(parse_location("OX-"), 3);
    REQUIRE(fr.size() == 3);
    CHECK(fr[0].value() == doctest::Approx(5.0 / 6));
    CHECK(fr[1].value() == doctest::Approx(1.0 / 3));
    CHECK(fr[2].value() == doctest::Approx(5.0 / 6));
    CHECK(bruteforce_collision_expectation_k(parse_location("OX-"), 2).value() == doctest::Approx(1.0 / 3));

    const auto four = bruteforce_collision_expectations(parse_location("OX--"), 4);
    const std::vector<double> expect{2.0 / 3, 2.0 / 3, 1.0 / 3, 2.0 / 3};
    for (std::size_t k = 0; k < 4; ++k) CHECK(four[k].value() == doctest::Approx(expect[k]));

    CHECK(kind_of([] { bruteforce_collision_expectation_k(make_location(11, 4, 2), 1); }) == ErrorKind::Budget);
}

TEST_CASE("theory matches the oracle exhaustively for D <= 6") {
    for (Index D = 2; D <= 6; ++D)
        for (Index f = 1; f <= D; ++f)
            for (Index a = 0; a <= f; ++a)
                for (std::uint64_t seed : {0u, 1u, 2u}) {
                    const auto x = make_location(D, f, a, seed);
                    const auto oracle = bruteforce_collision_expectations(x, D);
                    for (Numerics mode : {Numerics::ExactInteger, Numerics::LogGamma}) {
                        TheoryOptions opt;
                        opt.numerics = mode;
                        const auto th = collision_expectations(x, D, opt);
                        for (Index k = 0; k < D; ++k) REQUIRE(std::abs(th[k] - oracle[k].value()) <= 1e-9);
                    }
                }
}

TEST_CASE("theory matches the oracle on (8,4,2) and the dash-heavy regression case") {
    for (std::uint64_t seed : {0u, 5u}) {
        const auto x = make_location(8, 4, 2, seed);
        const auto oracle = bruteforce_collision_expectations(x, 8);
        double avg = 0.0;
        for (Index k = 1; k <= 8; ++k) {
            CHECK(collision_expectation_k(x, k) == doctest::Approx(oracle[k - 1].value()).epsilon(1e-12));
            avg += oracle[k - 1].value() / 8;
        }
        CHECK(estimator_mean(x, 8) == doctest::Approx(avg).epsilon(1e-12));
    }
    // many DASH coordinates below j exercise the DASH-class argmin terms
    const auto x = parse_location("O-X---O-");
    const auto oracle = bruteforce_collision_expectations(x, 8);
    for (Index k = 1; k <= 8; ++k) CHECK(collision_expectation_k(x, k) == doctest::Approx(oracle[k - 1].value()).epsilon(1e-12));
}

TEST_CASE("oracle agrees with Monte Carlo over random permutations") {
    const auto x = make_location(8, 4, 2, 1);
    const auto [v, w] = pair_from_location(x);
    const auto oracle = bruteforce_collision_expectations(x, 8);
    constexpr int kTrials = 1'000'000;
    std::vector<std::uint64_t> hits(8, 0);
    for (int t = 0; t < kTrials; ++t) {
        const auto pi = generate_permutation(8, 1'000'003ull * static_cast<std::uint64_t>(t) + 17);
        const auto hv = cminhash_pi_pi(v, pi, 8).values;
        const auto hw = cminhash_pi_pi(w, pi, 8).values;
        for (std::size_t k = 0; k < 8; ++k) hits[k] += hv[k] == hw[k];
    }
    for (std::size_t k = 0; k < 8; ++k) {
        const double p = oracle[k].value();
        const double se = std::sqrt(p * (1 - p) / kTrials);
        CHECK(std::abs(static_cast<double>(hits[k]) / kTrials - p) <= 4 * se + 1e-12);
    }
}

TEST_CASE("exact and log-gamma numerics agree") {
    for (Index D : {12u, 20u, 32u}) {
        const auto x = make_location(D, D / 2, D / 4, 7);
        TheoryOptions exact, lg;
        exact.numerics = Numerics::ExactInteger;
        lg.numerics = Numerics::LogGamma;
        for (Index k : {1u, 2u, D / 2, D}) CHECK(std::abs(collision_expectation_k(x, k, exact) - collision_expectation_k(x, k, lg)) <= 1e-10);
    }
}

TEST_CASE("bias is small at D = 64") {
    const auto x = make_location(64, 16, 4, 1);
    TheoryOptions opt;
    opt.threads = 0;
    const double b2 = bias_squared(x, 64, opt);
    CHECK(b2 <= 1e-4);
    CHECK(b2 >= 0.0);
}

TEST_CASE("per-shift deviations take both signs") {
    const auto x = make_location(16, 8, 2, 1);
    const double J = 2.0 / 8;
    const auto e = collision_expectations(x, 16);
    const bool above = std::any_of(e.begin(), e.end(), [&](double v) { return v > J + 1e-12; });
    const bool below = std::any_of(e.begin(), e.end(), [&](double v) { return v < J - 1e-12; });
    CHECK(above);
    CHECK(below);
}

TEST_CASE("term budget and term count") {
    const auto x = make_location(8, 4, 2, 1);
    std::uint64_t counted = 0;
    for (Index j = 1; j <= 8; ++j) counted += z_domain_size(class_counts(x, j, 3), 4);
    CHECK(theorem2_term_count(x, 3) == counted);

    TheoryOptions tiny;
    tiny.term_budget = 10;
    CHECK(kind_of([&] { collision_expectation_k(x, 3, tiny); }) == ErrorKind::Budget);
    CHECK(kind_of([&] { collision_expectation_k(x, 9); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([&] { collision_expectation_k(x, 0); }) == ErrorKind::InvalidArgument);
}
