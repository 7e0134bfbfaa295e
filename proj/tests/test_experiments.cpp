#include <doctest.h>

#include <cmath>
#include <set>

#include "cminhash/error.hpp"
#include "cminhash/estimators.hpp"
#include "cminhash/experiments.hpp"
#include "cminhash/theory.hpp"

using namespace cmh;

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

TEST_CASE("synth_pair layouts") {
    const auto [v, w] = synth_pair({8, 4, 2, Placement::Structured, 0});
    CHECK(location_vector(v, w) == LocationVector({Location::O, Location::O, Location::Cross, Location::Cross,
                                                   Location::Dash, Location::Dash, Location::Dash, Location::Dash}));
    const auto [x, y] = synth_pair({8, 8, 8, Placement::Random, 3});
    CHECK(x == BinaryVector::full(8));
    CHECK(y == BinaryVector::full(8));

    std::set<std::vector<Location>> layouts;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto [p, q] = synth_pair({20, 9, 4, Placement::Random, seed});
        const auto s = exact_pair_stats(p, q);
        REQUIRE(s.a == 4);
        REQUIRE(s.f == 9);
        layouts.insert(location_vector(p, q).classes());
    }
    CHECK(layouts.size() > 900);
    CHECK(kind_of([] { synth_pair({8, 4, 5, Placement::Random, 1}); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { synth_pair({8, 9, 1, Placement::Random, 1}); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { synth_pair({0, 0, 0, Placement::Random, 1}); }) == ErrorKind::InvalidDimension);
}

TEST_CASE("synth_dataset is nonempty and deterministic") {
    const auto d1 = synth_dataset(30, 256, 1);
    const auto d2 = synth_dataset(30, 256, 1);
    CHECK(d1 == d2);
    REQUIRE(d1.size() == 30);
    double lo = 1.0, hi = 0.0;
    for (std::size_t i = 0; i < d1.size(); ++i) {
        CHECK(!d1[i].empty());
        CHECK(d1[i].dim() == 256);
        for (std::size_t j = i + 1; j < d1.size(); ++j) {
            const double J = exact_pair_stats(d1[i], d1[j]).jaccard();
            lo = std::min(lo, J);
            hi = std::max(hi, J);
        }
    }
    CHECK(lo < 0.2);
    CHECK(hi > 0.5);
    CHECK(synth_dataset(30, 256, 2) != d1);
}

TEST_CASE("mc_per_k_collision degenerate cases") {
    const auto [v, w] = synth_pair({16, 5, 5, Placement::Random, 1});
    for (Scheme s : {Scheme::MinHash, Scheme::SigmaPi, Scheme::PiPi, Scheme::ZeroPi}) {
        const auto e = mc_per_k_collision(v, w, 3, s, 2000, 1);
        CHECK(e.estimate == 1.0);
        CHECK(e.std_error == 0.0);
    }
    const auto [p, q] = synth_pair({16, 5, 0, Placement::Random, 1});
    CHECK(mc_per_k_collision(p, q, 3, Scheme::PiPi, 2000, 1).estimate == 0.0);
    CHECK(kind_of([&] { mc_per_k_collision(p, q, 17, Scheme::PiPi, 10, 1); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([&] { mc_per_k_collision(p, q, 1, Scheme::PiPi, 0, 1); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("mc_per_k_collision matches the theory value") {
    const auto [v, w] = synth_pair({64, 16, 4, Placement::Random, 1});
    const double expect = collision_expectation_k(location_vector(v, w), 1);
    const auto e = mc_per_k_collision(v, w, 1, Scheme::PiPi, 1'000'000, 1);
    CHECK(std::abs(e.estimate - expect) <= 4 * e.std_error);
}

TEST_CASE("minhash variance at K = 64") {
    const auto [v, w] = synth_pair({64, 16, 4, Placement::Random, 1});
    const std::vector<std::uint32_t> grid{64};
    const auto rows = mc_bias_mse(v, w, grid, Scheme::MinHash, 100'000, 1);
    REQUIRE(rows.size() == 1);
    const double target = minhash_theoretical_variance(0.25, 64);
    CHECK(std::abs(rows[0].variance - target) <= 0.05 * target);
    CHECK(std::abs(rows[0].mean - 0.25) <= 4 * rows[0].stderr_mean);
}

TEST_CASE("mc_bias_mse rows are consistent") {
    const auto [v, w] = synth_pair({32, 12, 5, Placement::Structured, 0});
    const std::vector<std::uint32_t> grid{1, 4, 16, 32};
    const auto rows = mc_bias_mse(v, w, grid, Scheme::SigmaPi, 20'000, 5);
    REQUIRE(rows.size() == 4);
    for (std::size_t g = 0; g < rows.size(); ++g) {
        const auto& r = rows[g];
        CHECK(r.K == grid[g]);
        CHECK(r.scheme == Scheme::SigmaPi);
        CHECK(r.trials == 20'000);
        CHECK(r.bias2 == doctest::Approx((r.mean - 5.0 / 12) * (r.mean - 5.0 / 12)));
        // population variance makes this an identity
        CHECK(r.mse == doctest::Approx(r.variance + r.bias2).epsilon(1e-9));
        CHECK(r.stderr_mean == doctest::Approx(std::sqrt(r.variance / (r.trials - 1))));
    }
    CHECK(rows[3].variance < rows[0].variance);
}

TEST_CASE("determinism and thread invariance") {
    const auto [v, w] = synth_pair({48, 20, 7, Placement::Random, 2});
    const std::vector<std::uint32_t> grid{1, 8, 48};
    for (Scheme s : {Scheme::MinHash, Scheme::SigmaPi, Scheme::PiPi, Scheme::ZeroPi}) {
        const auto one = mc_bias_mse(v, w, grid, s, 3000, 9, 1);
        const auto three = mc_bias_mse(v, w, grid, s, 3000, 9, 3);
        REQUIRE(one.size() == three.size());
        for (std::size_t g = 0; g < one.size(); ++g) {
            CHECK(one[g].mean == three[g].mean);
            CHECK(one[g].variance == three[g].variance);
            CHECK(one[g].mse == three[g].mse);
        }
        CHECK(mc_per_k_collision(v, w, 5, s, 3000, 9, 1).estimate == mc_per_k_collision(v, w, 5, s, 3000, 9, 4).estimate);
    }
    const auto data = synth_dataset(12, 64, 4);
    const std::vector<Scheme> schemes{Scheme::PiPi, Scheme::SigmaPi};
    const std::vector<std::uint32_t> kg{8, 64};
    const auto a = mae_all_pairs(data, kg, schemes, 4, 3, 1);
    const auto b = mae_all_pairs(data, kg, schemes, 4, 3, 2);
    for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].mae == b.rows[i].mae);
    CHECK(trial_seed(1, Scheme::PiPi, 0) != trial_seed(1, Scheme::SigmaPi, 0));
    CHECK(trial_seed(1, Scheme::PiPi, 0) != trial_seed(1, Scheme::PiPi, 1));
    CHECK(trial_seed(1, Scheme::PiPi, 0) != trial_seed(2, Scheme::PiPi, 0));
}

TEST_CASE("bias shrinks with K and sigma-pi beats the minhash variance") {
    const auto [v, w] = synth_pair({32, 10, 3, Placement::Random, 1});
    const auto x = location_vector(v, w);
    CHECK(bias_squared(x, 32) < bias_squared(x, 4));

    const double J = 0.3;
    const std::vector<std::uint32_t> grid{4, 16, 32};
    const auto rows = mc_bias_mse(v, w, grid, Scheme::SigmaPi, 50'000, 2);
    for (const auto& r : rows) CHECK(r.mse <= minhash_theoretical_variance(J, r.K) + 3 * r.stderr_mse);
}

TEST_CASE("mae on identical vectors is zero") {
    const std::vector<BinaryVector> data(5, BinaryVector(20, {1, 4, 9, 16}));
    const std::vector<Scheme> schemes{Scheme::PiPi, Scheme::SigmaPi, Scheme::MinHash};
    const std::vector<std::uint32_t> grid{1, 7, 20};
    const auto run = mae_all_pairs(data, grid, schemes, 3, 1);
    CHECK(run.pairs == 10);
    CHECK(run.rows.size() == 9);
    for (const auto& r : run.rows) CHECK(r.mae == 0.0);
}

TEST_CASE("mae on a toy dataset equals the hand-averaged error") {
    const std::vector<BinaryVector> data{BinaryVector(10, {1, 2, 3}), BinaryVector(10, {2, 3, 4, 5}),
                                         BinaryVector(10, {5, 9})};
    const std::vector<std::uint32_t> grid{3, 10};
    const std::vector<Scheme> schemes{Scheme::ZeroPi, Scheme::MinHash};
    constexpr std::uint32_t kReps = 4;
    const auto run = mae_all_pairs(data, grid, schemes, kReps, 11);
    REQUIRE(run.rows.size() == 4);
    for (std::size_t s = 0; s < schemes.size(); ++s) {
        for (std::size_t g = 0; g < grid.size(); ++g) {
            double total = 0.0;
            for (std::uint32_t rep = 0; rep < kReps; ++rep) {
                const SketchFamily fam(schemes[s], 10, 10, trial_seed(11, schemes[s], rep));
                double err = 0.0;
                for (std::size_t i = 0; i < 3; ++i)
                    for (std::size_t j = i + 1; j < 3; ++j) {
                        const auto si = fam.sketch(data[i]).values;
                        const auto sj = fam.sketch(data[j]).values;
                        double hits = 0;
                        for (std::uint32_t k = 0; k < grid[g]; ++k) hits += si[k] == sj[k];
                        err += std::abs(hits / grid[g] - exact_pair_stats(data[i], data[j]).jaccard());
                    }
                total += err / 3;
            }
            const auto& row = run.rows[s * grid.size() + g];
            CHECK(row.scheme == schemes[s]);
            CHECK(row.K == grid[g]);
            CHECK(row.reps == kReps);
            CHECK(row.mae == doctest::Approx(total / kReps).epsilon(1e-12));
        }
    }
}

TEST_CASE("mae skips empty vectors") {
    const std::vector<BinaryVector> data{BinaryVector(6, {1}), BinaryVector(6, {}), BinaryVector(6, {1, 2}),
                                         BinaryVector(6, {3})};
    const std::vector<std::uint32_t> grid{2};
    const std::vector<Scheme> schemes{Scheme::PiPi};
    const auto run = mae_all_pairs(data, grid, schemes, 2, 1);
    CHECK(run.pairs == 3);
    CHECK(run.skipped_pairs == 3);
    const std::vector<BinaryVector> lonely{BinaryVector(6, {1}), BinaryVector(6, {})};
    CHECK(kind_of([&] { mae_all_pairs(lonely, grid, schemes, 2, 1); }) == ErrorKind::InvalidArgument);
}
