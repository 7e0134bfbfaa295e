#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cminhash/dataset_io.hpp"
#include "cminhash/error.hpp"
#include "cminhash/experiments.hpp"

using namespace cmh;

namespace {

SparseDataset parse(const std::string& text) {
    std::istringstream in(text);
    return parse_sparse_dataset(in);
}

Error parse_error(const std::string& text) {
    try {
        parse(text);
    } catch (const Error& e) {
        return e;
    }
    FAIL("no error for: " << text);
    return Error(ErrorKind::Io, "");
}

std::string to_text(const SparseDataset& d) {
    std::ostringstream out;
    write_sparse_dataset(out, d);
    return out.str();
}

}  // namespace

TEST_CASE("parse examples") {
    const auto d = parse("3\n1 3\n2\n");
    CHECK(d.dim == 3);
    REQUIRE(d.vectors.size() == 2);
    CHECK(d.vectors[0] == BinaryVector(3, {1, 3}));
    CHECK(d.vectors[1] == BinaryVector(3, {2}));

    const auto blank = parse("4\n\n4\n");
    REQUIRE(blank.vectors.size() == 2);
    CHECK(blank.vectors[0].empty());
    CHECK(parse("5\n").vectors.empty());
    CHECK(parse("5\n1 2").vectors.size() == 1);
}

TEST_CASE("parse errors carry the line number") {
    auto e = parse_error("3\n3 1\n");
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);

    e = parse_error("3\n1\n1 4\n");
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);

    for (const char* bad : {"3\n1 x\n", "3\n1  2\n", "3\n0\n", "3\n2 2\n", "3\n -1\n", "3\n1 2 \n"})
        CHECK(parse_error(bad).kind() == ErrorKind::Parse);
    for (const char* bad : {"", "abc\n1\n", "0\n", "3 4\n1\n", "\n1\n"})
        CHECK(parse_error(bad).kind() == ErrorKind::Format);
}

TEST_CASE("write then parse is the identity") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        SparseDataset d;
        d.dim = 100;
        d.vectors = synth_dataset(15, 100, seed);
        d.vectors.push_back(BinaryVector(100, {}));
        const std::string text = to_text(d);
        const auto back = parse(text);
        CHECK(back.dim == d.dim);
        CHECK(back.vectors == d.vectors);
        CHECK(to_text(back) == text);
    }
}

TEST_CASE("dataset files") {
    const auto dir = std::filesystem::temp_directory_path() / "cmh_io_test";
    std::filesystem::create_directories(dir);
    SparseDataset d{7, {BinaryVector(7, {1, 7}), BinaryVector(7, {3})}};
    write_sparse_dataset(dir / "d.txt", d);
    const auto back = load_sparse_dataset(dir / "d.txt");
    CHECK(back.vectors == d.vectors);
    try {
        load_sparse_dataset(dir / "missing.txt");
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Io);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("csv headers and rows") {
    std::ostringstream mc, mae, perk, agg;
    write_results_csv(mc, std::span<const McResultRow>{});
    CHECK(mc.str() == "K,scheme,mean,bias2,variance,mse,trials,stderr_mean\n");
    write_results_csv(mae, std::span<const MaeResultRow>{});
    CHECK(mae.str() == "K,scheme,mae,reps\n");
    write_results_csv(perk, std::span<const TheoryPerKRow>{});
    CHECK(perk.str() == "k,expectation\n");
    write_results_csv(agg, std::span<const TheoryAggregateRow>{});
    CHECK(agg.str() == "K,mean,bias2\n");

    McResultRow row;
    row.K = 4;
    row.scheme = Scheme::PiPi;
    row.mean = 0.1;
    row.bias2 = 0.25;
    row.variance = 1.0 / 3;
    row.mse = 2;
    row.trials = 10;
    row.stderr_mean = 0.5;
    std::ostringstream one;
    write_results_csv(one, std::span<const McResultRow>(&row, 1));
    CHECK(one.str() == "K,scheme,mean,bias2,variance,mse,trials,stderr_mean\n"
                       "4,pi_pi,0.10000000000000001,0.25,0.33333333333333331,2,10,0.5\n");
    CHECK(std::stod(format_double(1.0 / 3)) == 1.0 / 3);
}
