#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "cminhash/binary_vector.hpp"
#include "cminhash/experiments.hpp"

namespace cmh {

/// Text dataset: first line is D, then one vector per line as ascending
/// space-separated 1-based indices. A blank line is an empty vector.
/// Vector id n (1-based) is the vector on line n + 1.
struct SparseDataset {
    Index dim = 0;
    std::vector<BinaryVector> vectors;
};

SparseDataset parse_sparse_dataset(std::istream& in);
SparseDataset load_sparse_dataset(const std::filesystem::path& path);

void write_sparse_dataset(std::ostream& out, const SparseDataset& data);
void write_sparse_dataset(const std::filesystem::path& path, const SparseDataset& data);

struct TheoryPerKRow {
    std::uint32_t k = 0;
    double expectation = 0.0;
};

struct TheoryAggregateRow {
    std::uint32_t K = 0;
    double mean = 0.0;
    double bias2 = 0.0;
};

/// Full-precision CSV (17 significant digits). Header is always written.
void write_results_csv(std::ostream& out, std::span<const McResultRow> rows);
void write_results_csv(std::ostream& out, std::span<const MaeResultRow> rows);
void write_results_csv(std::ostream& out, std::span<const TheoryPerKRow> rows);
void write_results_csv(std::ostream& out, std::span<const TheoryAggregateRow> rows);

template <class Row>
void write_results_csv(std::span<const Row> rows, const std::filesystem::path& path);

std::string format_double(double value);

}  // namespace cmh
