#include "cminhash/dataset_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "cminhash/error.hpp"

namespace cmh {

namespace {

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
    fail(ErrorKind::Parse, "line " + std::to_string(line) + ": " + what);
}

bool parse_uint(std::string_view text, std::uint64_t& out) {
    if (text.empty()) return false;
    for (char c : text)
        if (c < '0' || c > '9') return false;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
    return out;
}

template <class Row, class Writer>
void write_rows(std::ostream& out, const char* header, std::span<const Row> rows, Writer&& write) {
    out << header << '\n';
    for (const auto& row : rows) {
        write(row);
        out << '\n';
    }
}

}  // namespace

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

SparseDataset parse_sparse_dataset(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) fail(ErrorKind::Format, "missing header line with the dimension D");
    std::uint64_t dim = 0;
    if (!parse_uint(line, dim) || dim == 0 || dim > 0xffffffffULL)
        fail(ErrorKind::Format, "line 1: header must be a positive integer dimension, got '" + line + "'");

    SparseDataset data;
    data.dim = static_cast<Index>(dim);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        std::vector<Index> nz;
        std::string_view rest(line);
        while (!rest.empty()) {
            const auto space = rest.find(' ');
            const std::string_view token = rest.substr(0, space);
            std::uint64_t index = 0;
            if (!parse_uint(token, index)) parse_error(line_no, "'" + std::string(token) + "' is not an index");
            if (index < 1 || index > dim)
                parse_error(line_no, "index " + std::to_string(index) + " outside [1, " + std::to_string(dim) + "]");
            if (!nz.empty() && index <= nz.back()) parse_error(line_no, "indices must be strictly ascending");
            nz.push_back(static_cast<Index>(index));
            if (space == std::string_view::npos) break;
            rest.remove_prefix(space + 1);
            if (rest.empty()) parse_error(line_no, "trailing space");
        }
        data.vectors.emplace_back(data.dim, std::move(nz));
    }
    return data;
}

SparseDataset load_sparse_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open dataset '" + path.string() + "'");
    return parse_sparse_dataset(in);
}

void write_sparse_dataset(std::ostream& out, const SparseDataset& data) {
    out << data.dim << '\n';
    for (const auto& v : data.vectors) {
        bool first = true;
        for (Index i : v.nonzeros()) {
            if (!first) out << ' ';
            out << i;
            first = false;
        }
        out << '\n';
    }
}

void write_sparse_dataset(const std::filesystem::path& path, const SparseDataset& data) {
    auto out = open_for_write(path);
    write_sparse_dataset(out, data);
    if (!out) fail(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

void write_results_csv(std::ostream& out, std::span<const McResultRow> rows) {
    write_rows(out, "K,scheme,mean,bias2,variance,mse,trials,stderr_mean", rows, [&](const McResultRow& r) {
        out << r.K << ',' << scheme_name(r.scheme) << ',' << format_double(r.mean) << ',' << format_double(r.bias2) << ','
            << format_double(r.variance) << ',' << format_double(r.mse) << ',' << r.trials << ','
            << format_double(r.stderr_mean);
    });
}

void write_results_csv(std::ostream& out, std::span<const MaeResultRow> rows) {
    write_rows(out, "K,scheme,mae,reps", rows, [&](const MaeResultRow& r) {
        out << r.K << ',' << scheme_name(r.scheme) << ',' << format_double(r.mae) << ',' << r.reps;
    });
}

void write_results_csv(std::ostream& out, std::span<const TheoryPerKRow> rows) {
    write_rows(out, "k,expectation", rows,
               [&](const TheoryPerKRow& r) { out << r.k << ',' << format_double(r.expectation); });
}

void write_results_csv(std::ostream& out, std::span<const TheoryAggregateRow> rows) {
    write_rows(out, "K,mean,bias2", rows, [&](const TheoryAggregateRow& r) {
        out << r.K << ',' << format_double(r.mean) << ',' << format_double(r.bias2);
    });
}

template <class Row>
void write_results_csv(std::span<const Row> rows, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    write_results_csv(out, rows);
    out.flush();
    if (!out) fail(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

template void write_results_csv<McResultRow>(std::span<const McResultRow>, const std::filesystem::path&);
template void write_results_csv<MaeResultRow>(std::span<const MaeResultRow>, const std::filesystem::path&);
template void write_results_csv<TheoryPerKRow>(std::span<const TheoryPerKRow>, const std::filesystem::path&);
template void write_results_csv<TheoryAggregateRow>(std::span<const TheoryAggregateRow>, const std::filesystem::path&);

}  // namespace cmh
