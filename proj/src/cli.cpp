#include "cminhash/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "cminhash/dataset_io.hpp"
#include "cminhash/error.hpp"
#include "cminhash/estimators.hpp"
#include "cminhash/experiments.hpp"
#include "cminhash/parallel.hpp"
#include "cminhash/theory.hpp"

namespace cmh {

namespace {

struct PairSource {
    std::uint32_t dim = 0;
    std::uint32_t f = 0;
    std::uint32_t a = 0;
    std::string placement = "random";
    std::uint64_t pair_seed = 1;
    std::string input;
    std::uint32_t id1 = 0;
    std::uint32_t id2 = 0;
};

void add_pair_options(CLI::App* cmd, PairSource& src) {
    cmd->add_option("--D", src.dim, "dimension of a synthetic pair");
    cmd->add_option("--f", src.f, "union size of a synthetic pair");
    cmd->add_option("--a", src.a, "intersection size of a synthetic pair");
    cmd->add_option("--placement", src.placement, "random | structured")->check(CLI::IsMember({"random", "structured"}));
    cmd->add_option("--pair-seed", src.pair_seed, "seed of the random placement");
    cmd->add_option("--input", src.input, "dataset file (alternative to --D/--f/--a)");
    cmd->add_option("--id1", src.id1, "1-based id of the first vector in --input");
    cmd->add_option("--id2", src.id2, "1-based id of the second vector in --input");
}

const BinaryVector& vector_by_id(const SparseDataset& data, std::uint32_t id) {
    if (id < 1 || id > data.vectors.size())
        fail(ErrorKind::InvalidArgument, "vector id " + std::to_string(id) + " outside [1, " +
                                             std::to_string(data.vectors.size()) + "]");
    return data.vectors[id - 1];
}

std::pair<BinaryVector, BinaryVector> resolve_pair(const PairSource& src) {
    if (!src.input.empty()) {
        const SparseDataset data = load_sparse_dataset(src.input);
        return {vector_by_id(data, src.id1), vector_by_id(data, src.id2)};
    }
    if (src.dim == 0) fail(ErrorKind::InvalidArgument, "give either --input with --id1/--id2 or --D/--f/--a");
    const Placement placement = src.placement == "structured" ? Placement::Structured : Placement::Random;
    return synth_pair({src.dim, src.f, src.a, placement, src.pair_seed});
}

std::vector<Scheme> parse_schemes(const std::vector<std::string>& names) {
    std::vector<Scheme> out;
    for (const auto& n : names) {
        const auto s = parse_scheme(n);
        if (!s) fail(ErrorKind::InvalidArgument, "unknown scheme '" + n + "' (minhash, sigma_pi, pi_pi, zero_pi)");
        out.push_back(*s);
    }
    return out;
}

Numerics parse_numerics(const std::string& name) {
    if (name == "exact") return Numerics::ExactInteger;
    if (name == "lgamma") return Numerics::LogGamma;
    return Numerics::Auto;
}

void emit(const std::optional<std::string>& path, std::ostream& out, const std::function<void(std::ostream&)>& write) {
    if (!path) {
        write(out);
        return;
    }
    std::ofstream file(*path, std::ios::binary | std::ios::trunc);
    if (!file) fail(ErrorKind::Io, "cannot open '" + *path + "' for writing");
    write(file);
    file.flush();
    if (!file) fail(ErrorKind::Io, "failed writing '" + *path + "'");
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument:
        case ErrorKind::InvalidDimension: return kExitUsage;
        case ErrorKind::Budget: return kExitBudget;
        default: return kExitData;
    }
}

std::uint32_t max_k(const std::vector<std::uint32_t>& grid) { return *std::max_element(grid.begin(), grid.end()); }

}  // namespace

void validate_run_config(const RunConfig& config, std::uint32_t dim) {
    const bool needs_grid = config.kind != ExperimentKind::Synth;
    if (needs_grid && config.k_grid.empty()) fail(ErrorKind::InvalidArgument, "--K is required");
    for (auto K : config.k_grid)
        if (K == 0) fail(ErrorKind::InvalidArgument, "K must be positive");
    const bool theory_like = config.kind == ExperimentKind::Theory || config.kind == ExperimentKind::Oracle;
    for (auto K : config.k_grid) {
        const bool circulant = theory_like || std::any_of(config.schemes.begin(), config.schemes.end(), is_circulant);
        if (circulant && K > dim)
            fail(ErrorKind::InvalidArgument, "K=" + std::to_string(K) + " exceeds D=" + std::to_string(dim) +
                                                 " for a circulant scheme");
    }
    if (config.kind == ExperimentKind::Mc && config.trials == 0) fail(ErrorKind::InvalidArgument, "--trials must be positive");
    if (config.kind == ExperimentKind::Mae && config.reps == 0) fail(ErrorKind::InvalidArgument, "--reps must be positive");
}

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"MinHash and circulant C-MinHash sketches, exact expectations and Monte Carlo studies", "cmh"};
    app.require_subcommand(1);

    RunConfig cfg;
    PairSource pair;
    std::vector<std::string> scheme_names;
    std::string output;
    std::string numerics = "auto";
    std::uint64_t budget = TheoryOptions{}.term_budget;
    bool per_k = false;
    std::uint32_t shift = 0;
    std::uint32_t synth_n = 0;
    std::string input;
    std::uint32_t id1 = 0, id2 = 0;

    auto common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
        cmd->add_option("--threads", cfg.threads, "worker threads (default: CMH_THREADS or 1)");
        cmd->add_option("-o,--output", output, "output file (default: stdout)");
    };
    auto k_option = [&](CLI::App* cmd) { return cmd->add_option("--K", cfg.k_grid, "K or comma-separated K grid")->delimiter(','); };
    auto scheme_option = [&](CLI::App* cmd, const char* def) {
        scheme_names = {def};
        return cmd->add_option("--scheme,--schemes", scheme_names, "minhash | sigma_pi | pi_pi | zero_pi (comma list)")
            ->delimiter(',');
    };

    auto* hash = app.add_subcommand("hash", "sketch every vector of a dataset");
    common(hash);
    hash->add_option("--input", input, "dataset file")->required();
    k_option(hash)->required();

    auto* estimate = app.add_subcommand("estimate", "estimate J between two vectors of a dataset");
    common(estimate);
    estimate->add_option("--input", input, "dataset file")->required();
    estimate->add_option("--id1", id1)->required();
    estimate->add_option("--id2", id2)->required();
    k_option(estimate)->required();

    auto* theory = app.add_subcommand("theory", "exact C-MinHash-(pi,pi) expectation, mean and bias^2");
    common(theory);
    add_pair_options(theory, pair);
    k_option(theory)->required();
    theory->add_flag("--per-k", per_k, "emit k,expectation for k = 1..max K");
    theory->add_option("--numerics", numerics, "auto | exact | lgamma")->check(CLI::IsMember({"auto", "exact", "lgamma"}));
    theory->add_option("--budget", budget, "maximum number of terms per shift");

    auto* oracle = app.add_subcommand("oracle", "brute-force expectation over all D! permutations (D <= 10)");
    common(oracle);
    add_pair_options(oracle, pair);
    k_option(oracle)->required();
    oracle->add_flag("--per-k", per_k, "emit k,expectation for k = 1..max K");

    auto* mc = app.add_subcommand("mc", "Monte Carlo bias^2 / variance / MSE, or per-k collision frequency");
    common(mc);
    add_pair_options(mc, pair);
    k_option(mc);
    mc->add_option("--trials", cfg.trials, "independent trials")->required();
    mc->add_option("--per-k", shift, "estimate the collision probability of this single shift");

    auto* mae = app.add_subcommand("mae", "mean absolute error over all pairs of a dataset");
    common(mae);
    mae->add_option("--input", input, "dataset file");
    mae->add_option("--synth-n", synth_n, "use a synthetic dataset with this many vectors");
    mae->add_option("--synth-D", pair.dim, "dimension of the synthetic dataset");
    k_option(mae)->required();
    cfg.reps = 10;
    mae->add_option("--reps", cfg.reps, "repetitions")->capture_default_str();

    auto* synth = app.add_subcommand("synth", "write a synthetic pair (D,f,a) or dataset (--n) file");
    common(synth);
    synth->add_option("--D", pair.dim)->required();
    synth->add_option("--f", pair.f);
    synth->add_option("--a", pair.a);
    synth->add_option("--placement", pair.placement)->check(CLI::IsMember({"random", "structured"}));
    synth->add_option("--n", synth_n, "number of vectors (dataset mode)");

    // Scheme flags: hash/estimate take one scheme, mc/mae take lists.
    scheme_option(hash, "pi_pi");
    scheme_option(estimate, "pi_pi");
    scheme_option(mc, "pi_pi");
    scheme_option(mae, "pi_pi");
    mae->get_option("--scheme")->default_str("pi_pi,sigma_pi");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    if (!output.empty()) cfg.output = output;
    const unsigned threads = resolve_threads(cfg.threads);

    try {
        if (mae->parsed() && mae->count("--scheme") == 0) scheme_names = {"pi_pi", "sigma_pi"};
        cfg.schemes = parse_schemes(scheme_names);

        if (hash->parsed() || estimate->parsed()) {
            cfg.kind = hash->parsed() ? ExperimentKind::Hash : ExperimentKind::Estimate;
            if (cfg.schemes.size() != 1 || cfg.k_grid.size() != 1)
                fail(ErrorKind::InvalidArgument, "give exactly one --scheme and one --K");
            const SparseDataset data = load_sparse_dataset(input);
            validate_run_config(cfg, data.dim);
            const SketchFamily family(cfg.schemes[0], data.dim, cfg.k_grid[0], cfg.seed);
            if (estimate->parsed()) {
                const BinaryVector& v = vector_by_id(data, id1);
                const BinaryVector& w = vector_by_id(data, id2);
                const double est = estimate_jaccard(family.sketch(v), family.sketch(w));
                const PairStats stats = exact_pair_stats(v, w);
                emit(cfg.output, out, [&](std::ostream& os) {
                    os << "estimate,jaccard,a,f\n"
                       << format_double(est) << ',' << format_double(stats.jaccard()) << ',' << stats.a << ',' << stats.f << '\n';
                });
                return kExitOk;
            }
            std::vector<Sketch> sketches;
            sketches.reserve(data.vectors.size());
            for (std::size_t i = 0; i < data.vectors.size(); ++i) {
                if (data.vectors[i].empty())
                    fail(ErrorKind::EmptyVector, "vector id " + std::to_string(i + 1) + " is empty and cannot be hashed");
                sketches.push_back(family.sketch(data.vectors[i]));
            }
            emit(cfg.output, out, [&](std::ostream& os) {
                os << "id";
                for (std::uint32_t k = 1; k <= cfg.k_grid[0]; ++k) os << ",h" << k;
                os << '\n';
                for (std::size_t i = 0; i < sketches.size(); ++i) {
                    os << i + 1;
                    for (Index h : sketches[i].values) os << ',' << h;
                    os << '\n';
                }
            });
            return kExitOk;
        }

        if (theory->parsed() || oracle->parsed()) {
            cfg.kind = theory->parsed() ? ExperimentKind::Theory : ExperimentKind::Oracle;
            const auto [v, w] = resolve_pair(pair);
            validate_run_config(cfg, v.dim());
            const LocationVector x = location_vector(v, w);
            const std::uint32_t k_top = max_k(cfg.k_grid);
            std::vector<double> expectation(k_top);
            std::vector<Fraction> exact;
            if (theory->parsed()) {
                TheoryOptions options;
                options.term_budget = budget;
                options.numerics = parse_numerics(numerics);
                options.threads = threads;
                expectation = collision_expectations(x, k_top, options);
            } else {
                exact = bruteforce_collision_expectations(x, k_top);
                for (std::uint32_t k = 0; k < k_top; ++k) expectation[k] = exact[k].value();
            }
            if (per_k) {
                std::vector<TheoryPerKRow> rows;
                for (std::uint32_t k = 1; k <= k_top; ++k) rows.push_back({k, expectation[k - 1]});
                emit(cfg.output, out, [&](std::ostream& os) { write_results_csv(os, std::span<const TheoryPerKRow>(rows)); });
                return kExitOk;
            }
            const double jaccard = static_cast<double>(x.a()) / static_cast<double>(x.f());
            std::vector<TheoryAggregateRow> rows;
            for (auto K : cfg.k_grid) {
                double mean = 0.0;
                if (exact.empty()) {
                    CompensatedSum sum;
                    for (std::uint32_t k = 0; k < K; ++k) sum.add(expectation[k]);
                    mean = sum.value() / K;
                } else {
                    std::uint64_t hits = 0;
                    for (std::uint32_t k = 0; k < K; ++k) hits += exact[k].num;
                    mean = static_cast<double>(hits) / (static_cast<double>(exact[0].den) * K);
                }
                rows.push_back({K, mean, (mean - jaccard) * (mean - jaccard)});
            }
            emit(cfg.output, out, [&](std::ostream& os) { write_results_csv(os, std::span<const TheoryAggregateRow>(rows)); });
            return kExitOk;
        }

        if (mc->parsed()) {
            cfg.kind = ExperimentKind::Mc;
            const auto [v, w] = resolve_pair(pair);
            if (shift > 0) cfg.k_grid = {shift};
            validate_run_config(cfg, v.dim());
            if (shift > 0) {
                std::ostringstream csv;
                csv << "k,scheme,estimate,stderr\n";
                for (Scheme s : cfg.schemes) {
                    const auto e = mc_per_k_collision(v, w, shift, s, cfg.trials, cfg.seed, threads);
                    csv << shift << ',' << scheme_name(s) << ',' << format_double(e.estimate) << ','
                        << format_double(e.std_error) << '\n';
                }
                emit(cfg.output, out, [&](std::ostream& os) { os << csv.str(); });
                return kExitOk;
            }
            std::vector<McResultRow> rows;
            for (Scheme s : cfg.schemes) {
                auto part = mc_bias_mse(v, w, cfg.k_grid, s, cfg.trials, cfg.seed, threads);
                rows.insert(rows.end(), part.begin(), part.end());
            }
            emit(cfg.output, out, [&](std::ostream& os) { write_results_csv(os, std::span<const McResultRow>(rows)); });
            return kExitOk;
        }

        if (mae->parsed()) {
            cfg.kind = ExperimentKind::Mae;
            SparseDataset data;
            if (!input.empty()) {
                data = load_sparse_dataset(input);
            } else if (synth_n > 0 && pair.dim > 0) {
                data.dim = pair.dim;
                data.vectors = synth_dataset(synth_n, pair.dim, cfg.seed);
            } else {
                fail(ErrorKind::InvalidArgument, "give --input or --synth-n with --synth-D");
            }
            validate_run_config(cfg, data.dim);
            const MaeRun run = mae_all_pairs(data.vectors, cfg.k_grid, cfg.schemes, cfg.reps, cfg.seed, threads);
            if (run.skipped_pairs > 0) err << "skipped " << run.skipped_pairs << " pairs involving empty vectors\n";
            emit(cfg.output, out, [&](std::ostream& os) { write_results_csv(os, std::span<const MaeResultRow>(run.rows)); });
            return kExitOk;
        }

        if (synth->parsed()) {
            cfg.kind = ExperimentKind::Synth;
            SparseDataset data;
            data.dim = pair.dim;
            if (synth_n > 0) {
                data.vectors = synth_dataset(synth_n, pair.dim, cfg.seed);
            } else {
                const Placement placement = pair.placement == "structured" ? Placement::Structured : Placement::Random;
                auto [v, w] = synth_pair({pair.dim, pair.f, pair.a, placement, cfg.seed});
                data.vectors = {std::move(v), std::move(w)};
            }
            emit(cfg.output, out, [&](std::ostream& os) { write_sparse_dataset(os, data); });
            return kExitOk;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace cmh
