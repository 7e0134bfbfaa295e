#include "cminhash/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "cminhash/error.hpp"
#include "cminhash/estimators.hpp"
#include "cminhash/parallel.hpp"
#include "cminhash/rng.hpp"
#include "cminhash/theory.hpp"

namespace cmh {

namespace {

constexpr std::uint64_t kTrialBlock = 512;

std::uint64_t block_count(std::uint64_t trials) { return (trials + kTrialBlock - 1) / kTrialBlock; }

void check_pair(const BinaryVector& v, const BinaryVector& w) {
    if (v.dim() != w.dim()) fail(ErrorKind::InvalidArgument, "dimension mismatch between the two vectors");
    if (v.empty() || w.empty()) fail(ErrorKind::EmptyVector, "Monte Carlo runs need two nonempty vectors");
}

void check_grid(std::span<const std::uint32_t> k_grid, Scheme scheme, Index dim) {
    if (k_grid.empty()) fail(ErrorKind::InvalidArgument, "K grid is empty");
    for (auto K : k_grid) {
        if (K == 0) fail(ErrorKind::InvalidArgument, "K must be positive");
        if (is_circulant(scheme) && K > dim)
            fail(ErrorKind::InvalidArgument, "circulant schemes need K <= D (K=" + std::to_string(K) +
                                                 ", D=" + std::to_string(dim) + ")");
    }
}

Index min_shifted(std::span<const Index> positions, const Permutation& pi, Index k) {
    const Index dim = pi.dim();
    const Index back = k % dim;
    Index best = std::numeric_limits<Index>::max();
    for (Index t : positions) {
        const Index slot0 = t - 1;
        best = std::min(best, pi.forward()[slot0 >= back ? slot0 - back : slot0 + dim - back]);
    }
    return best;
}

// Collision of the k-th hash in one trial, building only the permutations shift k needs.
bool collides_at(const BinaryVector& v, const BinaryVector& w, Index k, Scheme scheme, std::uint64_t seed,
                 std::vector<Index>& pv, std::vector<Index>& pw) {
    const Index dim = v.dim();
    if (scheme == Scheme::MinHash) {
        const Permutation p = generate_permutation(dim, derive_seed(seed, Purpose::MinHash, k - 1));
        Index hv = std::numeric_limits<Index>::max(), hw = hv;
        for (Index i : v.nonzeros()) hv = std::min(hv, p.at(i));
        for (Index i : w.nonzeros()) hw = std::min(hw, p.at(i));
        return hv == hw;
    }
    const Permutation pi = generate_permutation(dim, derive_seed(seed, Purpose::Pi));
    Permutation sigma;
    const Permutation* shuffle = nullptr;
    if (scheme == Scheme::SigmaPi) {
        sigma = generate_permutation(dim, derive_seed(seed, Purpose::Sigma));
        shuffle = &sigma;
    } else if (scheme == Scheme::PiPi) {
        shuffle = &pi;
    }
    pv.assign(v.nonzeros().begin(), v.nonzeros().end());
    pw.assign(w.nonzeros().begin(), w.nonzeros().end());
    if (shuffle != nullptr) {
        for (auto& t : pv) t = shuffle->at(t);
        for (auto& t : pw) t = shuffle->at(t);
    }
    return min_shifted(pv, pi, k) == min_shifted(pw, pi, k);
}

McResultRow summarize(std::uint32_t K, Scheme scheme, const std::vector<std::uint64_t>& histogram, double jaccard) {
    long double trials = 0, sum = 0;
    for (std::size_t c = 0; c < histogram.size(); ++c) {
        trials += histogram[c];
        sum += static_cast<long double>(histogram[c]) * c;
    }
    const long double mean = sum / (trials * K);
    long double var = 0, mse = 0, mse_sq = 0;
    for (std::size_t c = 0; c < histogram.size(); ++c) {
        if (histogram[c] == 0) continue;
        const long double est = static_cast<long double>(c) / K;
        const long double dev = est - mean;
        const long double err2 = (est - jaccard) * (est - jaccard);
        var += histogram[c] * dev * dev;
        mse += histogram[c] * err2;
        mse_sq += histogram[c] * err2 * err2;
    }
    var /= trials;
    mse /= trials;
    mse_sq /= trials;

    McResultRow row;
    row.K = K;
    row.scheme = scheme;
    row.mean = static_cast<double>(mean);
    row.bias2 = static_cast<double>((mean - jaccard) * (mean - jaccard));
    row.variance = static_cast<double>(var);
    row.mse = static_cast<double>(mse);
    row.trials = static_cast<std::uint64_t>(trials);
    if (trials > 1) {
        row.stderr_mean = static_cast<double>(std::sqrt(var / (trials - 1)));
        row.stderr_mse = static_cast<double>(std::sqrt(std::max<long double>(mse_sq - mse * mse, 0) / (trials - 1)));
    }
    return row;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t master, Scheme scheme, std::uint64_t trial) noexcept {
    return derive_seed(derive_seed(master, Purpose::Trial, static_cast<std::uint64_t>(scheme)), Purpose::Trial, trial);
}

std::pair<BinaryVector, BinaryVector> synth_pair(const SyntheticPairSpec& spec) {
    if (spec.dim == 0) fail(ErrorKind::InvalidDimension, "D must be positive");
    if (spec.a > spec.f || spec.f > spec.dim)
        fail(ErrorKind::InvalidArgument, "need 0 <= a <= f <= D (got D=" + std::to_string(spec.dim) +
                                             " f=" + std::to_string(spec.f) + " a=" + std::to_string(spec.a) + ")");
    std::vector<Location> classes(spec.dim, Location::Dash);
    std::fill_n(classes.begin(), spec.a, Location::O);
    std::fill(classes.begin() + spec.a, classes.begin() + spec.f, Location::Cross);
    if (spec.placement == Placement::Random) {
        CounterRng rng(derive_seed(spec.seed, Purpose::Synth));
        for (std::uint32_t i = spec.dim - 1; i > 0; --i)
            std::swap(classes[i], classes[rng.below(std::uint64_t{i} + 1)]);
    }
    return pair_from_location(LocationVector(std::move(classes)));
}

std::vector<BinaryVector> synth_dataset(std::uint32_t n, std::uint32_t dim, std::uint64_t seed) {
    if (dim == 0) fail(ErrorKind::InvalidDimension, "D must be positive");
    constexpr std::uint32_t kTopics = 10;
    CounterRng rng(derive_seed(seed, Purpose::Dataset));
    std::vector<std::vector<bool>> topics(kTopics, std::vector<bool>(dim));
    for (auto& topic : topics) {
        const double density = 0.1 + 0.3 * rng.uniform();
        for (std::uint32_t i = 0; i < dim; ++i) topic[i] = rng.uniform() < density;
    }
    std::vector<BinaryVector> out;
    out.reserve(n);
    for (std::uint32_t r = 0; r < n; ++r) {
        const auto& topic = topics[r % kTopics];
        const double keep = 0.5 + 0.45 * rng.uniform();
        const double noise = 0.01 + 0.09 * rng.uniform();
        std::vector<Index> nz;
        for (std::uint32_t i = 0; i < dim; ++i)
            if (topic[i] ? rng.uniform() < keep : rng.uniform() < noise) nz.push_back(i + 1);
        if (nz.empty()) nz.push_back(static_cast<Index>(rng.below(dim) + 1));
        out.emplace_back(dim, std::move(nz));
    }
    return out;
}

CollisionEstimate mc_per_k_collision(const BinaryVector& v, const BinaryVector& w, std::uint32_t k, Scheme scheme,
                                     std::uint64_t trials, std::uint64_t seed, unsigned threads) {
    check_pair(v, w);
    if (trials == 0) fail(ErrorKind::InvalidArgument, "trials must be positive");
    if (k < 1 || (is_circulant(scheme) && k > v.dim()))
        fail(ErrorKind::InvalidArgument, "shift k=" + std::to_string(k) + " outside [1, D]");
    std::vector<std::uint64_t> hits(block_count(trials), 0);
    parallel_for(hits.size(), resolve_threads(threads), [&](std::size_t b) {
        std::vector<Index> pv, pw;
        const std::uint64_t end = std::min(trials, (b + 1) * kTrialBlock);
        for (std::uint64_t t = b * kTrialBlock; t < end; ++t)
            hits[b] += collides_at(v, w, k, scheme, trial_seed(seed, scheme, t), pv, pw);
    });
    const auto total = std::accumulate(hits.begin(), hits.end(), std::uint64_t{0});
    const double p = static_cast<double>(total) / static_cast<double>(trials);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials))};
}

std::vector<McResultRow> mc_bias_mse(const BinaryVector& v, const BinaryVector& w, std::span<const std::uint32_t> k_grid,
                                     Scheme scheme, std::uint64_t trials, std::uint64_t seed, unsigned threads) {
    check_pair(v, w);
    check_grid(k_grid, scheme, v.dim());
    if (trials == 0) fail(ErrorKind::InvalidArgument, "trials must be positive");
    const double jaccard = exact_pair_stats(v, w).jaccard();
    const std::uint32_t k_max = *std::max_element(k_grid.begin(), k_grid.end());

    // Histograms of the collision count per grid entry; integer merges keep the
    // result independent of the worker count.
    using Histograms = std::vector<std::vector<std::uint64_t>>;
    std::vector<Histograms> blocks(block_count(trials));
    parallel_for(blocks.size(), resolve_threads(threads), [&](std::size_t b) {
        Histograms hist(k_grid.size());
        for (std::size_t g = 0; g < k_grid.size(); ++g) hist[g].assign(k_grid[g] + 1, 0);
        std::vector<Index> hv(k_max), hw(k_max), scratch;
        std::vector<std::uint32_t> prefix(k_max + 1);
        const std::uint64_t end = std::min(trials, (b + 1) * kTrialBlock);
        for (std::uint64_t t = b * kTrialBlock; t < end; ++t) {
            const SketchFamily family(scheme, v.dim(), k_max, trial_seed(seed, scheme, t));
            family.hash_into(v, hv, scratch);
            family.hash_into(w, hw, scratch);
            prefix[0] = 0;
            for (std::uint32_t k = 0; k < k_max; ++k) prefix[k + 1] = prefix[k] + (hv[k] == hw[k]);
            for (std::size_t g = 0; g < k_grid.size(); ++g) ++hist[g][prefix[k_grid[g]]];
        }
        blocks[b] = std::move(hist);
    });

    std::vector<McResultRow> rows;
    rows.reserve(k_grid.size());
    for (std::size_t g = 0; g < k_grid.size(); ++g) {
        std::vector<std::uint64_t> merged(k_grid[g] + 1, 0);
        for (const auto& block : blocks)
            for (std::size_t c = 0; c < merged.size(); ++c) merged[c] += block[g][c];
        rows.push_back(summarize(k_grid[g], scheme, merged, jaccard));
    }
    return rows;
}

MaeRun mae_all_pairs(std::span<const BinaryVector> dataset, std::span<const std::uint32_t> k_grid,
                     std::span<const Scheme> schemes, std::uint32_t reps, std::uint64_t seed, unsigned threads) {
    if (reps == 0) fail(ErrorKind::InvalidArgument, "reps must be positive");
    if (schemes.empty()) fail(ErrorKind::InvalidArgument, "no schemes requested");
    std::vector<std::size_t> usable;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        if (dataset[i].dim() != dataset.front().dim())
            fail(ErrorKind::InvalidArgument, "dataset vectors do not share one dimension");
        if (!dataset[i].empty()) usable.push_back(i);
    }
    if (usable.size() < 2) fail(ErrorKind::InvalidArgument, "MAE needs at least two nonempty vectors");
    const Index dim = dataset.front().dim();
    for (Scheme s : schemes) check_grid(k_grid, s, dim);
    const std::uint32_t k_max = *std::max_element(k_grid.begin(), k_grid.end());

    MaeRun run;
    const std::uint64_t n = dataset.size();
    run.pairs = usable.size() * (usable.size() - 1) / 2;
    run.skipped_pairs = n * (n - 1) / 2 - run.pairs;

    struct PairRef {
        std::uint32_t left, right;
        double jaccard;
    };
    std::vector<PairRef> pairs;
    pairs.reserve(run.pairs);
    for (std::size_t x = 0; x < usable.size(); ++x)
        for (std::size_t y = x + 1; y < usable.size(); ++y)
            pairs.push_back({static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y),
                             exact_pair_stats(dataset[usable[x]], dataset[usable[y]]).jaccard()});

    // One task per (scheme, rep); each yields the per-K MAE of that repetition.
    const std::size_t tasks = schemes.size() * reps;
    std::vector<std::vector<double>> task_mae(tasks);
    parallel_for(tasks, resolve_threads(threads), [&](std::size_t task) {
        const Scheme scheme = schemes[task / reps];
        const std::uint64_t rep = task % reps;
        const SketchFamily family(scheme, dim, k_max, trial_seed(seed, scheme, rep));
        std::vector<Index> sketches(usable.size() * k_max), scratch;
        for (std::size_t x = 0; x < usable.size(); ++x)
            family.hash_into(dataset[usable[x]], std::span(sketches).subspan(x * k_max, k_max), scratch);
        std::vector<CompensatedSum> sums(k_grid.size());
        std::vector<std::uint32_t> prefix(k_max + 1);
        for (const auto& pr : pairs) {
            const Index* hl = &sketches[pr.left * std::size_t{k_max}];
            const Index* hr = &sketches[pr.right * std::size_t{k_max}];
            prefix[0] = 0;
            for (std::uint32_t k = 0; k < k_max; ++k) prefix[k + 1] = prefix[k] + (hl[k] == hr[k]);
            for (std::size_t g = 0; g < k_grid.size(); ++g)
                sums[g].add(std::abs(static_cast<double>(prefix[k_grid[g]]) / k_grid[g] - pr.jaccard));
        }
        task_mae[task].resize(k_grid.size());
        for (std::size_t g = 0; g < k_grid.size(); ++g)
            task_mae[task][g] = sums[g].value() / static_cast<double>(pairs.size());
    });

    for (std::size_t s = 0; s < schemes.size(); ++s) {
        for (std::size_t g = 0; g < k_grid.size(); ++g) {
            CompensatedSum total;
            for (std::uint32_t r = 0; r < reps; ++r) total.add(task_mae[s * reps + r][g]);
            run.rows.push_back({k_grid[g], schemes[s], total.value() / reps, reps});
        }
    }
    return run;
}

}  // namespace cmh
