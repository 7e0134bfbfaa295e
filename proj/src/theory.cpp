#include "cminhash/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cminhash/error.hpp"
#include "cminhash/parallel.hpp"
#include "cminhash/permutation.hpp"

namespace cmh {

namespace {

using u128 = unsigned __int128;

constexpr std::uint32_t kExactMaxDim = 64;

std::size_t slot(Location q) noexcept { return static_cast<std::size_t>(q); }

// Pascal triangle up to n = 130; C(130, 65) < 2^128.
const std::vector<std::vector<u128>>& pascal() {
    static const auto table = [] {
        std::vector<std::vector<u128>> t(131);
        for (std::size_t n = 0; n < t.size(); ++n) {
            t[n].assign(n + 1, 1);
            for (std::size_t r = 1; r < n; ++r) t[n][r] = t[n - 1][r - 1] + t[n - 1][r];
        }
        return t;
    }();
    return table;
}

struct Choose {
    long n;
    long r;
};

// Products and ratios of binomial coefficients with C(n, r) = 0 for r < 0 or r > n.
class Binomials {
public:
    Binomials(std::uint32_t dim, Numerics numerics) {
        exact_ = numerics == Numerics::ExactInteger || (numerics == Numerics::Auto && dim <= kExactMaxDim);
        if (exact_ && dim > kExactMaxDim)
            fail(ErrorKind::InvalidArgument, "exact integer numerics support D <= " + std::to_string(kExactMaxDim));
        if (!exact_) {
            log_factorial_.resize(dim + 2);
            for (std::size_t n = 0; n < log_factorial_.size(); ++n)
                log_factorial_[n] = std::lgamma(static_cast<double>(n) + 1.0);
        }
    }

    bool exact() const noexcept { return exact_; }

    /// prod C(num) / (extra * prod C(den)); zero when any numerator coefficient vanishes.
    template <std::size_t N, std::size_t M>
    double ratio(const std::array<Choose, N>& num, const std::array<Choose, M>& den, double extra = 1.0) const {
        for (const auto& c : num)
            if (c.r < 0 || c.r > c.n) return 0.0;
        if (exact_) {
            u128 top = 1;
            u128 bottom = 1;
            for (const auto& c : num) top *= pascal()[c.n][c.r];
            for (const auto& c : den) bottom *= pascal()[c.n][c.r];
            return static_cast<double>(static_cast<long double>(top) / static_cast<long double>(bottom) / extra);
        }
        double log_value = -std::log(extra);
        for (const auto& c : num) log_value += log_choose(c);
        for (const auto& c : den) log_value -= log_choose(c);
        return std::exp(log_value);
    }

private:
    double log_choose(const Choose& c) const noexcept {
        return log_factorial_[c.n] - log_factorial_[c.r] - log_factorial_[c.n - c.r];
    }

    bool exact_ = true;
    std::vector<double> log_factorial_;
};

// 0 when the denominator is 0: the matching hypergeometric count is forced to 0.
double ratio(double num, double den) noexcept { return den == 0.0 ? 0.0 : num / den; }

template <class Visit>
void visit_z(const CirculantCounts& c, std::uint32_t draws, Visit&& visit) {
    ZDraw z;
    const auto& nm = c.minus;
    const auto& np = c.plus;
    for (z.minus[0] = 0; z.minus[0] <= nm[0]; ++z.minus[0]) {
        for (z.minus[1] = 0; z.minus[1] <= nm[1]; ++z.minus[1]) {
            for (z.minus[2] = 0; z.minus[2] <= nm[2]; ++z.minus[2]) {
                const std::uint32_t used_minus = z.minus[0] + z.minus[1] + z.minus[2];
                if (used_minus > draws) break;
                for (z.plus[0] = 0; z.plus[0] <= np[0]; ++z.plus[0]) {
                    if (used_minus + z.plus[0] > draws) break;
                    for (z.plus[1] = 0; z.plus[1] <= np[1]; ++z.plus[1]) {
                        const std::uint32_t used = used_minus + z.plus[0] + z.plus[1];
                        if (used > draws) break;
                        if (draws - used > np[2]) continue;
                        z.plus[2] = draws - used;
                        visit(static_cast<const ZDraw&>(z));
                    }
                }
            }
        }
    }
}

double pmf_with(const Binomials& binom, const CirculantCounts& c, const ZDraw& z, std::uint32_t draws) {
    const std::uint32_t total = std::accumulate(c.minus.begin(), c.minus.end(), 0u) +
                                std::accumulate(c.plus.begin(), c.plus.end(), 0u);
    const std::array<Choose, 6> num{{{c.minus[0], z.minus[0]},
                                     {c.minus[1], z.minus[1]},
                                     {c.minus[2], z.minus[2]},
                                     {c.plus[0], z.plus[0]},
                                     {c.plus[1], z.plus[1]},
                                     {c.plus[2], z.plus[2]}}};
    const std::array<Choose, 1> den{{{total, draws}}};
    return binom.ratio(num, den);
}

Theorem2Workspace workspace_with(const Binomials& binom, const PairShape& shape, const CirculantCounts& c,
                                 const ZDraw& z, Location sharp_class) {
    const long dim = shape.dim;
    const long f = shape.f;
    const long a = shape.a;
    Theorem2Workspace ws;
    ws.z = z;
    ws.b0 = z.plus[0] + z.plus[1] + z.plus[2];
    ws.high_slots = static_cast<std::uint32_t>(dim - static_cast<long>(c.j) - ws.b0);
    ws.r1 = static_cast<std::uint32_t>(a - z.minus[0] - z.plus[0]);
    ws.r2 = static_cast<std::uint32_t>(f - a - z.minus[1] - z.plus[1]);
    ws.r3 = static_cast<std::uint32_t>(dim - f - z.minus[2] - z.plus[2]);
    ws.sharp[slot(sharp_class)] = true;

    const long r12 = static_cast<long>(ws.r1) + ws.r2;
    const long r3 = ws.r3;
    const long b0 = ws.b0;
    const long high = ws.high_slots;
    const std::array<Choose, 2> den{{{dim - f, r3}, {f, r12}}};
    if (r12 > 0) {
        const std::array<Choose, 2> num{{{b0, r3}, {high, r12 - 1}}};
        ws.ptilde[0] = ws.ptilde[1] = binom.ratio(num, den, static_cast<double>(r12));
    }
    if (r3 > 0) {
        const std::array<Choose, 2> num{{{b0, r3 - 1}, {high, r12}}};
        ws.ptilde[2] = binom.ratio(num, den, static_cast<double>(r3));
    }
    ws.jstar = ratio(static_cast<double>(a - static_cast<long>(ws.r1)), static_cast<double>(f - r12));
    if (high > 0) {
        for (std::size_t q = 0; q < 3; ++q) {
            const double own_o = q == 0 ? 1.0 : 0.0;
            const double own_non_dash = q != 2 ? 1.0 : 0.0;
            ws.jbar[q] = (static_cast<double>(ws.r1) - own_o) / static_cast<double>(high) +
                         (1.0 - (static_cast<double>(r12) - own_non_dash) / static_cast<double>(high)) * ws.jstar;
        }
    }
    return ws;
}

std::uint32_t checked_f(const LocationVector& x) {
    if (x.dim() == 0) fail(ErrorKind::InvalidDimension, "location vector is empty");
    if (x.f() == 0) fail(ErrorKind::UndefinedSimilarity, "pair has no nonzero coordinate (f = 0)");
    return x.f();
}

void check_shift(const LocationVector& x, Index k) {
    if (k < 1 || k > x.dim())
        fail(ErrorKind::InvalidArgument, "shift k=" + std::to_string(k) + " outside [1, " + std::to_string(x.dim()) + "]");
}

double evaluate_shift(const LocationVector& x, Index k, const Binomials& binom, unsigned threads) {
    const PairShape shape{x.dim(), x.f(), x.a()};
    const std::uint32_t draws = shape.dim - shape.f;
    std::vector<double> partial(shape.dim, 0.0);
    parallel_for(shape.dim, threads, [&](std::size_t slot_j) {
        const auto j = static_cast<Index>(slot_j + 1);
        const CirculantCounts counts = class_counts(x, j, k);
        const Location sharp_class = x.at(circulant_index_inverse(j, k, shape.dim));
        CompensatedSum sum;
        visit_z(counts, draws, [&](const ZDraw& z) {
            const double p = pmf_with(binom, counts, z, draws);
            if (p == 0.0) return;
            const Theorem2Workspace ws = workspace_with(binom, shape, counts, z, sharp_class);
            const double bracket = psi(ws, counts, Location::O) + psi(ws, counts, Location::Cross) +
                                   psi(ws, counts, Location::Dash) + diagonal_term(ws, counts);
            sum.add(p * bracket);
        });
        partial[slot_j] = sum.value();
    });
    CompensatedSum total;
    for (double v : partial) total.add(v);
    return std::clamp(total.value(), 0.0, 1.0);
}

void check_budget(const LocationVector& x, Index k, const TheoryOptions& options) {
    const std::uint64_t terms = theorem2_term_count(x, k);
    if (terms > options.term_budget)
        fail(ErrorKind::Budget, "evaluation needs " + std::to_string(terms) + " terms for k=" + std::to_string(k) +
                                    ", budget is " + std::to_string(options.term_budget));
}

}  // namespace

LocationVector::LocationVector(std::vector<Location> classes) : classes_(std::move(classes)) {
    for (Location c : classes_) ++totals_[slot(c)];
}

std::vector<Index> LocationVector::members(Location q) const {
    std::vector<Index> out;
    for (Index i = 1; i <= dim(); ++i)
        if (at(i) == q) out.push_back(i);
    return out;
}

LocationVector location_vector(const BinaryVector& v, const BinaryVector& w) {
    if (v.dim() != w.dim())
        fail(ErrorKind::InvalidArgument, "dimension mismatch: " + std::to_string(v.dim()) + " vs " + std::to_string(w.dim()));
    std::vector<Location> classes(v.dim(), Location::Dash);
    for (Index i : v.nonzeros()) classes[i - 1] = Location::Cross;
    for (Index i : w.nonzeros()) classes[i - 1] = classes[i - 1] == Location::Cross ? Location::O : Location::Cross;
    LocationVector x(std::move(classes));
    if (x.f() == 0) fail(ErrorKind::UndefinedSimilarity, "pair has no nonzero coordinate (f = 0)");
    return x;
}

std::pair<BinaryVector, BinaryVector> pair_from_location(const LocationVector& x) {
    std::vector<Index> v, w;
    bool to_v = true;
    for (Index i = 1; i <= x.dim(); ++i) {
        switch (x.at(i)) {
            case Location::O:
                v.push_back(i);
                w.push_back(i);
                break;
            case Location::Cross:
                (to_v ? v : w).push_back(i);
                to_v = !to_v;
                break;
            case Location::Dash: break;
        }
    }
    return {BinaryVector(x.dim(), std::move(v)), BinaryVector(x.dim(), std::move(w))};
}

CirculantCounts class_counts(const LocationVector& x, Index j, Index k) {
    const Index dim = x.dim();
    if (j < 1 || j > dim) fail(ErrorKind::InvalidArgument, "threshold j=" + std::to_string(j) + " out of range");
    check_shift(x, k);
    CirculantCounts c;
    c.j = j;
    c.k = k;
    for (Index i = 1; i <= dim; ++i) {
        auto& side = circulant_index(i, k, dim) <= j ? c.minus : c.plus;
        ++side[slot(x.at(i))];
    }
    return c;
}

double hypergeom_pmf(const CirculantCounts& counts, const ZDraw& z, std::uint32_t draws, Numerics numerics) {
    std::uint32_t total = 0;
    std::uint32_t drawn = 0;
    bool inside = true;
    for (std::size_t q = 0; q < 3; ++q) {
        total += counts.minus[q] + counts.plus[q];
        drawn += z.minus[q] + z.plus[q];
        inside = inside && z.minus[q] <= counts.minus[q] && z.plus[q] <= counts.plus[q];
    }
    if (total == 0 || draws > total)
        fail(ErrorKind::InvalidArgument, "draws must not exceed the population size");
    if (!inside || drawn != draws) return 0.0;
    return pmf_with(Binomials(total, numerics), counts, z, draws);
}

void for_each_z(const CirculantCounts& counts, std::uint32_t draws, const std::function<void(const ZDraw&)>& visit) {
    visit_z(counts, draws, visit);
}

std::vector<ZDraw> enumerate_z_domain(const CirculantCounts& counts, std::uint32_t draws) {
    std::vector<ZDraw> out;
    visit_z(counts, draws, [&](const ZDraw& z) { out.push_back(z); });
    return out;
}

std::uint64_t z_domain_size(const CirculantCounts& c, std::uint32_t draws) {
    std::uint64_t n = 0;
    for (std::uint32_t m0 = 0; m0 <= c.minus[0]; ++m0)
        for (std::uint32_t m1 = 0; m1 <= c.minus[1]; ++m1)
            for (std::uint32_t p0 = 0; p0 <= c.plus[0]; ++p0)
                for (std::uint32_t p1 = 0; p1 <= c.plus[1]; ++p1) {
                    const long rest = static_cast<long>(draws) - m0 - m1 - p0 - p1;
                    if (rest < 0) continue;
                    const long lo = std::max(0L, rest - static_cast<long>(c.plus[2]));
                    const long hi = std::min<long>(c.minus[2], rest);
                    if (hi >= lo) n += static_cast<std::uint64_t>(hi - lo + 1);
                }
    return n;
}

Theorem2Workspace theorem2_workspace(const PairShape& shape, const CirculantCounts& counts, const ZDraw& z,
                                     Location sharp_class, Numerics numerics) {
    return workspace_with(Binomials(shape.dim, numerics), shape, counts, z, sharp_class);
}

double psi(const Theorem2Workspace& ws, const CirculantCounts& counts, Location q_class) {
    const std::size_t q = slot(q_class);
    const bool dash = q_class == Location::Dash;
    const double pt = ws.ptilde[q];
    if (pt == 0.0) return 0.0;

    // Position j holds the argmin coordinate, so it is non-DASH exactly when q is.
    // Given Z, j# (class p, always in A-(j)) must then be a non-DASH-shifted coordinate
    // for q in {O, CROSS} and a DASH-shifted one for q = DASH.
    std::size_t p = 0;
    while (!ws.sharp[p]) ++p;
    const double n_p = counts.minus[p];
    const double z_p = ws.z.minus[p];
    const double sharp_prob = dash ? ratio(z_p, n_p) : 1.0 - ratio(z_p, n_p);

    double value = 0.0;

    // i* > j: the argmin sits in A+(j); its partner position i* lies above j.
    const double above = static_cast<double>(counts.plus[q]) - ws.z.plus[q];
    if (above > 0.0 && ws.high_slots > 0) value += above * sharp_prob * pt * ws.jbar[q];

    // i* < j: i and j# both lie in A-(j); the partner at i* is uniform over the
    // non-DASH coordinates with DASH-shifted positions, hence J*.
    const std::uint32_t below = counts.minus[q] - (p == q ? 1u : 0u);
    if (below > 0 && ws.jstar != 0.0) {
        const double n_q = counts.minus[q];
        const double z_q = ws.z.minus[q];
        double joint = 0.0;
        if (p == q)
            joint = (1.0 - ratio(z_q, n_q)) * (dash ? ratio(z_q, n_q - 1.0) : 1.0 - ratio(z_q, n_q - 1.0));
        else
            joint = (1.0 - ratio(z_q, n_q)) * sharp_prob;
        value += below * joint * pt * ws.jstar;
    }
    return value;
}

double diagonal_term(const Theorem2Workspace& ws, const CirculantCounts& counts) {
    if (!ws.sharp[0]) return 0.0;
    return (1.0 - ratio(ws.z.minus[0], counts.minus[0])) * ws.ptilde[0];
}

std::uint64_t theorem2_term_count(const LocationVector& x, Index k) {
    check_shift(x, k);
    const std::uint32_t draws = x.dim() - x.f();
    std::uint64_t n = 0;
    for (Index j = 1; j <= x.dim(); ++j) n += z_domain_size(class_counts(x, j, k), draws);
    return n;
}

double collision_expectation_k(const LocationVector& x, Index k, const TheoryOptions& options) {
    checked_f(x);
    check_shift(x, k);
    check_budget(x, k, options);
    const Binomials binom(x.dim(), options.numerics);
    return evaluate_shift(x, k, binom, resolve_threads(options.threads));
}

std::vector<double> collision_expectations(const LocationVector& x, Index K, const TheoryOptions& options) {
    checked_f(x);
    if (K < 1 || K > x.dim())
        fail(ErrorKind::InvalidArgument, "K=" + std::to_string(K) + " outside [1, " + std::to_string(x.dim()) + "]");
    for (Index k = 1; k <= K; ++k) check_budget(x, k, options);
    const Binomials binom(x.dim(), options.numerics);
    const unsigned threads = resolve_threads(options.threads);
    std::vector<double> out(K);
    for (Index k = 1; k <= K; ++k) out[k - 1] = evaluate_shift(x, k, binom, threads);
    return out;
}

double estimator_mean(const LocationVector& x, Index K, const TheoryOptions& options) {
    const auto per_k = collision_expectations(x, K, options);
    CompensatedSum sum;
    for (double e : per_k) sum.add(e);
    return sum.value() / static_cast<double>(K);
}

double bias_squared(const LocationVector& x, Index K, const TheoryOptions& options) {
    const double mean = estimator_mean(x, K, options);
    // J from the exact rational a/f.
    const double bias = mean - static_cast<double>(x.a()) / static_cast<double>(x.f());
    return bias * bias;
}

Fraction bruteforce_collision_expectation_k(const LocationVector& x, Index k) {
    return bruteforce_collision_expectations(x, k).back();
}

std::vector<Fraction> bruteforce_collision_expectations(const LocationVector& x, Index K) {
    const Index dim = x.dim();
    checked_f(x);
    if (dim > kOracleMaxDim)
        fail(ErrorKind::Budget, "brute-force oracle enumerates D! permutations and refuses D=" + std::to_string(dim) +
                                    " > " + std::to_string(kOracleMaxDim));
    if (K < 1 || K > dim) fail(ErrorKind::InvalidArgument, "K outside [1, D]");

    // Algorithm 3 evaluated literally on dense 0-based arrays.
    const auto [v, w] = pair_from_location(x);
    const auto dense = [dim](const BinaryVector& b) {
        std::vector<int> d(dim, 0);
        for (Index i : b.nonzeros()) d[i - 1] = 1;
        return d;
    };
    const std::vector<int> dv = dense(v);
    const std::vector<int> dw = dense(w);
    const int n = static_cast<int>(dim);

    std::vector<int> pi(dim);
    std::iota(pi.begin(), pi.end(), 1);
    std::vector<int> shuffled_v(dim), shuffled_w(dim), rotated(dim);
    std::vector<std::uint64_t> hits(K, 0);
    std::uint64_t total = 0;
    do {
        ++total;
        // v'_{pi(i)} = v_i
        for (int i = 0; i < n; ++i) {
            shuffled_v[pi[i] - 1] = dv[i];
            shuffled_w[pi[i] - 1] = dw[i];
        }
        for (Index k = 1; k <= K; ++k) {
            // pi shifted circulantly right by k: rotated[t] = pi[t - k]
            for (int t = 0; t < n; ++t) rotated[t] = pi[((t - static_cast<int>(k)) % n + n) % n];
            int hv = n + 1, hw = n + 2;  // empty vectors never collide
            for (int t = 0; t < n; ++t) {
                if (shuffled_v[t]) hv = std::min(hv, rotated[t]);
                if (shuffled_w[t]) hw = std::min(hw, rotated[t]);
            }
            hits[k - 1] += hv == hw;
        }
    } while (std::next_permutation(pi.begin(), pi.end()));

    std::vector<Fraction> out(K);
    for (Index k = 0; k < K; ++k) out[k] = Fraction{hits[k], total};
    return out;
}

}  // namespace cmh
