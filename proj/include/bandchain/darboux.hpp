#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bandchain/band_core.hpp"
#include "bandchain/errors.hpp"

namespace bandchain {

// Free starting data for the chain factorization of a unit lower
// (p+1)-banded matrix: p(p-1)/2 nonzero values in row-major order over
// the triangular head of the gamma table (row 1 carries p-1 values,
// row 2 carries p-2, ..., row p-1 carries 1).  Empty for p = 1.
struct FreeParameters {
    std::vector<double> values;

    static std::size_t expected_count(int p) {
        return p > 1 ? std::size_t(p) * std::size_t(p - 1) / 2 : 0;
    }

    static FreeParameters ones(int p) {
        return FreeParameters{std::vector<double>(expected_count(p), 1.0)};
    }
};

// Bookkeeping grid for the bidiagonal chain entries, indexed by
// 1-based row m (m = 1..n-1) and column s (s = 0..p).  The entry at
// (m, s) carries the global gamma index m*(p+1) - p + s, so row m
// spans gamma_{(m-1)(p+1)+1} .. gamma_{m(p+1)}.  Column 0 mirrors the
// diagonal of U when a caller chooses to store it (the lower-chain
// recurrence never touches it); column s >= 1 holds the subdiagonal
// entry of chain factor s at matrix position (m, m-1), rows counted
// from 0.  Rows/columns here are the only 1-based indices in the
// library; storage is 0-based internally.
class GammaTable {
public:
    GammaTable(int p, int n) : p_(p), n_(n) {
        if (p < 1) throw std::invalid_argument("GammaTable: p must be positive");
        if (n < 2) throw std::invalid_argument("GammaTable: order must be at least 2");
        values_.assign(std::size_t(n - 1) * std::size_t(p + 1), 0.0);
        state_.assign(values_.size(), kUnset);
    }

    int p() const noexcept { return p_; }
    int order() const noexcept { return n_; }

    long long global_index(int row, int col) const {
        check(row, col);
        return static_cast<long long>(row) * (p_ + 1) - p_ + col;
    }

    bool is_set(int row, int col) const {
        check(row, col);
        return state_[idx(row, col)] != kUnset;
    }

    bool is_free(int row, int col) const {
        check(row, col);
        return state_[idx(row, col)] == kFree;
    }

    double get(int row, int col) const {
        check(row, col);
        const std::size_t i = idx(row, col);
        if (state_[i] == kUnset)
            throw std::logic_error("GammaTable: read of unset entry " + detail::index_pair(row, col) +
                                   "; recurrence sequencing bug");
        if (read_observer_) read_observer_(row, col);
        return values_[i];
    }

    void set(int row, int col, double v) {
        check(row, col);
        values_[idx(row, col)] = v;
        state_[idx(row, col)] = kSet;
    }

    void set_free(int row, int col, double v) {
        check(row, col);
        values_[idx(row, col)] = v;
        state_[idx(row, col)] = kFree;
    }

    // Scalar operations executed by the recurrence filling this table.
    std::uint64_t flops() const noexcept { return flops_; }
    void add_flops(std::uint64_t k) noexcept { flops_ += k; }

    // Entries with |value| at or below this are treated as zero.
    double breakdown_tolerance() const noexcept { return tol_; }
    void set_breakdown_tolerance(double t) noexcept { tol_ = t; }

    // Test hook: called with (row, col) on every get().
    void set_read_observer(std::function<void(int, int)> obs) { read_observer_ = std::move(obs); }

private:
    static constexpr std::uint8_t kUnset = 0;
    static constexpr std::uint8_t kSet = 1;
    static constexpr std::uint8_t kFree = 2;

    std::size_t idx(int row, int col) const noexcept {
        return std::size_t(row - 1) * std::size_t(p_ + 1) + std::size_t(col);
    }

    void check(int row, int col) const {
        if (row < 1 || row > n_ - 1 || col < 0 || col > p_)
            throw std::out_of_range("GammaTable: " + detail::index_pair(row, col) + " outside rows 1.." +
                                    std::to_string(n_ - 1) + ", columns 0.." + std::to_string(p_));
    }

    int p_, n_;
    std::vector<double> values_;
    std::vector<std::uint8_t> state_;
    std::uint64_t flops_ = 0;
    double tol_ = 1e-12;
    std::function<void(int, int)> read_observer_;
};

// Cost model for the two recurrence loops.  per_entry holds the
// predicted cost binom(p, m-s+1)*(m-s) + 1 of each loop position;
// m1/m2 exist both as closed forms and as direct summations of the
// per-entry model.  The two disagree on the second loop (the closed
// form is smaller by exactly p*(n-p)); both are reported, and the
// summation is what the tests pin.  measured_flops counts the scalar
// operations a factorization actually executed, which also differs
// from the model (the model's breakdown misstates the additions of the
// single-entry-tuple case).
struct OpCountReport {
    int p = 0;
    long long n = 0;
    // per_entry[m-1][s - s_begin(m)] for row m = 1..n-1
    std::vector<std::vector<long long>> per_entry;
    long long m1_closed_form = 0;
    long long m2_closed_form = 0;
    long long total_closed_form = 0;
    long long m1_summed = 0;
    long long m2_summed = 0;
    std::uint64_t measured_flops = 0;

    int s_begin(int m) const noexcept { return std::max(1, m - p + 1); }
};

namespace detail {

inline long long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Visit the strictly ascending k-subsets of {1..p} in lexicographic
// order.
template <typename F>
void for_each_tuple(int p, int k, F&& visit) {
    if (k < 0 || k > p) return;
    std::vector<int> t(static_cast<std::size_t>(k));
    if (k == 0) {
        visit(t);
        return;
    }
    std::iota(t.begin(), t.end(), 1);
    while (true) {
        visit(t);
        int i = k - 1;
        while (i >= 0 && t[std::size_t(i)] == p - (k - 1 - i)) --i;
        if (i < 0) break;
        ++t[std::size_t(i)];
        for (int j = i + 1; j < k; ++j) t[std::size_t(j)] = t[std::size_t(j - 1)] + 1;
    }
}

}  // namespace detail

inline OpCountReport predicted_op_count(int p, long long n) {
    if (p < 1) throw std::invalid_argument("predicted_op_count: p must be positive");
    if (n <= p) throw std::invalid_argument("predicted_op_count: order must exceed the bandwidth");
    OpCountReport r;
    r.p = p;
    r.n = n;
    r.per_entry.resize(std::size_t(n - 1));
    for (long long m = 1; m <= n - 1; ++m) {
        auto& row = r.per_entry[std::size_t(m - 1)];
        const long long s0 = std::max<long long>(1, m - p + 1);
        row.reserve(std::size_t(m - s0 + 1));
        for (long long s = s0; s <= m; ++s) {
            const long long k = m - s + 1;
            const long long cost = detail::binom(p, int(k)) * (k - 1) + 1;
            row.push_back(cost);
            if (m <= p - 1)
                r.m1_summed += cost;
            else
                r.m2_summed += cost;
        }
    }
    const long long pow2 = 1LL << (p - 1);
    r.m1_closed_form = static_cast<long long>(p) * (p + 1 + (p - 3) * pow2) / 2;
    r.m2_closed_form = (n - p) * (1 + (p - 2) * pow2);
    r.total_closed_form = (1 - pow2) * static_cast<long long>(p) * (p - 1) / 2 + (1 + (p - 2) * pow2) * n;
    return r;
}

// Builds the table with only the free starting data placed: row m
// (m = 1..p-1) gets the supplied values in columns 1..p-m.  Everything
// else, including all of column 0, stays unset.
inline GammaTable init_gamma_table(const UnitLowerBanded& l, const FreeParameters& params) {
    const int p = l.bandwidth();
    const int n = l.order();
    if (params.values.size() != FreeParameters::expected_count(p))
        throw std::invalid_argument("init_gamma_table: expected " +
                                    std::to_string(FreeParameters::expected_count(p)) +
                                    " free parameters, got " + std::to_string(params.values.size()));
    GammaTable t(p, n);
    t.set_breakdown_tolerance(1e-12 * std::max(1.0, l.max_abs_subdiagonal()));
    std::size_t next = 0;
    for (int m = 1; m <= p - 1; ++m) {
        for (int col = 1; col <= p - m; ++col) {
            const double v = params.values[next];
            if (v == 0.0) throw InvalidFreeParameter(next);
            t.set_free(m, col, v);
            ++next;
        }
    }
    return t;
}

// One recurrence step in loop coordinates (m, s), filling table entry
// (row m, column c) with c = p + s - m:
//
//   value = ( l(m, s-1) - sum_tuples prod_{j=1..k} t(m-j+1, sigma_j) )
//           / prod_{j=2..k} t(m-j+1, c+j-1)
//
// where k = m-s+1 and the sum runs over the ascending k-tuples
// (sigma_1 < ... < sigma_k) in {1..p} with sigma_1 != c (the excluded
// tuple is the one carrying the unknown itself).  Empty sums are 0 and
// empty products 1.  Every entry the formula reads lies in an earlier
// row or earlier in row m, so filling rows in ascending (m, s) order
// is always well-defined.  Stores the value, adds the executed scalar
// operations to the table's flop counter, and returns the value.
inline double darboux_step(GammaTable& t, const UnitLowerBanded& l, int m, int s) {
    const int p = t.p();
    if (l.order() != t.order() || l.bandwidth() != p)
        throw std::invalid_argument("darboux_step: table and matrix shapes disagree");
    if (m < 1 || m > t.order() - 1 || s > m || s < std::max(1, m - p + 1))
        throw std::out_of_range("darboux_step: loop coordinates " + detail::index_pair(m, s) +
                                " outside 1 <= max(1, m-p+1) <= s <= m <= n-1");
    const int k = m - s + 1;
    const int c = p + s - m;

    std::uint64_t fl = 0;
    double sum = 0.0;
    bool have_sum = false;
    detail::for_each_tuple(p, k, [&](const std::vector<int>& sigma) {
        if (sigma[0] == c) return;
        double prod = t.get(m, sigma[0]);
        for (int j = 2; j <= k; ++j) {
            prod *= t.get(m - j + 1, sigma[std::size_t(j - 1)]);
            ++fl;
        }
        if (have_sum) {
            sum += prod;
            ++fl;
        } else {
            sum = prod;
            have_sum = true;
        }
    });

    double value = l.at(m, s - 1);
    if (have_sum) {
        value -= sum;
        ++fl;
    }
    if (k >= 2) {
        double denom = 1.0;
        for (int j = 2; j <= k; ++j) {
            const double factor = t.get(m - j + 1, c + j - 1);
            if (std::abs(factor) <= t.breakdown_tolerance()) {
                t.add_flops(fl);
                throw DarbouxBreakdown(m, s);
            }
            if (j > 2) ++fl;
            denom = j == 2 ? factor : denom * factor;
        }
        value /= denom;
        ++fl;
    }
    t.add_flops(fl);
    if (std::abs(value) <= t.breakdown_tolerance()) throw DarbouxBreakdown(m, s);
    t.set(m, c, value);
    return value;
}

struct DarbouxResult {
    std::vector<BidiagonalFactor> factors;  // unit lower bidiagonal, applied left to right
    GammaTable table;
    OpCountReport ops;
};

// Factors a unit lower (p+1)-banded matrix into p unit lower
// bidiagonal factors whose ordered product reproduces it.  The
// factorization is not unique: it is parameterized by the free
// starting data, and any admissible choice yields the same product.
// For p = 1 the matrix is its own chain and is returned unchanged with
// zero recurrence operations.
inline DarbouxResult darboux_factor(const UnitLowerBanded& l, const FreeParameters& params) {
    const int p = l.bandwidth();
    const int n = l.order();
    OpCountReport ops = predicted_op_count(p, n);

    if (p == 1) {
        if (!params.values.empty())
            throw std::invalid_argument("darboux_factor: p = 1 admits no free parameters");
        GammaTable t(1, n);
        for (int m = 1; m <= n - 1; ++m) t.set(m, 1, l.subdiagonal(1)[std::size_t(m - 1)]);
        std::vector<BidiagonalFactor> f;
        f.push_back(BidiagonalFactor::unit_lower(l.subdiagonal(1)));
        return DarbouxResult{std::move(f), std::move(t), std::move(ops)};
    }

    GammaTable t = init_gamma_table(l, params);
    for (int m = 1; m <= p - 1; ++m)
        for (int s = 1; s <= m; ++s) darboux_step(t, l, m, s);
    for (int m = p; m <= n - 1; ++m)
        for (int s = m - p + 1; s <= m; ++s) darboux_step(t, l, m, s);

    std::vector<BidiagonalFactor> factors;
    factors.reserve(std::size_t(p));
    for (int col = 1; col <= p; ++col) {
        std::vector<double> off(std::size_t(n - 1));
        for (int m = 1; m <= n - 1; ++m) off[std::size_t(m - 1)] = t.get(m, col);
        factors.push_back(BidiagonalFactor::unit_lower(std::move(off)));
    }
    ops.measured_flops = t.flops();
    return DarbouxResult{std::move(factors), std::move(t), std::move(ops)};
}

}  // namespace bandchain
