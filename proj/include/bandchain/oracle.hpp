#pragma once

// Naive reference implementations used to cross-check the banded
// routines at desk scale: dense O(n^3) elimination and literal
// sum-of-products expansions.  Correctness over speed throughout.

#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bandchain/band_core.hpp"
#include "bandchain/darboux.hpp"
#include "bandchain/errors.hpp"

namespace bandchain::oracle {

class DenseMatrix {
public:
    explicit DenseMatrix(int n) : n_(n), a_(std::size_t(n) * std::size_t(n), 0.0) {
        if (n < 1) throw std::invalid_argument("DenseMatrix: order must be positive");
    }

    static DenseMatrix identity(int n) {
        DenseMatrix m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static DenseMatrix from_banded(const BandedMatrix& b) {
        DenseMatrix m(b.order());
        for (int i = 0; i < b.order(); ++i)
            for (int j = 0; j < b.order(); ++j) m(i, j) = b.at(i, j);
        return m;
    }

    int order() const noexcept { return n_; }

    double& operator()(int i, int j) { return a_[std::size_t(i) * std::size_t(n_) + std::size_t(j)]; }
    double operator()(int i, int j) const { return a_[std::size_t(i) * std::size_t(n_) + std::size_t(j)]; }

    double max_abs() const noexcept {
        double m = 0.0;
        for (double v : a_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    int n_;
    std::vector<double> a_;
};

inline DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.order() != b.order()) throw std::invalid_argument("oracle::multiply: order mismatch");
    const int n = a.order();
    DenseMatrix c(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

struct DenseLU {
    DenseMatrix l;
    DenseMatrix u;
};

// Doolittle without pivoting; L unit lower, U upper.
inline DenseLU dense_lu(const DenseMatrix& a) {
    const int n = a.order();
    DenseMatrix l = DenseMatrix::identity(n);
    DenseMatrix u(n);
    const double tol = 1e-12 * a.max_abs();
    for (int k = 0; k < n; ++k) {
        for (int j = k; j < n; ++j) {
            double s = a(k, j);
            for (int r = 0; r < k; ++r) s -= l(k, r) * u(r, j);
            u(k, j) = s;
        }
        if (std::abs(u(k, k)) <= tol) throw PivotBreakdown(k);
        for (int i = k + 1; i < n; ++i) {
            double s = a(i, k);
            for (int r = 0; r < k; ++r) s -= l(i, r) * u(r, k);
            l(i, k) = s / u(k, k);
        }
    }
    return DenseLU{std::move(l), std::move(u)};
}

inline std::vector<double> dense_solve(const DenseMatrix& a, const std::vector<double>& b) {
    if (a.order() != int(b.size())) throw std::invalid_argument("dense_solve: length mismatch");
    const int n = a.order();
    DenseLU lu = dense_lu(a);
    std::vector<double> y = b;
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j) y[std::size_t(i)] -= lu.l(i, j) * y[std::size_t(j)];
    std::vector<double> x = y;
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[std::size_t(i)] -= lu.u(i, j) * x[std::size_t(j)];
        x[std::size_t(i)] /= lu.u(i, i);
    }
    return x;
}

// Strictly ascending k-tuples in {1..p}, optionally dropping those
// whose first element equals `exclusion`.
struct TupleSet {
    int k = 0;
    int p = 0;
    std::optional<int> exclusion;
};

inline std::vector<std::vector<int>> enumerate_tuples(const TupleSet& ts) {
    std::vector<std::vector<int>> out;
    if (ts.k < 0 || ts.k > ts.p) return out;  // k > p: nothing to enumerate
    if (ts.k == 0) {
        out.emplace_back();
        return out;
    }
    std::vector<int> t(std::size_t(ts.k));
    std::iota(t.begin(), t.end(), 1);
    while (true) {
        if (!(ts.exclusion && t[0] == *ts.exclusion)) out.push_back(t);
        int i = ts.k - 1;
        while (i >= 0 && t[std::size_t(i)] == ts.p - (ts.k - 1 - i)) --i;
        if (i < 0) break;
        ++t[std::size_t(i)];
        for (int j = i + 1; j < ts.k; ++j) t[std::size_t(j)] = t[std::size_t(j - 1)] + 1;
    }
    return out;
}

// Literal expansion of the chain-product entry on subdiagonal k of
// row m: the sum over all ascending k-tuples (sigma_1..sigma_k) in
// {1..p} of the products of table entries at (m-j+1, sigma_j),
// j = 1..k.  Deliberately independent of the rearranged recurrence the
// factorization itself uses.
inline double brute_force_l_entry(const GammaTable& t, int m, int k) {
    if (k < 1) throw std::invalid_argument("brute_force_l_entry: k must be at least 1");
    double sum = 0.0;
    for (const auto& sigma : enumerate_tuples(TupleSet{k, t.p(), std::nullopt})) {
        double prod = 1.0;
        for (int j = 1; j <= k; ++j) prod *= t.get(m - j + 1, sigma[std::size_t(j - 1)]);
        sum += prod;
    }
    return sum;
}

}  // namespace bandchain::oracle
