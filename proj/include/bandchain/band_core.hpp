#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bandchain/errors.hpp"

namespace bandchain {

namespace detail {

inline std::string index_pair(int i, int j) {
    return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

}  // namespace detail

// General (p,q)-banded square matrix in diagonal-wise storage: one
// contiguous array per offset d in [-p, q].  Entry k of band d holds
// a(k, k+d) for d >= 0 and a(k+|d|, k) for d < 0, i.e. the slot index
// is always min(row, column).
//
// All storage types here follow a fill-once discipline: populate on
// one thread, then treat as read-only (concurrent reads are safe).
class BandedMatrix {
public:
    BandedMatrix(int n, int lower_bw, int upper_bw) : n_(n), p_(lower_bw), q_(upper_bw) {
        if (n < 1) throw std::invalid_argument("BandedMatrix: order must be positive");
        if (p_ < 0 || q_ < 0 || p_ > n - 1 || q_ > n - 1)
            throw std::invalid_argument("BandedMatrix: bandwidths must lie in [0, n-1]");
        bands_.resize(std::size_t(p_) + q_ + 1);
        for (int d = -p_; d <= q_; ++d) bands_[std::size_t(d + p_)].assign(std::size_t(n - std::abs(d)), 0.0);
    }

    int order() const noexcept { return n_; }
    int lower_bw() const noexcept { return p_; }
    int upper_bw() const noexcept { return q_; }

    bool in_band(int i, int j) const noexcept {
        const int d = j - i;
        return d >= -p_ && d <= q_;
    }

    // Stored entry when (i, j) is inside the band, 0 otherwise.
    double at(int i, int j) const {
        check_index(i, j);
        if (!in_band(i, j)) return 0.0;
        return bands_[std::size_t(j - i + p_)][std::size_t(std::min(i, j))];
    }

    void set(int i, int j, double v) {
        check_index(i, j);
        if (!in_band(i, j))
            throw std::out_of_range("BandedMatrix: " + detail::index_pair(i, j) + " lies outside the band");
        bands_[std::size_t(j - i + p_)][std::size_t(std::min(i, j))] = v;
    }

    const std::vector<double>& band(int d) const {
        check_offset(d);
        return bands_[std::size_t(d + p_)];
    }

    std::vector<double>& band(int d) {
        check_offset(d);
        return bands_[std::size_t(d + p_)];
    }

    // Chain factorizations require every outermost subdiagonal entry
    // to be nonzero; same for the superdiagonal in the general case.
    bool is_factorizable_lower() const noexcept {
        if (p_ < 1) return false;
        for (double v : bands_[0])
            if (v == 0.0) return false;
        return true;
    }

    bool is_factorizable_upper() const noexcept {
        if (q_ < 1) return false;
        for (double v : bands_[std::size_t(p_) + q_])
            if (v == 0.0) return false;
        return true;
    }

private:
    void check_index(int i, int j) const {
        if (i < 0 || i >= n_ || j < 0 || j >= n_)
            throw std::out_of_range("BandedMatrix: index " + detail::index_pair(i, j) +
                                    " outside order-" + std::to_string(n_) + " matrix");
    }

    void check_offset(int d) const {
        if (d < -p_ || d > q_)
            throw std::out_of_range("BandedMatrix: no band at offset " + std::to_string(d));
    }

    int n_, p_, q_;
    std::vector<std::vector<double>> bands_;
};

// Unit lower triangular matrix with p subdiagonals.  The unit diagonal
// is implicit: reads of (i, i) return 1, reads outside the band 0.
class UnitLowerBanded {
public:
    UnitLowerBanded(int n, int bandwidth) : n_(n), p_(bandwidth) {
        if (n < 1) throw std::invalid_argument("UnitLowerBanded: order must be positive");
        if (p_ < 1 || p_ > n - 1)
            throw std::invalid_argument("UnitLowerBanded: bandwidth must lie in [1, n-1]");
        sub_.resize(std::size_t(p_));
        for (int d = 1; d <= p_; ++d) sub_[std::size_t(d - 1)].assign(std::size_t(n - d), 0.0);
    }

    int order() const noexcept { return n_; }
    int bandwidth() const noexcept { return p_; }

    double at(int i, int j) const {
        check_index(i, j);
        if (i == j) return 1.0;
        const int d = i - j;
        if (d >= 1 && d <= p_) return sub_[std::size_t(d - 1)][std::size_t(j)];
        return 0.0;
    }

    void set(int i, int j, double v) {
        check_index(i, j);
        const int d = i - j;
        if (d < 1 || d > p_)
            throw std::out_of_range("UnitLowerBanded: " + detail::index_pair(i, j) +
                                    " is not a stored subdiagonal entry");
        sub_[std::size_t(d - 1)][std::size_t(j)] = v;
    }

    // Subdiagonal at offset -d, d in 1..p; entry k holds a(k+d, k).
    const std::vector<double>& subdiagonal(int d) const {
        check_sub(d);
        return sub_[std::size_t(d - 1)];
    }

    std::vector<double>& subdiagonal(int d) {
        check_sub(d);
        return sub_[std::size_t(d - 1)];
    }

    bool outer_band_nonzero() const noexcept {
        for (double v : sub_[std::size_t(p_ - 1)])
            if (v == 0.0) return false;
        return true;
    }

    double max_abs_subdiagonal() const noexcept {
        double m = 0.0;
        for (const auto& band : sub_)
            for (double v : band) m = std::max(m, std::abs(v));
        return m;
    }

private:
    void check_index(int i, int j) const {
        if (i < 0 || i >= n_ || j < 0 || j >= n_)
            throw std::out_of_range("UnitLowerBanded: index " + detail::index_pair(i, j) +
                                    " outside order-" + std::to_string(n_) + " matrix");
    }

    void check_sub(int d) const {
        if (d < 1 || d > p_)
            throw std::out_of_range("UnitLowerBanded: no subdiagonal at offset " + std::to_string(-d));
    }

    int n_, p_;
    std::vector<std::vector<double>> sub_;
};

// Upper triangular matrix with q superdiagonals and an explicit
// (generally nonunit) diagonal.
class UpperBanded {
public:
    UpperBanded(int n, int bandwidth) : n_(n), q_(bandwidth), diag_(std::size_t(n), 0.0) {
        if (n < 1) throw std::invalid_argument("UpperBanded: order must be positive");
        if (q_ < 1 || q_ > n - 1)
            throw std::invalid_argument("UpperBanded: bandwidth must lie in [1, n-1]");
        super_.resize(std::size_t(q_));
        for (int d = 1; d <= q_; ++d) super_[std::size_t(d - 1)].assign(std::size_t(n - d), 0.0);
    }

    int order() const noexcept { return n_; }
    int bandwidth() const noexcept { return q_; }

    double at(int i, int j) const {
        check_index(i, j);
        if (i == j) return diag_[std::size_t(i)];
        const int d = j - i;
        if (d >= 1 && d <= q_) return super_[std::size_t(d - 1)][std::size_t(i)];
        return 0.0;
    }

    void set(int i, int j, double v) {
        check_index(i, j);
        if (i == j) {
            diag_[std::size_t(i)] = v;
            return;
        }
        const int d = j - i;
        if (d < 1 || d > q_)
            throw std::out_of_range("UpperBanded: " + detail::index_pair(i, j) +
                                    " is not a stored entry");
        super_[std::size_t(d - 1)][std::size_t(i)] = v;
    }

    const std::vector<double>& diagonal() const noexcept { return diag_; }
    std::vector<double>& diagonal() noexcept { return diag_; }

    // Superdiagonal at offset +d, d in 1..q; entry k holds a(k, k+d).
    const std::vector<double>& superdiagonal(int d) const {
        check_super(d);
        return super_[std::size_t(d - 1)];
    }

    std::vector<double>& superdiagonal(int d) {
        check_super(d);
        return super_[std::size_t(d - 1)];
    }

    // Bidiagonal with every superdiagonal entry exactly 1.
    bool is_monic() const noexcept {
        if (q_ != 1) return false;
        for (double v : super_[0])
            if (v != 1.0) return false;
        return true;
    }

    double max_abs() const noexcept {
        double m = 0.0;
        for (double v : diag_) m = std::max(m, std::abs(v));
        for (const auto& band : super_)
            for (double v : band) m = std::max(m, std::abs(v));
        return m;
    }

private:
    void check_index(int i, int j) const {
        if (i < 0 || i >= n_ || j < 0 || j >= n_)
            throw std::out_of_range("UpperBanded: index " + detail::index_pair(i, j) +
                                    " outside order-" + std::to_string(n_) + " matrix");
    }

    void check_super(int d) const {
        if (d < 1 || d > q_)
            throw std::out_of_range("UpperBanded: no superdiagonal at offset " + std::to_string(d));
    }

    int n_, q_;
    std::vector<double> diag_;
    std::vector<std::vector<double>> super_;
};

enum class Orientation { lower, upper };

// One chain factor: the main diagonal plus a single adjacent diagonal
// (subdiagonal for lower orientation, superdiagonal for upper).
class BidiagonalFactor {
public:
    static BidiagonalFactor unit_lower(std::vector<double> offdiag) {
        std::vector<double> diag(offdiag.size() + 1, 1.0);
        return BidiagonalFactor(Orientation::lower, std::move(diag), std::move(offdiag));
    }

    static BidiagonalFactor upper(std::vector<double> diag, std::vector<double> offdiag) {
        return BidiagonalFactor(Orientation::upper, std::move(diag), std::move(offdiag));
    }

    static BidiagonalFactor identity(int n, Orientation o) {
        if (n < 1) throw std::invalid_argument("BidiagonalFactor: order must be positive");
        return BidiagonalFactor(o, std::vector<double>(std::size_t(n), 1.0),
                                std::vector<double>(std::size_t(n - 1), 0.0));
    }

    int order() const noexcept { return int(diag_.size()); }
    Orientation orientation() const noexcept { return orient_; }
    const std::vector<double>& diag() const noexcept { return diag_; }
    const std::vector<double>& offdiag() const noexcept { return off_; }

    bool unit_diagonal() const noexcept {
        for (double v : diag_)
            if (v != 1.0) return false;
        return true;
    }

    double at(int i, int j) const {
        const int n = order();
        if (i < 0 || i >= n || j < 0 || j >= n)
            throw std::out_of_range("BidiagonalFactor: index " + detail::index_pair(i, j) +
                                    " outside order-" + std::to_string(n) + " matrix");
        if (i == j) return diag_[std::size_t(i)];
        if (orient_ == Orientation::lower && i == j + 1) return off_[std::size_t(j)];
        if (orient_ == Orientation::upper && j == i + 1) return off_[std::size_t(i)];
        return 0.0;
    }

private:
    BidiagonalFactor(Orientation o, std::vector<double> diag, std::vector<double> offdiag)
        : orient_(o), diag_(std::move(diag)), off_(std::move(offdiag)) {
        if (diag_.empty()) throw std::invalid_argument("BidiagonalFactor: order must be positive");
        if (off_.size() + 1 != diag_.size())
            throw std::invalid_argument("BidiagonalFactor: offdiagonal must have order-1 entries");
    }

    Orientation orient_;
    std::vector<double> diag_;
    std::vector<double> off_;
};

// Ordered bidiagonal factors: the represented matrix is the product
// lower[0] * ... * lower[p-1] * upper[0] * ... * upper[q-1].
struct FactorChain {
    std::vector<BidiagonalFactor> lower;
    std::vector<BidiagonalFactor> upper;

    std::size_t size() const noexcept { return lower.size() + upper.size(); }

    int order() const {
        if (!lower.empty()) return lower.front().order();
        if (!upper.empty()) return upper.front().order();
        throw std::logic_error("FactorChain: empty chain has no order");
    }
};

inline BandedMatrix to_banded(const UnitLowerBanded& l) {
    BandedMatrix a(l.order(), l.bandwidth(), 0);
    std::fill(a.band(0).begin(), a.band(0).end(), 1.0);
    for (int d = 1; d <= l.bandwidth(); ++d) a.band(-d) = l.subdiagonal(d);
    return a;
}

inline BandedMatrix to_banded(const UpperBanded& u) {
    BandedMatrix a(u.order(), 0, u.bandwidth());
    a.band(0) = u.diagonal();
    for (int d = 1; d <= u.bandwidth(); ++d) a.band(d) = u.superdiagonal(d);
    return a;
}

inline BandedMatrix to_banded(const BidiagonalFactor& f) {
    const bool lower = f.orientation() == Orientation::lower;
    BandedMatrix a(f.order(), lower ? 1 : 0, lower ? 0 : 1);
    a.band(0) = f.diag();
    if (f.order() > 1) a.band(lower ? -1 : 1) = f.offdiag();
    return a;
}

// C = A * B; the result bandwidths are the sums of the operand
// bandwidths (clamped to n-1).
inline BandedMatrix multiply_banded(const BandedMatrix& a, const BandedMatrix& b) {
    if (a.order() != b.order()) throw std::invalid_argument("multiply_banded: order mismatch");
    const int n = a.order();
    const int p = std::min(a.lower_bw() + b.lower_bw(), n - 1);
    const int q = std::min(a.upper_bw() + b.upper_bw(), n - 1);
    BandedMatrix c(n, p, q);
    for (int i = 0; i < n; ++i) {
        const int jlo = std::max(0, i - p);
        const int jhi = std::min(n - 1, i + q);
        for (int j = jlo; j <= jhi; ++j) {
            const int klo = std::max({0, i - a.lower_bw(), j - b.upper_bw()});
            const int khi = std::min({n - 1, i + a.upper_bw(), j + b.lower_bw()});
            double s = 0.0;
            for (int k = klo; k <= khi; ++k) s += a.at(i, k) * b.at(k, j);
            c.set(i, j, s);
        }
    }
    return c;
}

// Ordered product of every factor in the chain.  The result has lower
// bandwidth equal to the number of lower factors and upper bandwidth
// equal to the number of upper factors.
inline BandedMatrix multiply_chain(const FactorChain& chain) {
    if (chain.size() == 0) throw std::invalid_argument("multiply_chain: empty chain");
    const int n = chain.order();
    auto check = [n](const BidiagonalFactor& f, Orientation expected) {
        if (f.order() != n) throw std::invalid_argument("multiply_chain: factor order mismatch");
        if (f.orientation() != expected)
            throw std::invalid_argument("multiply_chain: factor orientation mismatch");
    };
    std::vector<const BidiagonalFactor*> ordered;
    ordered.reserve(chain.size());
    for (const auto& f : chain.lower) {
        check(f, Orientation::lower);
        ordered.push_back(&f);
    }
    for (const auto& f : chain.upper) {
        check(f, Orientation::upper);
        ordered.push_back(&f);
    }
    BandedMatrix prod = to_banded(*ordered.front());
    for (std::size_t i = 1; i < ordered.size(); ++i) prod = multiply_banded(prod, to_banded(*ordered[i]));
    return prod;
}

inline double max_abs(const BandedMatrix& a) noexcept {
    double m = 0.0;
    for (int d = -a.lower_bw(); d <= a.upper_bw(); ++d)
        for (double v : a.band(d)) m = std::max(m, std::abs(v));
    return m;
}

inline double inf_norm(const std::vector<double>& v) noexcept {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// Row-sum (infinity) norm.
inline double inf_norm(const BandedMatrix& a) {
    std::vector<double> row(std::size_t(a.order()), 0.0);
    for (int d = -a.lower_bw(); d <= a.upper_bw(); ++d) {
        const auto& band = a.band(d);
        const std::size_t i0 = d < 0 ? std::size_t(-d) : 0;
        for (std::size_t k = 0; k < band.size(); ++k) row[i0 + k] += std::abs(band[k]);
    }
    return row.empty() ? 0.0 : *std::max_element(row.begin(), row.end());
}

inline std::vector<double> matvec(const BandedMatrix& a, const std::vector<double>& x) {
    if (int(x.size()) != a.order()) throw std::invalid_argument("matvec: length mismatch");
    std::vector<double> y(x.size(), 0.0);
    for (int d = -a.lower_bw(); d <= a.upper_bw(); ++d) {
        const auto& band = a.band(d);
        const std::size_t i0 = d < 0 ? std::size_t(-d) : 0;
        const std::size_t j0 = d > 0 ? std::size_t(d) : 0;
        for (std::size_t k = 0; k < band.size(); ++k) y[i0 + k] += band[k] * x[j0 + k];
    }
    return y;
}

// ||A - B||_inf / ||A||_inf for same-shape banded matrices.
inline double residual_inf_norm(const BandedMatrix& a, const BandedMatrix& b) {
    if (a.order() != b.order() || a.lower_bw() != b.lower_bw() || a.upper_bw() != b.upper_bw())
        throw std::invalid_argument("residual_inf_norm: shape mismatch");
    std::vector<double> diff_row(std::size_t(a.order()), 0.0);
    for (int d = -a.lower_bw(); d <= a.upper_bw(); ++d) {
        const auto& ba = a.band(d);
        const auto& bb = b.band(d);
        const std::size_t i0 = d < 0 ? std::size_t(-d) : 0;
        for (std::size_t k = 0; k < ba.size(); ++k) diff_row[i0 + k] += std::abs(ba[k] - bb[k]);
    }
    const double denom = inf_norm(a);
    if (denom == 0.0) throw std::domain_error("residual_inf_norm: zero-norm reference matrix");
    return *std::max_element(diff_row.begin(), diff_row.end()) / denom;
}

// ||Ax - b||_inf / (||A||_inf ||x||_inf + ||b||_inf).
inline double relative_residual(const BandedMatrix& a, const std::vector<double>& x,
                                const std::vector<double>& b) {
    std::vector<double> r = matvec(a, x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    const double denom = inf_norm(a) * inf_norm(x) + inf_norm(b);
    const double num = inf_norm(r);
    if (denom == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return num / denom;
}

}  // namespace bandchain
