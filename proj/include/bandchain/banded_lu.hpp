#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bandchain/band_core.hpp"
#include "bandchain/errors.hpp"

namespace bandchain {

struct LUPair {
    UnitLowerBanded l;
    UpperBanded u;
};

// Doolittle elimination on band storage, no pivoting.  Pivoting would
// destroy the banded unit-triangular shapes the chain machinery
// operates on, so callers must supply matrices for which pivot-free
// elimination exists (diagonally dominant ones always qualify).  A
// pivot with |u_kk| <= 1e-12 * max|a_ij| aborts with PivotBreakdown.
inline LUPair lu_banded(const BandedMatrix& a) {
    const int n = a.order();
    const int p = a.lower_bw();
    const int q = a.upper_bw();
    if (p < 1 || q < 1) throw std::invalid_argument("lu_banded: bandwidths must be at least 1");
    UnitLowerBanded l(n, p);
    UpperBanded u(n, q);
    const double tol = 1e-12 * max_abs(a);
    for (int k = 0; k < n; ++k) {
        for (int j = k; j <= std::min(n - 1, k + q); ++j) {
            double s = a.at(k, j);
            for (int r = std::max({0, k - p, j - q}); r < k; ++r) s -= l.at(k, r) * u.at(r, j);
            u.set(k, j, s);
        }
        if (std::abs(u.at(k, k)) <= tol) throw PivotBreakdown(k);
        for (int i = k + 1; i <= std::min(n - 1, k + p); ++i) {
            double s = a.at(i, k);
            for (int r = std::max({0, i - p, k - q}); r < k; ++r) s -= l.at(i, r) * u.at(r, k);
            l.set(i, k, s / u.at(k, k));
        }
    }
    return LUPair{std::move(l), std::move(u)};
}

// Specialization for Hessenberg matrices whose superdiagonal is
// identically 1: the elimination then leaves U bidiagonal with unit
// superdiagonal (u(k, k+1) = a(k, k+1) exactly, no update terms reach
// it), which is the shape the chain solver consumes directly.
inline LUPair lu_hessenberg_monic(const BandedMatrix& a) {
    if (a.upper_bw() != 1)
        throw std::invalid_argument("lu_hessenberg_monic: upper bandwidth must be 1");
    const auto& super = a.band(1);
    for (std::size_t i = 0; i < super.size(); ++i)
        if (super[i] != 1.0) throw NotMonic(int(i));
    return lu_banded(a);
}

struct NormalizedSystem {
    BandedMatrix scaled;               // scaled = A * diag(column_scale)
    std::vector<double> column_scale;  // solve scaled*y = b, then x = column_scale .* y
};

// Rescales columns so the superdiagonal becomes identically 1:
// column_scale[0] = 1 and column_scale[j] = 1 / a(j-1, j).  A zero
// superdiagonal entry means the system decouples and is rejected.
inline NormalizedSystem normalize_superdiagonal(const BandedMatrix& a) {
    if (a.upper_bw() != 1)
        throw std::invalid_argument("normalize_superdiagonal: upper bandwidth must be 1");
    const int n = a.order();
    const auto& super = a.band(1);
    std::vector<double> scale(std::size_t(n), 1.0);
    for (int i = 0; i + 1 < n; ++i) {
        if (super[std::size_t(i)] == 0.0) throw NotNormalizable(i);
        scale[std::size_t(i + 1)] = 1.0 / super[std::size_t(i)];
    }
    BandedMatrix scaled(n, a.lower_bw(), 1);
    for (int d = -a.lower_bw(); d <= 1; ++d) {
        const auto& src = a.band(d);
        auto& dst = scaled.band(d);
        const std::size_t j0 = d > 0 ? std::size_t(d) : 0;
        for (std::size_t k = 0; k < src.size(); ++k) dst[k] = src[k] * scale[j0 + k];
    }
    // exact by construction
    std::fill(scaled.band(1).begin(), scaled.band(1).end(), 1.0);
    return NormalizedSystem{std::move(scaled), std::move(scale)};
}

}  // namespace bandchain
