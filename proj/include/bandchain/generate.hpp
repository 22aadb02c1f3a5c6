#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "bandchain/band_core.hpp"
#include "bandchain/darboux.hpp"

namespace bandchain {

// Seeded generators for well-conditioned test instances.  Off-diagonal
// bands are uniform in [-1, 1]; outermost bands are resampled until
// every entry has magnitude at least 1e-3 so the chain preconditions
// hold robustly; the diagonal is the row's off-diagonal absolute sum
// plus one, which makes pivot-free elimination safe.

inline BandedMatrix random_banded_dominant(int n, int p, int q, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    BandedMatrix a(n, p, q);
    for (int d = -p; d <= q; ++d) {
        if (d == 0) continue;
        const bool outer = (d == -p && p >= 1) || (d == q && q >= 1);
        for (auto& v : a.band(d)) {
            do
                v = uni(eng);
            while (outer && std::abs(v) < 1e-3);
        }
    }
    std::vector<double> rowsum(std::size_t(n), 0.0);
    for (int d = -p; d <= q; ++d) {
        if (d == 0) continue;
        const auto& band = a.band(d);
        const std::size_t i0 = d < 0 ? std::size_t(-d) : 0;
        for (std::size_t k = 0; k < band.size(); ++k) rowsum[i0 + k] += std::abs(band[k]);
    }
    auto& diag = a.band(0);
    for (std::size_t i = 0; i < diag.size(); ++i) diag[i] = rowsum[i] + 1.0;
    return a;
}

inline UnitLowerBanded random_unit_lower(int n, int p, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    UnitLowerBanded l(n, p);
    for (int d = 1; d <= p; ++d) {
        for (auto& v : l.subdiagonal(d)) {
            do
                v = uni(eng);
            while (d == p && std::abs(v) < 1e-3);
        }
    }
    return l;
}

inline std::vector<double> random_vector(int n, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = uni(eng);
    return v;
}

// Nonzero free parameters: magnitude uniform in [0.5, 2], random sign.
inline FreeParameters random_free_params(int bandwidth, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> mag(0.5, 2.0);
    std::bernoulli_distribution flip(0.5);
    FreeParameters fp;
    fp.values.resize(FreeParameters::expected_count(bandwidth));
    for (auto& v : fp.values) v = (flip(eng) ? 1.0 : -1.0) * mag(eng);
    return fp;
}

}  // namespace bandchain
