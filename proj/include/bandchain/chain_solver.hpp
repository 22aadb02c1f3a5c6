#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bandchain/band_core.hpp"
#include "bandchain/banded_lu.hpp"
#include "bandchain/darboux.hpp"
#include "bandchain/errors.hpp"

namespace bandchain {

struct SolveReport {
    std::vector<double> x;
    // stage outputs in order, final one equal to x; kept on request only
    std::optional<std::vector<std::vector<double>>> intermediates;
    double residual_inf = 0.0;  // ||Ax-b||inf / (||A||inf ||x||inf + ||b||inf)
    std::uint64_t flops = 0;    // substitution flops only
    int stages = 0;
};

struct ChainSolveOptions {
    bool keep_intermediates = false;
};

namespace detail {

// x_0 = b_0, x_i = b_i - off_{i-1} x_{i-1}, in place: 2(n-1) flops.
inline void forward_sub_unit(const std::vector<double>& off, std::vector<double>& v, std::uint64_t& fl) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        v[i] -= off[i - 1] * v[i - 1];
        fl += 2;
    }
}

// x_{n-1} = b_{n-1}/d_{n-1}, x_i = (b_i - e_i x_{i+1})/d_i, in place:
// 3n-2 flops.  Near-zero diagonal entries abort with SingularUpper.
inline void back_sub_bidiagonal(const std::vector<double>& diag, const std::vector<double>& super,
                                std::vector<double>& v, std::uint64_t& fl, int stage = -1) {
    const std::size_t n = v.size();
    const double tol = 1e-12 * std::max(1.0, inf_norm(diag));
    if (std::abs(diag[n - 1]) <= tol) throw SingularUpper(int(n - 1), stage);
    v[n - 1] /= diag[n - 1];
    fl += 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        if (std::abs(diag[i]) <= tol) throw SingularUpper(int(i), stage);
        v[i] = (v[i] - super[i] * v[i + 1]) / diag[i];
        fl += 3;
    }
}

}  // namespace detail

inline std::vector<double> solve_unit_lower_bidiagonal(const BidiagonalFactor& f,
                                                       const std::vector<double>& b) {
    if (f.orientation() != Orientation::lower)
        throw std::invalid_argument("solve_unit_lower_bidiagonal: factor is not lower");
    if (!f.unit_diagonal())
        throw std::invalid_argument("solve_unit_lower_bidiagonal: factor diagonal is not unit");
    if (f.order() != int(b.size()))
        throw std::invalid_argument("solve_unit_lower_bidiagonal: length mismatch");
    std::vector<double> x = b;
    std::uint64_t fl = 0;
    detail::forward_sub_unit(f.offdiag(), x, fl);
    return x;
}

inline std::vector<double> solve_upper_bidiagonal(const UpperBanded& u, const std::vector<double>& b) {
    if (u.bandwidth() != 1)
        throw std::invalid_argument("solve_upper_bidiagonal: bandwidth must be 1");
    if (u.order() != int(b.size()))
        throw std::invalid_argument("solve_upper_bidiagonal: length mismatch");
    std::vector<double> x = b;
    std::uint64_t fl = 0;
    detail::back_sub_bidiagonal(u.diagonal(), u.superdiagonal(1), x, fl);
    return x;
}

// Runs the substitution passes only: one forward substitution per
// lower factor (in order), then one back substitution per upper factor
// (in order).  No residual is computed.
inline SolveReport apply_chain_substitutions(const FactorChain& chain, const std::vector<double>& b,
                                             const ChainSolveOptions& opt = {}) {
    if (chain.size() == 0) throw std::invalid_argument("apply_chain_substitutions: empty chain");
    if (chain.order() != int(b.size()))
        throw std::invalid_argument("apply_chain_substitutions: right-hand side length mismatch");
    SolveReport rep;
    rep.x = b;
    if (opt.keep_intermediates) rep.intermediates.emplace();
    for (const auto& f : chain.lower) {
        if (f.orientation() != Orientation::lower || f.order() != int(b.size()))
            throw std::invalid_argument("apply_chain_substitutions: malformed lower factor");
        if (!f.unit_diagonal())
            throw std::invalid_argument("apply_chain_substitutions: lower factor diagonal is not unit");
        detail::forward_sub_unit(f.offdiag(), rep.x, rep.flops);
        ++rep.stages;
        if (rep.intermediates) rep.intermediates->push_back(rep.x);
    }
    for (const auto& f : chain.upper) {
        if (f.orientation() != Orientation::upper || f.order() != int(b.size()))
            throw std::invalid_argument("apply_chain_substitutions: malformed upper factor");
        detail::back_sub_bidiagonal(f.diag(), f.offdiag(), rep.x, rep.flops, rep.stages);
        ++rep.stages;
        if (rep.intermediates) rep.intermediates->push_back(rep.x);
    }
    return rep;
}

// Solves (product of chain) * x = b by successive bidiagonal
// substitutions and reports the residual against the assembled
// product.
inline SolveReport solve_chain(const FactorChain& chain, const std::vector<double>& b,
                               const ChainSolveOptions& opt = {}) {
    SolveReport rep = apply_chain_substitutions(chain, b, opt);
    rep.residual_inf = relative_residual(multiply_chain(chain), rep.x, b);
    return rep;
}

// Factors an upper (q+1)-banded matrix with nonzero diagonal into q
// upper bidiagonal factors.  Transpose and divide out the diagonal to
// get a unit lower banded matrix, run the lower-chain factorization on
// it, and transpose the pieces back; the diagonal is absorbed into the
// first returned factor so the remaining q-1 stay unit-diagonal.  For
// q = 1 the matrix already is the single factor.  When ops is given it
// receives the recurrence cost report.
inline std::vector<BidiagonalFactor> darboux_factor_upper(const UpperBanded& u,
                                                          const FreeParameters& params,
                                                          OpCountReport* ops = nullptr) {
    const int n = u.order();
    const int q = u.bandwidth();
    const double tol = 1e-12 * std::max(1.0, u.max_abs());
    for (int i = 0; i < n; ++i)
        if (std::abs(u.diagonal()[std::size_t(i)]) <= tol)
            throw NotFactorizable("zero diagonal entry of U at index " + std::to_string(i));

    if (q == 1) {
        if (!params.values.empty())
            throw std::invalid_argument("darboux_factor_upper: q = 1 admits no free parameters");
        if (ops) *ops = predicted_op_count(1, n);
        return {BidiagonalFactor::upper(u.diagonal(), u.superdiagonal(1))};
    }

    const auto& outer = u.superdiagonal(q);
    for (std::size_t i = 0; i < outer.size(); ++i)
        if (outer[i] == 0.0)
            throw NotFactorizable("zero entry at index " + std::to_string(i) +
                                  " of the outermost superdiagonal of U");

    UnitLowerBanded w(n, q);
    for (int d = 1; d <= q; ++d) {
        const auto& sd = u.superdiagonal(d);
        auto& wd = w.subdiagonal(d);
        for (std::size_t i = 0; i < sd.size(); ++i) wd[i] = sd[i] / u.diagonal()[i];
    }
    DarbouxResult dr = darboux_factor(w, params);
    if (ops) *ops = dr.ops;

    std::vector<BidiagonalFactor> out;
    out.reserve(std::size_t(q));
    {
        const auto& wq = dr.factors[std::size_t(q - 1)].offdiag();
        std::vector<double> off(std::size_t(n - 1));
        for (std::size_t i = 0; i < off.size(); ++i) off[i] = u.diagonal()[i] * wq[i];
        out.push_back(BidiagonalFactor::upper(u.diagonal(), std::move(off)));
    }
    for (int j = 2; j <= q; ++j)
        out.push_back(BidiagonalFactor::upper(std::vector<double>(std::size_t(n), 1.0),
                                              dr.factors[std::size_t(q - j)].offdiag()));
    return out;
}

struct BandedFactorization {
    LUPair lu;
    FactorChain chain;
    OpCountReport lower_ops;
    OpCountReport upper_ops;
};

// Full pipeline from a general (p,q)-banded matrix to its bidiagonal
// chain: pivot-free LU, lower-chain factorization of L, upper-chain
// factorization of U.
inline BandedFactorization factor_banded(const BandedMatrix& a, const FreeParameters& lower_params,
                                         const FreeParameters& upper_params) {
    if (a.lower_bw() < 1 || a.upper_bw() < 1)
        throw std::invalid_argument("factor_banded: bandwidths must be at least 1");
    const auto& outer = a.band(-a.lower_bw());
    for (std::size_t i = 0; i < outer.size(); ++i)
        if (outer[i] == 0.0)
            throw NotFactorizable("zero entry at index " + std::to_string(i) +
                                  " of the outermost subdiagonal");
    LUPair lu = lu_banded(a);
    DarbouxResult dl = darboux_factor(lu.l, lower_params);
    BandedFactorization r{std::move(lu), FactorChain{}, std::move(dl.ops), OpCountReport{}};
    r.chain.lower = std::move(dl.factors);
    r.chain.upper = darboux_factor_upper(r.lu.u, upper_params, &r.upper_ops);
    return r;
}

inline BandedFactorization factor_banded(const BandedMatrix& a) {
    return factor_banded(a, FreeParameters::ones(a.lower_bw()), FreeParameters::ones(a.upper_bw()));
}

// Solves A x = b through the bidiagonal chain of A; the report carries
// the end-to-end residual against A itself and the substitution flops.
inline SolveReport solve_banded(const BandedMatrix& a, const std::vector<double>& b,
                                const FreeParameters& lower_params, const FreeParameters& upper_params) {
    if (int(b.size()) != a.order())
        throw std::invalid_argument("solve_banded: right-hand side length mismatch");
    BandedFactorization f = factor_banded(a, lower_params, upper_params);
    SolveReport rep = apply_chain_substitutions(f.chain, b);
    rep.residual_inf = relative_residual(a, rep.x, b);
    return rep;
}

inline SolveReport solve_banded(const BandedMatrix& a, const std::vector<double>& b) {
    return solve_banded(a, b, FreeParameters::ones(a.lower_bw()), FreeParameters::ones(a.upper_bw()));
}

}  // namespace bandchain
