#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "bandchain/band_core.hpp"
#include "bandchain/errors.hpp"

namespace bandchain {

// Plain-text container for one banded matrix:
//
//   BND 1
//   <n> <p> <q>
//   <n-p values>        band at offset -p
//   ...
//   <n values>          main diagonal
//   ...
//   <n-q values>        band at offset +q
//
// One line per diagonal, outermost subdiagonal first.  Values are
// written in shortest round-trip decimal form, so parse(serialize(A))
// reproduces A exactly.

namespace detail {

inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view tok, std::size_t line) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw ParseError("malformed number '" + std::string(tok) + "'", line);
    return v;
}

inline long long parse_int(std::string_view tok, std::size_t line) {
    long long v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
        throw ParseError("malformed integer '" + std::string(tok) + "'", line);
    return v;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

// Reads the next line that is not entirely whitespace; tracks the
// 1-based line number for diagnostics.
inline bool next_content_line(std::istream& in, std::string& line, std::size_t& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) return true;
    }
    return false;
}

}  // namespace detail

inline void write_band(std::ostream& out, const BandedMatrix& a) {
    out << "BND 1\n" << a.order() << ' ' << a.lower_bw() << ' ' << a.upper_bw() << '\n';
    for (int d = -a.lower_bw(); d <= a.upper_bw(); ++d) {
        const auto& band = a.band(d);
        for (std::size_t k = 0; k < band.size(); ++k)
            out << (k ? " " : "") << detail::format_double(band[k]);
        out << '\n';
    }
}

inline BandedMatrix read_band(std::istream& in, std::size_t& lineno) {
    std::string line;
    if (!detail::next_content_line(in, line, lineno)) throw ParseError("missing BND header", lineno);
    {
        auto toks = detail::split_ws(line);
        if (toks.size() != 2 || toks[0] != "BND" || toks[1] != "1")
            throw ParseError("expected header 'BND 1'", lineno);
    }
    if (!detail::next_content_line(in, line, lineno)) throw ParseError("missing dimension line", lineno);
    long long n = 0, p = 0, q = 0;
    {
        auto toks = detail::split_ws(line);
        if (toks.size() != 3) throw ParseError("dimension line must hold 'n p q'", lineno);
        n = detail::parse_int(toks[0], lineno);
        p = detail::parse_int(toks[1], lineno);
        q = detail::parse_int(toks[2], lineno);
        if (n < 1 || p < 0 || q < 0 || p > n - 1 || q > n - 1)
            throw ParseError("inadmissible dimensions n=" + std::to_string(n) + " p=" + std::to_string(p) +
                                 " q=" + std::to_string(q),
                             lineno);
    }
    BandedMatrix a(static_cast<int>(n), static_cast<int>(p), static_cast<int>(q));
    for (int d = static_cast<int>(-p); d <= static_cast<int>(q); ++d) {
        if (!detail::next_content_line(in, line, lineno))
            throw ParseError("missing band line for offset " + std::to_string(d), lineno);
        auto toks = detail::split_ws(line);
        auto& band = a.band(d);
        if (toks.size() != band.size())
            throw ParseError("band at offset " + std::to_string(d) + " must hold " +
                                 std::to_string(band.size()) + " values, got " + std::to_string(toks.size()),
                             lineno);
        for (std::size_t k = 0; k < band.size(); ++k) band[k] = detail::parse_double(toks[k], lineno);
    }
    return a;
}

inline BandedMatrix read_band(std::istream& in) {
    std::size_t lineno = 0;
    return read_band(in, lineno);
}

inline void write_band_file(const std::string& path, const BandedMatrix& a) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    write_band(out, a);
    if (!out) throw ParseError("write to '" + path + "' failed");
}

inline BandedMatrix read_band_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return read_band(in);
}

// Vector files: first line the length, then that many values.

inline void write_vector(std::ostream& out, const std::vector<double>& v) {
    out << v.size() << '\n';
    for (double x : v) out << detail::format_double(x) << '\n';
}

inline std::vector<double> read_vector(std::istream& in) {
    std::size_t lineno = 0;
    std::string line;
    if (!detail::next_content_line(in, line, lineno)) throw ParseError("missing vector length line", lineno);
    auto toks = detail::split_ws(line);
    if (toks.size() != 1) throw ParseError("vector length line must hold one integer", lineno);
    const long long n = detail::parse_int(toks[0], lineno);
    if (n < 0) throw ParseError("negative vector length", lineno);
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(n));
    while (static_cast<long long>(v.size()) < n) {
        if (!detail::next_content_line(in, line, lineno))
            throw ParseError("vector file ends after " + std::to_string(v.size()) + " of " +
                                 std::to_string(n) + " values",
                             lineno);
        for (auto tok : detail::split_ws(line)) {
            if (static_cast<long long>(v.size()) == n)
                throw ParseError("vector file holds surplus values", lineno);
            v.push_back(detail::parse_double(tok, lineno));
        }
    }
    return v;
}

inline void write_vector_file(const std::string& path, const std::vector<double>& v) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    write_vector(out, v);
    if (!out) throw ParseError("write to '" + path + "' failed");
}

inline std::vector<double> read_vector_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return read_vector(in);
}

// Chain files: 'CHAIN 1', a line with the lower and upper factor
// counts, then each factor in order as a BND block (lower factors as
// (1,0)-banded matrices, upper factors as (0,1)-banded).

inline void write_chain(std::ostream& out, const FactorChain& chain) {
    out << "CHAIN 1\n" << chain.lower.size() << ' ' << chain.upper.size() << '\n';
    for (const auto& f : chain.lower) write_band(out, to_banded(f));
    for (const auto& f : chain.upper) write_band(out, to_banded(f));
}

inline FactorChain read_chain(std::istream& in) {
    std::size_t lineno = 0;
    std::string line;
    if (!detail::next_content_line(in, line, lineno)) throw ParseError("missing CHAIN header", lineno);
    {
        auto toks = detail::split_ws(line);
        if (toks.size() != 2 || toks[0] != "CHAIN" || toks[1] != "1")
            throw ParseError("expected header 'CHAIN 1'", lineno);
    }
    if (!detail::next_content_line(in, line, lineno)) throw ParseError("missing factor count line", lineno);
    auto toks = detail::split_ws(line);
    if (toks.size() != 2) throw ParseError("factor count line must hold two integers", lineno);
    const long long nl = detail::parse_int(toks[0], lineno);
    const long long nu = detail::parse_int(toks[1], lineno);
    if (nl < 0 || nu < 0) throw ParseError("negative factor count", lineno);
    FactorChain chain;
    for (long long i = 0; i < nl + nu; ++i) {
        BandedMatrix b = read_band(in, lineno);
        const bool lower = i < nl;
        if (lower && !(b.lower_bw() == 1 && b.upper_bw() == 0))
            throw ParseError("lower chain factor must be (1,0)-banded", lineno);
        if (!lower && !(b.lower_bw() == 0 && b.upper_bw() == 1))
            throw ParseError("upper chain factor must be (0,1)-banded", lineno);
        std::vector<double> diag = b.band(0);
        std::vector<double> off = b.band(lower ? -1 : 1);
        if (lower) {
            for (double d : diag)
                if (d != 1.0) throw ParseError("lower chain factor must be unit-diagonal", lineno);
            chain.lower.push_back(BidiagonalFactor::unit_lower(std::move(off)));
        } else {
            chain.upper.push_back(BidiagonalFactor::upper(std::move(diag), std::move(off)));
        }
    }
    return chain;
}

inline void write_chain_file(const std::string& path, const FactorChain& chain) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    write_chain(out, chain);
    if (!out) throw ParseError("write to '" + path + "' failed");
}

inline FactorChain read_chain_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return read_chain(in);
}

// Flat machine-readable run summary.  schema_version is always
// present and every numeric field is checked finite on insertion.
class RunReport {
public:
    explicit RunReport(std::string_view command) {
        j_["schema_version"] = 1;
        j_["command"] = std::string(command);
    }

    void set(std::string_view key, double v) {
        if (!std::isfinite(v))
            throw std::invalid_argument("RunReport: non-finite value for '" + std::string(key) + "'");
        j_[std::string(key)] = v;
    }
    void set(std::string_view key, long long v) { j_[std::string(key)] = v; }
    void set(std::string_view key, std::uint64_t v) { j_[std::string(key)] = v; }
    void set(std::string_view key, int v) { j_[std::string(key)] = v; }
    void set(std::string_view key, std::string_view v) { j_[std::string(key)] = std::string(v); }
    // keep string literals away from the bool overload
    void set(std::string_view key, const char* v) { j_[std::string(key)] = std::string(v); }
    void set(std::string_view key, bool v) { j_[std::string(key)] = v; }

    void set_error(std::string_view stage, std::string_view detail) {
        j_["error_stage"] = std::string(stage);
        j_["error_detail"] = std::string(detail);
    }

    const nlohmann::ordered_json& json() const noexcept { return j_; }
    std::string str(int indent = 2) const { return j_.dump(indent); }

private:
    nlohmann::ordered_json j_;
};

}  // namespace bandchain
