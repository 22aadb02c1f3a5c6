#pragma once

#include <stdexcept>
#include <string>

namespace bandchain {

// Elimination pivot u_k vanished (or fell below the relative
// tolerance), so the triangular factorization cannot continue.
class PivotBreakdown : public std::runtime_error {
public:
    explicit PivotBreakdown(int index)
        : std::runtime_error("pivot breakdown at diagonal index " + std::to_string(index)),
          index_(index) {}

    int index() const noexcept { return index_; }

private:
    int index_;
};

// The chain recurrence produced a (near-)zero entry at loop position
// (m, s).  Zero entries are never admissible in a bidiagonal chain
// factor, and later steps divide by them; a different choice of free
// parameters usually avoids the breakdown.
class DarbouxBreakdown : public std::runtime_error {
public:
    DarbouxBreakdown(int m, int s)
        : std::runtime_error("chain recurrence breakdown at (m=" + std::to_string(m) +
                             ", s=" + std::to_string(s) +
                             "); retry with a different set of free parameters"),
          m_(m), s_(s) {}

    int m() const noexcept { return m_; }
    int s() const noexcept { return s_; }

private:
    int m_, s_;
};

// A free starting parameter was zero.
class InvalidFreeParameter : public std::invalid_argument {
public:
    explicit InvalidFreeParameter(std::size_t position)
        : std::invalid_argument("free parameter at position " + std::to_string(position) +
                                " is zero; all free parameters must be nonzero"),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

// The matrix violates a structural requirement of the chain
// factorization (zero outermost band entry, zero diagonal of U, ...).
class NotFactorizable : public std::runtime_error {
public:
    explicit NotFactorizable(const std::string& what) : std::runtime_error("not factorizable: " + what) {}
};

// A superdiagonal entry differs from 1 where the monic Hessenberg
// shape requires exactly 1.
class NotMonic : public std::runtime_error {
public:
    explicit NotMonic(int index)
        : std::runtime_error("superdiagonal entry at index " + std::to_string(index) +
                             " is not 1; matrix is not in monic Hessenberg form"),
          index_(index) {}

    int index() const noexcept { return index_; }

private:
    int index_;
};

// A zero superdiagonal entry makes column rescaling to the monic
// shape impossible (the system decouples).
class NotNormalizable : public std::runtime_error {
public:
    explicit NotNormalizable(int index)
        : std::runtime_error("superdiagonal entry at index " + std::to_string(index) +
                             " is zero; cannot rescale to unit superdiagonal"),
          index_(index) {}

    int index() const noexcept { return index_; }

private:
    int index_;
};

// Back substitution hit a (near-)zero diagonal entry.
class SingularUpper : public std::runtime_error {
public:
    explicit SingularUpper(int index, int stage = -1)
        : std::runtime_error("upper factor diagonal entry at index " + std::to_string(index) +
                             " is below tolerance" +
                             (stage >= 0 ? " (substitution stage " + std::to_string(stage) + ")" : "")),
          index_(index), stage_(stage) {}

    int index() const noexcept { return index_; }
    int stage() const noexcept { return stage_; }

private:
    int index_;
    int stage_;
};

// Malformed input file.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what) {}
};

}  // namespace bandchain
