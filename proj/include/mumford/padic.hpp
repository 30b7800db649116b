#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mumford {

class PrecisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FieldSpec {
    std::uint64_t q = 7;
    int precision = 20;
    int cover_degree = 2;

    void validate() const;
};

bool is_prime(std::uint64_t n);

// Arithmetic context for Q_q at N digits. Contexts are interned and live for
// the whole program, so numbers can hold a plain pointer.
class Field {
public:
    static const Field& get(std::uint64_t q, int precision);

    std::uint64_t q() const { return q_; }
    int precision() const { return n_; }
    std::uint64_t power(int k) const { return pow_.at(static_cast<std::size_t>(k)); }

    std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) const {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
    }
    std::uint64_t invmod(std::uint64_t a, std::uint64_t m) const;

private:
    Field(std::uint64_t q, int n);
    std::uint64_t q_;
    int n_;
    std::vector<std::uint64_t> pow_;
};

class PadicNumber {
public:
    static constexpr std::int64_t kExact = std::int64_t{1} << 40;

    PadicNumber() = default;  // exact zero, no field attached

    static PadicNumber zero(const Field& f);
    static PadicNumber zero_to(const Field& f, std::int64_t absolute_precision);
    static PadicNumber one(const Field& f);
    static PadicNumber from_int(const Field& f, std::int64_t n);
    static PadicNumber from_rational(const Field& f, std::int64_t num, std::int64_t den);
    // q^v * u with u reduced mod q^r; u must be a unit.
    static PadicNumber from_parts(const Field& f, std::int64_t v, std::uint64_t u, int r);

    const Field& field() const;
    bool has_field() const { return f_ != nullptr; }
    bool is_zero() const { return zero_; }
    bool is_exact_zero() const { return zero_ && v_ >= kExact; }
    // For zero values this is the absolute precision.
    std::int64_t valuation() const { return v_; }
    std::uint64_t unit() const { return u_; }
    int relative_precision() const { return r_; }
    std::int64_t absolute_precision() const { return zero_ ? v_ : v_ + r_; }

    // Unit part padded with zero digits to the full field precision.
    PadicNumber lifted() const;
    // Drops digits at and beyond q^a; never adds precision.
    PadicNumber with_absolute_precision(std::int64_t a) const;

    PadicNumber operator-() const;
    PadicNumber inverse() const;
    PadicNumber pow(std::int64_t k) const;

    friend PadicNumber operator+(const PadicNumber& x, const PadicNumber& y);
    friend PadicNumber operator-(const PadicNumber& x, const PadicNumber& y) { return x + (-y); }
    friend PadicNumber operator*(const PadicNumber& x, const PadicNumber& y);
    friend PadicNumber operator/(const PadicNumber& x, const PadicNumber& y) { return x * y.inverse(); }
    PadicNumber& operator+=(const PadicNumber& y) { return *this = *this + y; }
    PadicNumber& operator-=(const PadicNumber& y) { return *this = *this - y; }
    PadicNumber& operator*=(const PadicNumber& y) { return *this = *this * y; }
    PadicNumber& operator/=(const PadicNumber& y) { return *this = *this / y; }

    // Same representation bit for bit.
    bool identical(const PadicNumber& o) const;
    // Residue mod q^k of the integral value; requires valuation >= 0.
    std::uint64_t residue(int k) const;
    std::vector<std::uint64_t> digits() const;
    std::string to_string() const;

private:
    const Field* f_ = nullptr;
    bool zero_ = true;
    std::int64_t v_ = kExact;
    std::uint64_t u_ = 0;
    int r_ = 0;
};

// Valuation of x - y, capped by the joint absolute precision. Never throws.
std::int64_t agreement(const PadicNumber& x, const PadicNumber& y);

PadicNumber teichmuller(const Field& f, std::uint64_t a);
std::uint64_t smallest_primitive_root(std::uint64_t q);
PadicNumber primitive_root_of_unity(const Field& f, std::uint64_t order);
PadicNumber hensel_sqrt(const PadicNumber& x);

// Exact order-independent sum; total cancellation yields a zero to precision.
class PadicAccumulator {
public:
    explicit PadicAccumulator(const Field& f) : f_(&f) {}
    void add(const PadicNumber& x);
    void merge(const PadicAccumulator& o);
    PadicNumber value() const;

private:
    struct Term {
        std::int64_t v;
        std::uint64_t u;
        int r;
    };
    const Field* f_;
    std::vector<Term> terms_;
    std::int64_t abs_prec_ = PadicNumber::kExact;
};

}  // namespace mumford
