#pragma once

#include <optional>
#include <string>
#include <utility>

#include "mumford/padic.hpp"

namespace mumford {

class P1Point {
public:
    P1Point() = default;  // infinity
    P1Point(PadicNumber z) : z_(std::move(z)) {}
    static P1Point infinity() { return P1Point(); }

    bool is_infinity() const { return !z_.has_value(); }
    const PadicNumber& value() const;
    std::string to_string() const;

private:
    std::optional<PadicNumber> z_;
};

// Agreement valuation of two points; infinity agrees with infinity exactly.
std::int64_t point_agreement(const P1Point& a, const P1Point& b);

class ProjectiveMatrix {
public:
    ProjectiveMatrix(PadicNumber a, PadicNumber b, PadicNumber c, PadicNumber d);
    static ProjectiveMatrix identity(const Field& f);
    static ProjectiveMatrix diagonal(const PadicNumber& x, const PadicNumber& y);

    const PadicNumber& a() const { return a_; }
    const PadicNumber& b() const { return b_; }
    const PadicNumber& c() const { return c_; }
    const PadicNumber& d() const { return d_; }
    const Field& field() const { return a_.has_field() ? a_.field() : d_.field(); }

    PadicNumber determinant() const { return a_ * d_ - b_ * c_; }
    PadicNumber trace() const { return a_ + d_; }
    // Adjugate; equals the inverse projectively.
    ProjectiveMatrix inverse() const;
    bool is_scalar() const;
    // Scalar multiple with determinant 1, or nullopt if det is not a square.
    std::optional<ProjectiveMatrix> unimodular() const;
    std::string to_string() const;

    friend ProjectiveMatrix operator*(const ProjectiveMatrix& x, const ProjectiveMatrix& y);

private:
    void rescale();
    PadicNumber a_, b_, c_, d_;
};

bool projectively_equal(const ProjectiveMatrix& x, const ProjectiveMatrix& y);
// Agreement valuation of x and y after scaling both to a common entry.
std::int64_t projective_agreement(const ProjectiveMatrix& x, const ProjectiveMatrix& y);

P1Point apply(const ProjectiveMatrix& m, const P1Point& z);
// As apply, but z is lifted to full precision first and the image keeps
// prec(z) + v(m'(z)) digits. Error propagation is first order, which is exact
// for the small perturbations a truncated z carries.
P1Point apply_first_order(const ProjectiveMatrix& m, const P1Point& z);
std::pair<P1Point, P1Point> fixed_points(const ProjectiveMatrix& m);
std::optional<int> projective_order(const ProjectiveMatrix& m, int bound);
// Derivative of the action at a finite fixed point, or the reciprocal
// multiplier at infinity; a root of unity for elliptic elements.
PadicNumber multiplier_at(const ProjectiveMatrix& m, const P1Point& fixed);

struct Diagonalization {
    ProjectiveMatrix conjugator;  // sends o to 0 and e to infinity
    int exponent = 0;             // m = conj^-1 diag(zeta^exponent, 1) conj
    P1Point o, e;
};

// zeta is the chosen primitive p-th root of unity.
Diagonalization diagonalize(const ProjectiveMatrix& m, const PadicNumber& zeta, int p);
// Conjugator sending (o, e) to (0, infinity).
ProjectiveMatrix frame_conjugator(const P1Point& o, const P1Point& e);

}  // namespace mumford
