#include <random>

#include "doctest.h"
#include "fixtures.hpp"

using namespace mumford;
using fixtures::ints;

namespace {

P1Point pt(const Field& f, std::int64_t n) { return P1Point(PadicNumber::from_int(f, n)); }

}  // namespace

TEST_CASE("apply examples") {
    const Field& f = Field::get(7, 10);
    auto m = ints(f, {0, 4, 1, 0});
    CHECK(point_agreement(apply(m, pt(f, 1)), pt(f, 4)) >= 10);
    CHECK(point_agreement(apply(m, P1Point::infinity()), pt(f, 0)) >= 10);
    CHECK(apply(m, pt(f, 0)).is_infinity());
    auto id = ProjectiveMatrix::identity(f);
    CHECK(point_agreement(apply(id, pt(f, 5)), pt(f, 5)) >= 10);
}

TEST_CASE("fixed points examples") {
    const Field& f = Field::get(7, 10);
    auto [a, b] = fixed_points(ints(f, {0, 4, 1, 0}));
    CHECK(point_agreement(a, pt(f, 2)) >= 9);
    CHECK(point_agreement(b, pt(f, -2)) >= 9);
    auto zeta = primitive_root_of_unity(f, 3);
    auto [c, d] = fixed_points(ProjectiveMatrix::diagonal(zeta, PadicNumber::one(f)));
    CHECK(point_agreement(c, pt(f, 0)) >= 10);
    CHECK(d.is_infinity());
    CHECK_THROWS_WITH_AS(fixed_points(ints(f, {1, 1, 0, 1})), "parabolic element unsupported", DomainError);
    // z^2 = 3 has no root in Q_7
    CHECK_THROWS_WITH_AS(fixed_points(ints(f, {0, 3, 1, 0})), "fixed points not rational", DomainError);
}

TEST_CASE("projective order") {
    const Field& f = Field::get(7, 10);
    CHECK(projective_order(ProjectiveMatrix::identity(f), 5) == 1);
    CHECK(projective_order(ints(f, {0, 4, 1, 0}), 5) == 2);
    auto zeta = primitive_root_of_unity(f, 3);
    CHECK(projective_order(ProjectiveMatrix::diagonal(zeta, PadicNumber::one(f)), 5) == 3);
    CHECK(projective_order(ints(f, {0, -1, 1, -1}), 5) == 3);
    CHECK_FALSE(projective_order(ints(f, {2, 0, 0, 1}), 5).has_value());
}

TEST_CASE("diagonalize") {
    const Field& f = Field::get(7, 12);
    auto zeta = primitive_root_of_unity(f, 3);
    auto one = PadicNumber::one(f);
    auto d0 = diagonalize(ProjectiveMatrix::diagonal(zeta, one), zeta, 3);
    CHECK(d0.exponent == 1);
    CHECK(projectively_equal(d0.conjugator, ProjectiveMatrix::identity(f)));

    auto ups = ints(f, {2, 1, 3, 5});
    auto m = ups.inverse() * ProjectiveMatrix::diagonal(zeta.pow(2), one) * ups;
    auto d = diagonalize(m, zeta, 3);
    CHECK(d.exponent == 2);
    auto back = d.conjugator.inverse() * ProjectiveMatrix::diagonal(zeta.pow(d.exponent), one) * d.conjugator;
    CHECK(projective_agreement(back, m) >= 8);

    auto minus = -one;
    auto inv = diagonalize(ints(f, {0, 4, 1, 0}), minus, 2);
    CHECK(inv.exponent == 1);
    CHECK(point_agreement(apply(inv.conjugator, pt(f, 2)), pt(f, 0)) >= 10);
    CHECK(apply(inv.conjugator, pt(f, -2)).is_infinity());
    auto conj = inv.conjugator * ints(f, {0, 4, 1, 0}) * inv.conjugator.inverse();
    CHECK(conj.b().is_zero());
    CHECK(conj.c().is_zero());
}

TEST_CASE("fixed points are fixed and apply is an action") {
    const Field& f = Field::get(7, 15);
    std::mt19937_64 rng(11);
    auto rnd = [&] { return static_cast<std::int64_t>(rng() % 97) - 48; };
    int checked = 0;
    for (int k = 0; k < 200 && checked < 50; ++k) {
        auto m = ints(f, {rnd(), rnd(), rnd(), rnd()});
        auto n = ints(f, {rnd(), rnd(), rnd(), rnd()});
        if (m.determinant().is_zero() || n.determinant().is_zero()) continue;
        auto z = pt(f, rnd() * 7 + 3);
        try {
            auto lhs = apply(m * n, z);
            auto rhs = apply(m, apply(n, z));
            CHECK(point_agreement(lhs, rhs) >= 8);
            auto [a, b] = fixed_points(m);
            CHECK(point_agreement(apply(m, a), a) >= 8);
            CHECK(point_agreement(apply(m, b), b) >= 8);
            ++checked;
        } catch (const DomainError&) {
            // irrational or parabolic samples are skipped
        }
    }
    CHECK(checked >= 10);
}
