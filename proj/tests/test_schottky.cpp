#include <random>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"

using namespace mumford;

TEST_CASE("free basis shapes") {
    auto h = fixtures::hyperelliptic();
    CHECK(h.rank == 2);
    CHECK(h.basis_names() == std::vector<std::string>{"x1_1", "x2_1"});
    auto c = fixtures::cyclic3();
    CHECK(c.rank == 2);
    CHECK(c.basis_names() == std::vector<std::string>{"x1_1", "x1_2"});
    auto t = fixtures::tate();
    CHECK(t.rank == 1);
    // xi_{1,2} = sigma_0 xi_{1,1} sigma_0^-1
    auto s0 = c.generators[0].matrix;
    CHECK(projective_agreement(c.basis[1].matrix, s0 * c.basis[0].matrix * s0.inverse()) >= 15);
    CHECK(check_conjugation_product(h));
    CHECK(check_conjugation_product(c));
}

TEST_CASE("exponents and fixed points") {
    auto h = fixtures::hyperelliptic();
    for (const auto& g : h.generators) CHECK(g.nu == 1);
    CHECK(h.generators[0].e.is_infinity());
    auto c = fixtures::cyclic3();
    for (const auto& g : c.generators) {
        CHECK(agreement(multiplier_at(g.matrix, g.o), c.zeta.pow(g.nu)) >= 12);
        CHECK(agreement(multiplier_at(g.matrix, g.e), c.zeta.pow(-g.nu)) >= 12);
    }
}

TEST_CASE("rewrite examples") {
    auto c = fixtures::cyclic3();
    CHECK(rewrite_to_basis(c, {{1, 1}, {0, -1}}) == Word::letter(0, 1));
    CHECK(rewrite_to_basis(c, {{0, 1}, {1, 1}, {0, -2}}) == Word::letter(1, 1));
    auto h = fixtures::hyperelliptic();
    CHECK(rewrite_to_basis(h, {{1, 1}, {2, 1}}) == Word({{0, 1}, {1, -1}}));
    CHECK_THROWS_WITH_AS(rewrite_to_basis(h, {{1, 1}}), "not in kernel", DomainError);
}

TEST_CASE("rewrite is a homomorphism and preserves matrices") {
    std::mt19937_64 rng(23);
    for (auto g : {fixtures::hyperelliptic(), fixtures::cyclic3()}) {
        auto random_word = [&] {
            SigmaWord w;
            int deg = 0;
            const int n = 1 + static_cast<int>(rng() % 6);
            for (int k = 0; k < n; ++k) {
                SigmaLetter l{static_cast<int>(rng() % static_cast<std::uint64_t>(g.s() + 1)), static_cast<int>(rng() % 5) - 2};
                deg += l.exponent;
                w.push_back(l);
            }
            const int fix = ((-deg) % g.p + g.p) % g.p;
            if (fix) w.push_back({0, fix});
            return w;
        };
        for (int k = 0; k < 40; ++k) {
            auto w1 = random_word();
            auto w2 = random_word();
            SigmaWord w12 = w1;
            w12.insert(w12.end(), w2.begin(), w2.end());
            auto r1 = rewrite_to_basis(g, w1);
            auto r2 = rewrite_to_basis(g, w2);
            CHECK(rewrite_to_basis(g, w12) == r1 * r2);
            CHECK(projective_agreement(g.matrix_of(r1), g.matrix_of(w1)) >= 10);
            CHECK(rewrite_to_basis(g, sigma_word_of(r1, g)) == r1);
        }
    }
}

TEST_CASE("shell sizes") {
    auto h = fixtures::hyperelliptic();
    auto table = word_table(h, 5);
    CHECK(table->shell_end(0) - table->shell_begin(0) == 1);
    std::size_t expect = 4;
    for (int l = 1; l <= 5; ++l) {
        CHECK(table->shell_end(l) - table->shell_begin(l) == expect);
        expect *= 3;
    }
    auto t = word_table(fixtures::tate(), 4);
    for (int l = 1; l <= 4; ++l) CHECK(t->shell_end(l) - t->shell_begin(l) == 2);
    // words are reduced, distinct, and sit in the shell of their length
    std::set<std::string> seen;
    for (int l = 0; l <= 5; ++l)
        for (std::size_t k = table->shell_begin(l); k < table->shell_end(l); ++k) {
            auto w = table->word(k);
            CHECK(w.length() == static_cast<std::size_t>(l));
            seen.insert(w.to_string(h.basis_names()));
        }
    CHECK(seen.size() == table->shell_end(5));
}

TEST_CASE("ping-pong") {
    CHECK(ping_pong_check(fixtures::hyperelliptic()).pass);
    CHECK(ping_pong_check(fixtures::cyclic3()).pass);
    CHECK(ping_pong_check(fixtures::tate()).pass);
    const Field& f = Field::get(7, 20);
    auto dup = build_group({7, 20, 2}, {fixtures::ints(f, {-1, 0, 0, 1}), fixtures::ints(f, fixtures::involution(1, 50)),
                                        fixtures::ints(f, fixtures::involution(1, 50))});
    auto rep = ping_pong_check(dup);
    CHECK_FALSE(rep.pass);
    CHECK_FALSE(rep.overlaps.empty());
}

TEST_CASE("freeness smoke test") {
    auto h = fixtures::hyperelliptic();
    auto table = word_table(h, 6);
    for (std::size_t k = 1; k < table->size(); ++k) CHECK_FALSE(table->entry(k).matrix.is_scalar());
}
