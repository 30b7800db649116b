#include "mumford/jacobian.hpp"

#include <algorithm>
#include <random>

#include "mumford/parallel.hpp"

namespace mumford {

Character Character::identity(const Field& f, int rank) {
    Character c;
    c.values.assign(static_cast<std::size_t>(rank), PadicNumber::one(f));
    return c;
}

PadicNumber Character::eval(const Word& w) const {
    if (values.empty()) throw DomainError("empty character");
    PadicNumber out = PadicNumber::one(values.front().field());
    const auto exps = w.abelianize(rank());
    for (std::size_t k = 0; k < values.size(); ++k)
        if (exps[k] != 0) out *= values[k].pow(exps[k]);
    return out;
}

Character Character::inverse() const {
    Character c = *this;
    for (auto& v : c.values) v = v.inverse();
    return c;
}

Character Character::pow(std::int64_t k) const {
    Character c = *this;
    for (auto& v : c.values) v = v.pow(k);
    return c;
}

Character operator*(const Character& x, const Character& y) {
    if (x.rank() != y.rank()) throw DomainError("character rank mismatch");
    Character c = x;
    for (std::size_t k = 0; k < c.values.size(); ++k) c.values[k] *= y.values[k];
    c.tail = std::min(x.tail, y.tail);
    return c;
}

std::int64_t character_deviation(const Character& x, const Character& y) {
    if (x.rank() != y.rank()) throw DomainError("character rank mismatch");
    std::int64_t d = PadicNumber::kExact;
    for (std::size_t k = 0; k < x.values.size(); ++k) d = std::min(d, relative_deviation(x.values[k], y.values[k]));
    return d;
}

Character PeriodMatrix::lattice(int k) const {
    Character c;
    c.values = q.at(static_cast<std::size_t>(k));
    c.tail = tail;
    return c;
}

Divisor& Divisor::add(const P1Point& p, int multiplicity, std::string label) {
    if (multiplicity != 0) terms_.push_back({std::move(label), p, multiplicity});
    return *this;
}

Divisor& Divisor::add_branch(const GroupData& g, const std::string& label, int multiplicity) {
    return add(branch_point(g, label), multiplicity, label);
}

int Divisor::degree() const {
    int d = 0;
    for (const auto& t : terms_) d += t.multiplicity;
    return d;
}

std::string Divisor::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& t : terms_) {
        if (!out.empty()) out += t.multiplicity < 0 ? " - " : " + ";
        else if (t.multiplicity < 0) out += "-";
        const int m = std::abs(t.multiplicity);
        if (m != 1) out += std::to_string(m) + "*";
        out += t.label.empty() ? "(" + t.point.to_string() + ")" : t.label;
    }
    return out;
}

Divisor operator+(const Divisor& x, const Divisor& y) {
    Divisor d = x;
    for (const auto& t : y.terms_) d.terms_.push_back(t);
    return d;
}

Divisor operator-(const Divisor& x, const Divisor& y) {
    Divisor d = x;
    for (auto t : y.terms_) {
        t.multiplicity = -t.multiplicity;
        d.terms_.push_back(std::move(t));
    }
    return d;
}

P1Point branch_point(const GroupData& g, const std::string& label) {
    if (label.size() < 2 || (label[0] != 'o' && label[0] != 'e'))
        throw DomainError("branch point label must be o<i> or e<i>: " + label);
    int i = -1;
    try {
        std::size_t used = 0;
        i = std::stoi(label.substr(1), &used);
        if (used != label.size() - 1) i = -1;
    } catch (const std::exception&) {
        i = -1;
    }
    if (i < 0 || i > g.s()) throw DomainError("no branch point " + label);
    const auto& gen = g.generators[static_cast<std::size_t>(i)];
    return label[0] == 'o' ? gen.o : gen.e;
}

Jacobian::Jacobian(const ThetaEngine& engine, std::uint64_t seed) : engine_(engine) {
    // decorrelated from callers that draw sample points with the same seed
    ProbeGenerator gen(engine.group(), seed ^ 0x9e3779b97f4a7c15ULL);
    probe1_ = gen.next();
    probe2_ = gen.next();
}

Character Jacobian::abel(const P1Point& x, const P1Point& o) const {
    const GroupData& g = group();
    Character c = Character::identity(*g.field, g.rank);
    const std::int64_t n = g.field->precision();
    const P1Point& z0 = point_agreement(x, probe1_) >= n || point_agreement(o, probe1_) >= n ? probe2_ : probe1_;
    for (int k = 0; k < g.rank; ++k) {
        auto v = engine_.automorphy_constant(x, o, Word::letter(k, 1), z0);
        c.values[static_cast<std::size_t>(k)] = v.value;
        c.tail = std::min(c.tail, v.tail_valuation);
    }
    return c;
}

Character Jacobian::abel(const Divisor& d, const P1Point& o) const {
    const GroupData& g = group();
    Character c = Character::identity(*g.field, g.rank);
    for (const auto& t : d.terms()) c = c * abel(t.point, o).pow(t.multiplicity);
    return c;
}

const PeriodMatrix& Jacobian::period_matrix() const {
    if (!periods_) periods_ = compute_period_matrix(engine_, probe1_, probe2_);
    return *periods_;
}

PeriodMatrix compute_period_matrix(const ThetaEngine& engine, const P1Point& probe1, const P1Point& probe2) {
    const GroupData& g = engine.group();
    const std::int64_t T = engine.policy().tail;
    const auto n = static_cast<std::size_t>(g.rank);
    PeriodMatrix pm;
    pm.q.assign(n, std::vector<PadicNumber>(n));
    pm.tail = T;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            pm.q[i][j] = engine.multiplier(Word::letter(static_cast<int>(i), 1), Word::letter(static_cast<int>(j), 1),
                                           probe1, probe2);
    pm.symmetry_deviation = PadicNumber::kExact;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            pm.symmetry_deviation = std::min(pm.symmetry_deviation, relative_deviation(pm.q[i][j], pm.q[j][i]));
    if (pm.symmetry_deviation < T)
        throw ConvergenceError("period matrix not symmetric (deviation " + std::to_string(pm.symmetry_deviation) + ")");
    for (std::size_t i = 0; i < n; ++i)
        if (pm.q[i][i].valuation() <= 0) throw ConvergenceError("lattice not positive");

    pm.rho.resize(n);
    if (g.p == 2) {
        // rho_i = c_{e_i,e_0}(xi_i)
        pm.rho_source = "c_{e_i,e_0}(xi_i)";
        for (std::size_t i = 0; i < n; ++i) {
            const auto& gi = g.generators[i + 1];
            pm.rho[i] = engine.automorphy_constant(gi.e, g.generators[0].e, Word::letter(static_cast<int>(i), 1), probe1).value;
        }
    } else {
        pm.rho_source = "square root";
        for (std::size_t i = 0; i < n; ++i) {
            try {
                pm.rho[i] = hensel_sqrt(pm.q[i][i]);
            } catch (const DomainError&) {
                throw DomainError("polarization requires extension field; supply hyperelliptic choice or change config");
            }
        }
    }
    pm.rho_deviation = PadicNumber::kExact;
    for (std::size_t i = 0; i < n; ++i)
        pm.rho_deviation = std::min(pm.rho_deviation, relative_deviation(pm.rho[i] * pm.rho[i], pm.q[i][i]));
    return pm;
}

namespace {

// Leading principal minors of an integer matrix by fraction-free elimination.
bool positive_definite(std::vector<std::vector<__int128>> a) {
    const std::size_t n = a.size();
    __int128 prev = 1;
    for (std::size_t k = 0; k < n; ++k) {
        if (a[k][k] <= 0) return false;
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return true;
}

void box_shell(int g, int m, std::vector<std::vector<int>>& out) {
    std::vector<int> n(static_cast<std::size_t>(g), -m);
    while (true) {
        int top = 0;
        for (int x : n) top = std::max(top, std::abs(x));
        if (top == m) out.push_back(n);
        std::size_t i = 0;
        while (i < n.size() && n[i] == m) n[i++] = -m;
        if (i == n.size()) break;
        ++n[i];
    }
}

}  // namespace

ThetaValue riemann_theta(const Character& c, const PeriodMatrix& pm, int max_box, int tail, int min_box) {
    const int g = pm.rank();
    if (c.rank() != g) throw DomainError("character rank mismatch");
    if (max_box < 0) throw DomainError("theta box must be >= 0");
    const Field& f = pm.q.at(0).at(0).field();
    std::vector<std::vector<__int128>> form(static_cast<std::size_t>(g), std::vector<__int128>(static_cast<std::size_t>(g)));
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j)
            form[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                pm.q[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].valuation();
    if (!positive_definite(form)) throw DomainError("lattice not positive");

    auto term = [&](const std::vector<int>& n) {
        PadicNumber t = PadicNumber::one(f);
        for (std::size_t i = 0; i < n.size(); ++i) {
            if (n[i] == 0) continue;
            t *= pm.rho[i].pow(static_cast<std::int64_t>(n[i]) * n[i]);
            t *= c.values[i].pow(n[i]);
            for (std::size_t j = i + 1; j < n.size(); ++j)
                if (n[j] != 0) t *= pm.q[i][j].pow(static_cast<std::int64_t>(n[i]) * n[j]);
        }
        return t;
    };

    PadicAccumulator sum(f);
    sum.add(PadicNumber::one(f));
    if (max_box == 0) return {sum.value(), 0, 0};
    std::int64_t prev = std::numeric_limits<std::int64_t>::min();
    for (int m = 1; m <= max_box; ++m) {
        std::vector<std::vector<int>> shell;
        box_shell(g, m, shell);
        const std::size_t chunks = static_cast<std::size_t>(std::max(1, worker_threads()));
        std::vector<PadicAccumulator> parts(chunks, PadicAccumulator(f));
        std::vector<std::int64_t> lows(chunks, PadicNumber::kExact);
        parallel_chunks(shell.size(), 64, [&](std::size_t ch, std::size_t b, std::size_t e) {
            for (std::size_t k = b; k < e; ++k) {
                PadicNumber t = term(shell[k]);
                lows[ch] = std::min(lows[ch], t.is_zero() ? t.absolute_precision() : t.valuation());
                parts[ch].add(t);
            }
        });
        std::int64_t low = PadicNumber::kExact;
        for (std::size_t ch = 0; ch < chunks; ++ch) {
            sum.merge(parts[ch]);
            low = std::min(low, lows[ch]);
        }
        if (m >= min_box && low >= tail && low >= prev) return {sum.value(), low, m};
        prev = low;
    }
    throw ConvergenceError("theta series not converged at M=" + std::to_string(max_box) + " (boundary valuation " +
                           std::to_string(prev) + ", target " + std::to_string(tail) + ")");
}

ThetaValue theta_with_characteristic(const Character& c, const Divisor& d, const Divisor& k, const P1Point& o,
                                     const Jacobian& jac, int max_box, int tail, int min_box) {
    return riemann_theta(c / jac.abel(d - k, o), jac.period_matrix(), max_box, tail, min_box);
}

namespace {

struct Tally {
    IdentityCheck check;
    std::int64_t target;
    Tally(std::string name, std::string detail, std::int64_t t, bool informational = false) : target(t) {
        check.name = std::move(name);
        check.detail = std::move(detail);
        check.deviation = PadicNumber::kExact;
        check.tail = PadicNumber::kExact;
        check.informational = informational;
    }
    void record(const PadicNumber& lhs, const PadicNumber& rhs, std::int64_t tail, int shells) {
        check.deviation = std::min(check.deviation, relative_deviation(lhs, rhs));
        check.tail = std::min(check.tail, tail);
        check.shells = std::max(check.shells, shells);
        ++check.probes;
    }
    IdentityCheck done() {
        check.pass = check.deviation >= target;
        return check;
    }
};

}  // namespace

LemmaSuiteReport verify_branch_point_images(const Jacobian& jac, std::uint64_t seed) {
    const ThetaEngine& engine = jac.engine();
    const GroupData& g = engine.group();
    const Field& f = *g.field;
    const std::int64_t T = engine.policy().tail;
    ProbeGenerator gen(g, seed);
    const P1Point z0 = gen.next(), z1 = gen.next();
    const auto& g0 = g.generators[0];
    auto c = [&](const P1Point& a, const P1Point& b, const Word& w) { return engine.automorphy_constant(a, b, w, z0); };
    LemmaSuiteReport rep;

    {
        Tally printed("Branch images item 1", "c_{o_0,e_0}(xi_{j,k}) = zeta^nu_0 on the free basis", T);
        Tally inverse("Branch images item 1 (zeta^-nu_0)", "c_{o_0,e_0}(xi_{j,k}) = zeta^-nu_0 on the free basis", T, true);
        Tally words("Branch images item 1 (words)", "c_{o_0,e_0}(gamma) = zeta^nu_0 on random words of length <= 3", T, true);
        for (int k = 0; k < g.rank; ++k) {
            auto v = c(g0.o, g0.e, Word::letter(k, 1));
            printed.record(v.value, g.zeta.pow(g0.nu), v.tail_valuation, v.shells);
            inverse.record(v.value, g.zeta.pow(-g0.nu), v.tail_valuation, v.shells);
        }
        std::mt19937_64 rng(seed);
        for (int t = 0; t < 6; ++t) {
            std::vector<Letter> letters;
            const int len = 1 + static_cast<int>(rng() % 3);
            for (int i = 0; i < len; ++i)
                letters.push_back({static_cast<int>(rng() % static_cast<std::uint64_t>(g.rank)), rng() % 2 ? 1 : -1});
            const Word w(std::move(letters));
            if (w.empty()) continue;
            auto v = c(g0.o, g0.e, w);
            words.record(v.value, g.zeta.pow(g0.nu), v.tail_valuation, v.shells);
        }
        rep.checks.push_back(printed.done());
        rep.checks.push_back(inverse.done());
        rep.checks.push_back(words.done());
    }
    {
        Tally item("Branch images item 2",
                   "c_{o_i,o_0}^p(gamma) = c_{e_i,o_0}^p(gamma) = prod_j c_{eps_{i,j}}(gamma), eps_{i,j} = sigma_i^j sigma_0^-j", T);
        for (int i = 1; i <= g.s(); ++i) {
            const auto& gi = g.generators[static_cast<std::size_t>(i)];
            std::vector<Word> eps;
            for (int j = 1; j < g.p; ++j) eps.push_back(rewrite_to_basis(g, {{i, j}, {0, -j}}));
            for (int k = 0; k < g.rank; ++k) {
                const Word gamma = Word::letter(k, 1);
                PadicNumber rhs = PadicNumber::one(f);
                for (const auto& e : eps) rhs *= engine.multiplier(e, gamma, z0, z1);
                auto lo = c(gi.o, g0.o, gamma);
                auto le = c(gi.e, g0.o, gamma);
                item.record(lo.value.pow(g.p), rhs, lo.tail_valuation, lo.shells);
                item.record(le.value.pow(g.p), rhs, le.tail_valuation, le.shells);
            }
        }
        rep.checks.push_back(item.done());
    }
    {
        Tally item("Branch images item 3", "c_{o_i,e_i}(xi_{j,k}) = zeta^(nu_i delta_ij), i, j >= 1", T);
        for (int i = 1; i <= g.s(); ++i) {
            const auto& gi = g.generators[static_cast<std::size_t>(i)];
            for (const auto& b : g.basis) {
                auto v = c(gi.o, gi.e, Word::letter(g.basis_index(b.j, b.i), 1));
                item.record(v.value, g.zeta.pow(b.j == i ? gi.nu : 0), v.tail_valuation, v.shells);
            }
        }
        rep.checks.push_back(item.done());
    }
    if (g.p == 2) {
        Tally base("Hyperelliptic c_{o_0,e_0}(xi_i) = -1", "p = 2 specialization", T);
        Tally sign("Hyperelliptic c_{o_i,e_i}(xi_j) = (-1)^delta_ij", "p = 2 specialization, i, j >= 1", T);
        Tally prod("Hyperelliptic c_{o_i,e_0} = c_{o_i,e_i} c_{e_i,e_0}", "evaluated on the free basis", T);
        const PadicNumber minus = -PadicNumber::one(f);
        for (int k = 0; k < g.rank; ++k) {
            auto v = c(g0.o, g0.e, Word::letter(k, 1));
            base.record(v.value, minus, v.tail_valuation, v.shells);
        }
        for (int i = 1; i <= g.s(); ++i) {
            const auto& gi = g.generators[static_cast<std::size_t>(i)];
            for (int k = 0; k < g.rank; ++k) {
                const Word w = Word::letter(k, 1);
                auto oe = c(gi.o, gi.e, w);
                sign.record(oe.value, k + 1 == i ? minus : PadicNumber::one(f), oe.tail_valuation, oe.shells);
                auto o0 = c(gi.o, g0.e, w);
                auto e0 = c(gi.e, g0.e, w);
                prod.record(o0.value, oe.value * e0.value, std::min({o0.tail_valuation, oe.tail_valuation, e0.tail_valuation}),
                            std::max({o0.shells, oe.shells, e0.shells}));
            }
        }
        rep.checks.push_back(base.done());
        rep.checks.push_back(sign.done());
        rep.checks.push_back(prod.done());
    }
    return rep;
}

}  // namespace mumford
