#include "mumford/lambda.hpp"

#include <algorithm>
#include <cmath>

#include "mumford/parallel.hpp"

namespace mumford {

std::string hyperelliptic_label(int label) {
    if (label < 1) throw DomainError("branch labels start at 1");
    if (label == 1) return "e0";
    if (label == 2) return "o0";
    const int i = (label - 1) / 2;
    return (label % 2 == 1 ? "o" : "e") + std::to_string(i);
}

P1Point hyperelliptic_branch_point(const GroupData& g, int label) {
    return branch_point(g, hyperelliptic_label(label));
}

P1Point hyperelliptic_branch_value(const CurveModel& curve, int label) {
    if (label == 1) return P1Point::infinity();
    if (label == 2) return P1Point(curve.a.at(0));
    const auto i = static_cast<std::size_t>((label - 1) / 2);
    if (i >= curve.a.size()) throw DomainError("no branch point B_" + std::to_string(label));
    return label % 2 == 1 ? P1Point(curve.a[i]) : curve.b[i];
}

Divisor hyperelliptic_riemann_divisor(const GroupData& g) {
    if (g.p != 2) throw DomainError("Riemann divisor is only known in the hyperelliptic case");
    Divisor k;
    for (int label = 3; label <= 2 * g.s() + 1; label += 2) k.add_branch(g, hyperelliptic_label(label), 1);
    return k;
}

Character characteristic_shift(const std::set<int>& P, const Jacobian& jac) {
    const GroupData& g = jac.group();
    Divisor d = hyperelliptic_riemann_divisor(g);
    for (int label : P) d.add_branch(g, hyperelliptic_label(label), 1);
    return jac.abel(d, hyperelliptic_branch_point(g, 1));
}

ThetaValue theta_char_hyper(const std::set<int>& P, const Character& c, const Jacobian& jac, int max_box,
                            int min_box) {
    return riemann_theta(c / characteristic_shift(P, jac), jac.period_matrix(), max_box,
                         static_cast<int>(jac.engine().policy().tail), min_box);
}

std::optional<std::vector<int>> lattice_coordinates(const Character& x, const PeriodMatrix& pm, std::int64_t tolerance) {
    const int n = pm.rank();
    if (x.rank() != n) throw DomainError("character rank mismatch");
    // v(x_i) = sum_k kappa_k v(Q_ki)
    std::vector<std::vector<double>> a(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n) + 1));
    for (int i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        if (x.values[ui].is_zero()) return std::nullopt;
        for (int k = 0; k < n; ++k)
            a[ui][static_cast<std::size_t>(k)] = static_cast<double>(pm.q[static_cast<std::size_t>(k)][ui].valuation());
        a[ui][static_cast<std::size_t>(n)] = static_cast<double>(x.values[ui].valuation());
    }
    for (std::size_t c = 0; c < a.size(); ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < a.size(); ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        if (a[c][c] == 0) return std::nullopt;
        for (std::size_t r = 0; r < a.size(); ++r) {
            if (r == c) continue;
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < a[r].size(); ++k) a[r][k] -= f * a[c][k];
        }
    }
    std::vector<int> kappa(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < kappa.size(); ++i) {
        const double v = a[i][kappa.size()] / a[i][i];
        kappa[i] = static_cast<int>(std::lround(v));
        if (std::abs(v - kappa[i]) > 1e-9) return std::nullopt;
    }
    Character lattice = Character::identity(pm.q[0][0].field(), n);
    for (int k = 0; k < n; ++k) lattice = lattice * pm.lattice(k).pow(kappa[static_cast<std::size_t>(k)]);
    if (character_deviation(x, lattice) < tolerance) return std::nullopt;
    return kappa;
}

PadicNumber cross_ratio(const P1Point& a, const P1Point& b, const P1Point& c, const P1Point& d) {
    const int infinite = a.is_infinity() + b.is_infinity() + c.is_infinity() + d.is_infinity();
    if (infinite > 1) throw DomainError("degenerate quadruple: more than one point at infinity");
    auto diff = [](const P1Point& x, const P1Point& y) -> std::optional<PadicNumber> {
        if (x.is_infinity() || y.is_infinity()) return std::nullopt;
        return x.value() - y.value();
    };
    // factors containing infinity cancel between numerator and denominator
    const auto ac = diff(a, c), bd = diff(b, d), ad = diff(a, d), bc = diff(b, c);
    const Field& f = (a.is_infinity() ? b : a).value().field();
    PadicNumber num = PadicNumber::one(f), den = PadicNumber::one(f);
    if (ac) num *= *ac;
    if (bd) num *= *bd;
    if (ad) den *= *ad;
    if (bc) den *= *bc;
    if (den.is_zero()) throw DomainError("degenerate quadruple: denominator vanishes");
    return num / den;
}

namespace {

PadicNumber kappa_eval(const Character& c, const std::vector<int>& kappa) {
    PadicNumber out = PadicNumber::one(c.values.front().field());
    for (std::size_t k = 0; k < kappa.size(); ++k)
        if (kappa[k] != 0) out *= c.values[k].pow(kappa[k]);
    return out;
}

void check_sets(const GroupData& g, const std::set<int>& P1, const std::set<int>& P2) {
    const int top = 2 * g.s() + 1;
    std::set<int> odd;
    for (int label = 3; label <= top; label += 2) odd.insert(label);
    for (const auto* P : {&P1, &P2})
        for (int label : *P)
            if (label < 1 || label > top) throw DomainError("characteristic labels must lie in 1.." + std::to_string(top));
    if (P1 == odd || P2 == odd) throw DomainError("characteristic set equals the odd set O");
    std::vector<int> sym;
    std::set_symmetric_difference(P1.begin(), P1.end(), P2.begin(), P2.end(), std::back_inserter(sym));
    if (sym.size() != 2) throw DomainError("characteristic sets must differ in exactly one element");
}

}  // namespace

LambdaValue lambda_ratio(const std::set<int>& P1, const std::set<int>& P2, const P1Point& Q1, const P1Point& Q2,
                         const Jacobian& jac, int max_box, int min_box) {
    const GroupData& g = jac.group();
    check_sets(g, P1, P2);
    const std::int64_t T = jac.engine().policy().tail;
    const P1Point base = hyperelliptic_branch_point(g, 1);
    const Character u1 = jac.abel(Q1, base), u2 = jac.abel(Q2, base);
    const Character w1 = characteristic_shift(P1, jac), w2 = characteristic_shift(P2, jac);
    const PeriodMatrix& pm = jac.period_matrix();

    std::vector<ThetaValue> th(4);
    const Character args[4] = {u1 / w1, u2 / w2, u2 / w1, u1 / w2};
    std::vector<std::function<void()>> tasks;
    for (std::size_t k = 0; k < 4; ++k)
        tasks.push_back([&, k] { th[k] = riemann_theta(args[k], pm, max_box, static_cast<int>(T), min_box); });
    parallel_invoke(tasks);

    LambdaValue out;
    for (const auto& t : th) {
        if (t.value.is_zero() || t.value.valuation() >= T) throw DomainError("special configuration, choose other Q");
        out.tail = std::min({out.tail, t.tail_valuation, u1.tail, u2.tail});
        out.box = std::max(out.box, t.shells);
    }
    auto sq = [](const PadicNumber& x) { return x * x; };
    out.raw = sq(th[0].value) * sq(th[1].value) / (sq(th[2].value) * sq(th[3].value));
    const Character ratio = (w1 / w2).pow(2);
    auto kappa = lattice_coordinates(ratio, pm, T);
    if (!kappa) throw ConvergenceError("characteristic difference is not 2-torsion to the tail bound");
    out.kappa = *kappa;
    out.normalized = out.raw * kappa_eval(u2, out.kappa) / kappa_eval(u1, out.kappa);
    return out;
}

CrossRatioReport verify_cross_ratio_theorem(const Jacobian& jac, const CurveModel& curve, const CrossRatioRequest& req) {
    const GroupData& g = jac.group();
    if (g.p != 2) throw DomainError("cross-ratio theorem is stated for the hyperelliptic case");
    check_sets(g, req.P1, req.P2);
    CrossRatioReport rep;
    rep.P1 = req.P1;
    rep.P2 = req.P2;
    for (int x : req.P1)
        if (!req.P2.count(x)) rep.l = x;
    for (int x : req.P2)
        if (!req.P1.count(x)) rep.m = x;
    rep.k = req.k;
    rep.j = req.j;
    const int top = 2 * g.s() + 2;
    for (int x : {req.k, req.j})
        if (x < 1 || x > top || req.P1.count(x) || req.P2.count(x))
            throw DomainError("k and j must be branch labels outside P1 and P2");
    if (req.k == req.j) throw DomainError("k and j must differ");

    const P1Point Qk = hyperelliptic_branch_point(g, req.k), Qj = hyperelliptic_branch_point(g, req.j);
    rep.lhs = lambda_ratio(req.P1, req.P2, Qk, Qj, jac, req.max_box, req.min_box);
    rep.rhs = cross_ratio(hyperelliptic_branch_value(curve, req.k), hyperelliptic_branch_value(curve, req.j),
                          hyperelliptic_branch_value(curve, rep.l), hyperelliptic_branch_value(curve, rep.m));
    rep.deviation = relative_deviation(rep.lhs.normalized, rep.rhs);
    rep.raw_deviation = relative_deviation(rep.lhs.raw, rep.rhs);
    rep.pass = rep.deviation >= jac.engine().policy().tail;

    // denominator as displayed: theta^2[P1](u(B_j)) theta^2[P1](u(B_l))
    const std::int64_t T = jac.engine().policy().tail;
    const P1Point base = hyperelliptic_branch_point(g, 1);
    auto th = [&](const std::set<int>& P, const P1Point& Q) {
        return theta_char_hyper(P, jac.abel(Q, base), jac, req.max_box, req.min_box).value;
    };
    const PadicNumber low = th(req.P1, hyperelliptic_branch_point(g, rep.l));
    if (low.is_zero() || low.valuation() >= T) {
        rep.printed_reading = "denominator theta[P1](u(B_l)) vanishes (valuation " +
                              std::to_string(low.is_zero() ? low.absolute_precision() : low.valuation()) + ")";
    } else {
        const PadicNumber printed = th(req.P1, Qk) * th(req.P1, Qk) * th(req.P2, Qj) * th(req.P2, Qj) /
                                    (th(req.P1, Qj) * th(req.P1, Qj) * low * low);
        rep.printed_reading = "deviation " + std::to_string(relative_deviation(printed, rep.rhs));
    }
    return rep;
}

}  // namespace mumford
