#include "mumford/curve.hpp"

#include <algorithm>

namespace mumford {

namespace {

int inverse_mod(int x, int p) {
    x = ((x % p) + p) % p;
    for (int y = 1; y < p; ++y)
        if (x * y % p == 1) return y;
    throw DomainError("exponent not invertible mod p");
}

}  // namespace

bool is_normalized(const GroupData& g) {
    const auto& g0 = g.generators.at(0);
    return !g0.o.is_infinity() && g0.o.value().is_zero() && g0.e.is_infinity();
}

GroupData normalize(const GroupData& g, ProjectiveMatrix* conjugator) {
    if (is_normalized(g)) {
        if (conjugator) *conjugator = ProjectiveMatrix::identity(*g.field);
        return g;
    }
    const ProjectiveMatrix mu = g.generators.at(0).upsilon;
    GroupData out = conjugate_group(g, mu);
    if (!ping_pong_check(out).pass)
        throw DomainError("normalization broke disk disjointness; choose different conjugator scale");
    if (conjugator) *conjugator = mu;
    return out;
}

ThetaValue x_coordinate(const ThetaEngine& engine, const P1Point& z) {
    const GroupData& g = engine.group();
    const auto& g0 = g.generators.at(0);
    ThetaValue v = engine.theta(g0.o, g0.e, z);
    v.value = v.value.pow(g.p);
    return v;
}

std::string CurveModel::equation() const {
    auto power = [](const std::string& base, int e) {
        if (e == 0) return std::string();
        return e == 1 ? base : base + "^" + std::to_string(e);
    };
    std::string out = "y^" + std::to_string(p) + " = ";
    std::vector<std::string> factors;
    if (!r.empty() && r[0] != 0) factors.push_back(power("x", r[0]));
    for (std::size_t i = 1; i < a.size(); ++i) {
        factors.push_back(power("(x - " + a[i].to_string() + ")", r[i]));
        if (!b[i].is_infinity()) factors.push_back(power("(x - " + b[i].value().to_string() + ")", l[i]));
    }
    for (std::size_t k = 0; k < factors.size(); ++k) out += (k ? " * " : "") + factors[k];
    return out;
}

CurveModel build_curve(const ThetaEngine& engine) {
    const GroupData& g = engine.group();
    if (!is_normalized(g)) throw DomainError("curve model needs a normalized group (o_0 = 0, e_0 = infinity)");
    CurveModel m;
    m.p = g.p;
    const Field& f = *g.field;
    for (int i = 0; i <= g.s(); ++i) {
        const auto& gi = g.generators[static_cast<std::size_t>(i)];
        m.r.push_back(inverse_mod(gi.nu, g.p));
        m.l.push_back(inverse_mod(-gi.nu, g.p));
        if (i == 0) {
            m.a.push_back(PadicNumber::zero(f));
            m.b.push_back(P1Point::infinity());
            continue;
        }
        for (const P1Point* pt : {&gi.o, &gi.e}) {
            ThetaValue v = x_coordinate(engine, *pt);
            m.tail = std::min(m.tail, v.tail_valuation);
            m.shells = std::max(m.shells, v.shells);
            if (pt == &gi.o) m.a.push_back(v.value);
            else m.b.push_back(P1Point(v.value));
        }
    }
    std::vector<PadicNumber> finite = m.a;
    for (std::size_t i = 1; i < m.b.size(); ++i) finite.push_back(m.b[i].value());
    m.min_separation = PadicNumber::kExact;
    for (std::size_t i = 0; i < finite.size(); ++i)
        for (std::size_t j = i + 1; j < finite.size(); ++j) {
            const PadicNumber d = finite[i] - finite[j];
            if (d.is_zero()) throw DomainError("branch points collide; increase precision or L");
            m.min_separation = std::min(m.min_separation, d.valuation());
        }
    return m;
}

IdentityCheck verify_x_invariance(const ThetaEngine& engine, std::uint64_t seed, int probes) {
    const GroupData& g = engine.group();
    IdentityCheck c;
    c.name = "x-coordinate invariance";
    c.detail = "x(sigma_i z) = x(z), i = 0..s";
    c.deviation = PadicNumber::kExact;
    c.tail = PadicNumber::kExact;
    ProbeGenerator gen(g, seed);
    for (int t = 0; t < probes; ++t) {
        const P1Point z = gen.next();
        const ThetaValue base = x_coordinate(engine, z);
        for (const auto& gi : g.generators) {
            const ThetaValue moved = x_coordinate(engine, apply_first_order(gi.matrix, z));
            c.deviation = std::min(c.deviation, relative_deviation(moved.value, base.value));
            c.tail = std::min({c.tail, base.tail_valuation, moved.tail_valuation});
            c.shells = std::max({c.shells, base.shells, moved.shells});
        }
        ++c.probes;
    }
    c.pass = c.deviation >= engine.policy().tail;
    return c;
}

}  // namespace mumford
