#include "mumford/report.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "mumford/cyclic_divisors.hpp"

namespace mumford {

const std::vector<std::string>& known_tasks() {
    static const std::vector<std::string> tasks{"check-schottky", "lemma-suite", "periods",           "branch-images",
                                                "dim-table",      "curve",       "cross-ratio-verify"};
    return tasks;
}

namespace {

std::int64_t parse_int(const std::string& s, const std::string& what) {
    std::int64_t v = 0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) throw ConfigError(what + ": not an integer: '" + s + "'");
    return v;
}

std::string entry_string(const Json& e, const std::string& what) {
    if (e.is_number_integer()) return std::to_string(e.get<std::int64_t>());
    if (e.is_string()) return e.get<std::string>();
    throw ConfigError(what + ": entries must be integers or \"a/b\" strings");
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("bad value for '") + key + "'");
    }
}

void check_keys(const Json& j, const std::vector<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [k, v] : j.items())
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
            throw ConfigError("unknown key '" + k + "' in " + where);
}

void check_task(const std::string& t) {
    const auto& k = known_tasks();
    if (std::find(k.begin(), k.end(), t) == k.end()) throw ConfigError("unknown task '" + t + "'");
}

PadicNumber parse_entry(const Field& f, const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return PadicNumber::from_int(f, parse_int(s, "generator entry"));
    const std::int64_t num = parse_int(s.substr(0, slash), "generator entry");
    const std::int64_t den = parse_int(s.substr(slash + 1), "generator entry");
    if (den == 0) throw ConfigError("generator entry: zero denominator");
    return PadicNumber::from_rational(f, num, den);
}

}  // namespace

RunConfig parse_config(const Json& j) {
    check_keys(j, {"name", "field", "generators", "truncation", "seed", "tasks", "riemann_divisor", "cross_ratio", "dim_table"},
               "config");
    RunConfig c;
    c.name = get_or<std::string>(j, "name", "");
    if (!j.contains("field")) throw ConfigError("missing 'field'");
    const Json& f = j.at("field");
    check_keys(f, {"residue_prime", "precision", "cover_degree"}, "field");
    c.field.q = get_or<std::uint64_t>(f, "residue_prime", 0);
    c.field.precision = get_or<int>(f, "precision", 20);
    c.field.cover_degree = get_or<int>(f, "cover_degree", 2);

    if (!j.contains("generators") || !j.at("generators").is_array()) throw ConfigError("missing 'generators' list");
    for (const Json& m : j.at("generators")) {
        if (!m.is_array() || m.size() != 2 || !m[0].is_array() || !m[1].is_array() || m[0].size() != 2 || m[1].size() != 2)
            throw ConfigError("generators must be 2x2 matrices [[a, b], [c, d]]");
        c.generators.push_back({entry_string(m[0][0], "generator"), entry_string(m[0][1], "generator"),
                                entry_string(m[1][0], "generator"), entry_string(m[1][1], "generator")});
    }
    if (j.contains("truncation")) {
        const Json& t = j.at("truncation");
        check_keys(t, {"max_word_length", "tail", "theta_box"}, "truncation");
        c.policy.max_length = get_or<int>(t, "max_word_length", c.policy.max_length);
        c.policy.tail = get_or<int>(t, "tail", c.policy.tail);
        c.theta_box = get_or<int>(t, "theta_box", c.theta_box);
    }
    c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
    c.tasks = get_or<std::vector<std::string>>(j, "tasks", {});
    for (const auto& t : c.tasks) check_task(t);
    if (j.contains("riemann_divisor")) c.riemann_divisor = get_or<std::vector<std::string>>(j, "riemann_divisor", {});
    if (j.contains("cross_ratio")) {
        const Json& x = j.at("cross_ratio");
        check_keys(x, {"P1", "P2", "k", "j"}, "cross_ratio");
        const auto p1 = get_or<std::vector<int>>(x, "P1", {1, 2});
        const auto p2 = get_or<std::vector<int>>(x, "P2", {1, 3});
        c.cross_ratio.P1 = {p1.begin(), p1.end()};
        c.cross_ratio.P2 = {p2.begin(), p2.end()};
        c.cross_ratio.k = get_or<int>(x, "k", c.cross_ratio.k);
        c.cross_ratio.j = get_or<int>(x, "j", c.cross_ratio.j);
    }
    if (j.contains("dim_table")) {
        const Json& d = j.at("dim_table");
        check_keys(d, {"primes", "max_branch_points"}, "dim_table");
        c.dim_primes = get_or<std::vector<int>>(d, "primes", c.dim_primes);
        c.dim_max_branch_points = get_or<int>(d, "max_branch_points", c.dim_max_branch_points);
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    try {
        return parse_config(Json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
}

std::vector<std::string> parse_task_list(const std::string& list) {
    std::vector<std::string> out;
    std::stringstream ss(list);
    std::string t;
    while (std::getline(ss, t, ','))
        if (!t.empty()) {
            check_task(t);
            out.push_back(t);
        }
    return out;
}

GroupData build_configured_group(const RunConfig& cfg) {
    try {
        cfg.field.validate();
        cfg.policy.validate();
        if (cfg.theta_box < 0) throw DomainError("theta_box must be >= 0");
        const Field& f = Field::get(cfg.field.q, cfg.field.precision);
        std::vector<ProjectiveMatrix> sigma;
        for (const auto& m : cfg.generators)
            sigma.emplace_back(parse_entry(f, m[0]), parse_entry(f, m[1]), parse_entry(f, m[2]), parse_entry(f, m[3]));
        return build_group(cfg.field, sigma);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    } catch (const PrecisionError& e) {
        throw ConfigError(e.what());
    }
}

namespace {

Json check_json(const IdentityCheck& c) {
    Json j;
    j["name"] = c.name;
    j["detail"] = c.detail;
    j["probes"] = c.probes;
    j["deviation"] = c.deviation;
    j["tail"] = c.tail;
    j["shells"] = c.shells;
    j["pass"] = c.pass;
    if (c.informational) j["informational"] = true;
    return j;
}

Json suite_json(const LemmaSuiteReport& r) {
    Json a = Json::array();
    for (const auto& c : r.checks) a.push_back(check_json(c));
    return a;
}

Json simple_check(const std::string& name, std::int64_t deviation, bool pass) {
    Json j;
    j["name"] = name;
    j["deviation"] = deviation;
    j["pass"] = pass;
    return j;
}

std::int64_t val_or_prec(const PadicNumber& x) { return x.is_zero() ? x.absolute_precision() : x.valuation(); }

struct Context {
    const RunConfig& cfg;
    const GroupData& group;
    const ThetaEngine& engine;
    const Jacobian& jac;
};

Json task_check_schottky(const Context& ctx, bool& pass) {
    const GroupData& g = ctx.group;
    Json out;
    Json gens = Json::array();
    for (std::size_t i = 0; i < g.generators.size(); ++i) {
        const auto& gi = g.generators[i];
        Json e;
        e["name"] = "sigma_" + std::to_string(i);
        e["matrix"] = gi.matrix.to_string();
        e["o"] = gi.o.to_string();
        e["e"] = gi.e.to_string();
        e["nu"] = gi.nu;
        gens.push_back(e);
    }
    out["generators"] = gens;
    out["basis"] = g.basis_names();
    const PingPongReport pp = ping_pong_check(g);
    Json disks = Json::array();
    for (const auto& d : pp.disks) {
        Json e;
        e["element"] = d.element;
        e["center"] = d.center.to_string();
        e["radius_exponent"] = d.radius_exponent;
        disks.push_back(e);
    }
    out["disks"] = disks;
    out["overlaps"] = pp.overlaps;
    out["ping_pong"] = pp.pass;
    const bool product = check_conjugation_product(g);
    out["conjugation_product_in_commutator"] = product;
    out["words_up_to_L"] = word_table(g, ctx.cfg.policy.max_length)->size();
    pass = pp.pass && product;
    return out;
}

Json task_lemma_suite(const Context& ctx, bool& pass) {
    const LemmaSuiteReport r = verify_lemma_suite(ctx.engine, ctx.cfg.seed);
    pass = r.pass();
    Json out;
    out["checks"] = suite_json(r);
    return out;
}

Json task_branch_images(const Context& ctx, bool& pass) {
    const LemmaSuiteReport r = verify_branch_point_images(ctx.jac, ctx.cfg.seed);
    pass = r.pass();
    Json out;
    out["checks"] = suite_json(r);
    return out;
}

// Finite branch points o_0..o_s, e_1..e_s with exponents r_i, l_i; e_0 is the basepoint.
struct FiniteBranchData {
    std::vector<std::string> labels;
    std::vector<int> exponents;
};

FiniteBranchData finite_branch_data(const GroupData& g) {
    FiniteBranchData d;
    auto inv = [&](int x) {
        x = ((x % g.p) + g.p) % g.p;
        for (int y = 1; y < g.p; ++y)
            if (x * y % g.p == 1) return y;
        throw DomainError("exponent not invertible");
    };
    for (int i = 0; i <= g.s(); ++i) {
        const int nu = g.generators[static_cast<std::size_t>(i)].nu;
        d.labels.push_back("o" + std::to_string(i));
        d.exponents.push_back(inv(nu));
        if (i > 0) {
            d.labels.push_back("e" + std::to_string(i));
            d.exponents.push_back(inv(-nu));
        }
    }
    return d;
}

Json task_periods(const Context& ctx, bool& pass) {
    const GroupData& g = ctx.group;
    const int M = ctx.cfg.theta_box;
    const int T = ctx.cfg.policy.tail;
    const PeriodMatrix& pm = ctx.jac.period_matrix();
    Json out;
    Json rows = Json::array(), vals = Json::array();
    for (const auto& row : pm.q) {
        Json r = Json::array(), v = Json::array();
        for (const auto& x : row) {
            r.push_back(x.to_string());
            v.push_back(x.valuation());
        }
        rows.push_back(r);
        vals.push_back(v);
    }
    out["Q"] = rows;
    out["valuations"] = vals;
    out["multiplier_convention"] = "c_beta(gamma) = c_{beta a, a}(gamma)";
    out["symmetry_deviation"] = pm.symmetry_deviation;
    Json rho = Json::array();
    for (const auto& r : pm.rho) rho.push_back(r.to_string());
    out["rho"] = rho;
    out["rho_source"] = pm.rho_source;

    Json checks = Json::array();
    checks.push_back(simple_check("symmetry", pm.symmetry_deviation, pm.symmetry_deviation >= T));
    bool positive = true;
    std::int64_t min_diag = PadicNumber::kExact;
    for (int i = 0; i < pm.rank(); ++i) {
        min_diag = std::min(min_diag, pm.q[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)].valuation());
        positive = positive && pm.q[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)].valuation() > 0;
    }
    Json pos = simple_check("v(Q_ii) > 0", min_diag, positive);
    pos.erase("deviation");
    pos["min_valuation"] = min_diag;
    checks.push_back(pos);
    checks.push_back(simple_check("rho^2 = Q_ii", pm.rho_deviation, pm.rho_deviation >= T));

    const P1Point base = g.generators[0].e;
    ProbeGenerator gen(g, ctx.cfg.seed);
    std::vector<Character> chars;
    for (int t = 0; t < 10; ++t) chars.push_back(ctx.jac.abel(gen.next(), base));
    std::int64_t even = PadicNumber::kExact, transl = PadicNumber::kExact, tail = PadicNumber::kExact;
    int box = 0;
    for (std::size_t t = 0; t < chars.size(); ++t) {
        const ThetaValue th = riemann_theta(chars[t], pm, M, T);
        const ThetaValue ti = riemann_theta(chars[t].inverse(), pm, M, T);
        even = std::min(even, relative_deviation(th.value, ti.value));
        tail = std::min({tail, th.tail_valuation, ti.tail_valuation});
        box = std::max({box, th.shells, ti.shells});
        if (t < 3)
            for (int k = 0; k < pm.rank(); ++k) {
                const ThetaValue sh = riemann_theta(chars[t] * pm.lattice(k), pm, M, T);
                const auto uk = static_cast<std::size_t>(k);
                transl = std::min(transl, relative_deviation(sh.value, th.value / (pm.rho[uk] * chars[t].values[uk])));
                tail = std::min(tail, sh.tail_valuation);
                box = std::max(box, sh.shells);
            }
    }
    Json ev = simple_check("theta evenness", even, even >= T);
    ev["characters"] = 10;
    checks.push_back(ev);
    Json tr = simple_check("theta translation by lattice generators", transl, transl >= T);
    tr["characters"] = 3;
    tr["generators"] = pm.rank();
    checks.push_back(tr);

    if (g.p == 2) {
        std::int64_t low = PadicNumber::kExact;
        Json pts = Json::array();
        for (int i = 1; i <= g.s(); ++i) {
            const ThetaValue th = riemann_theta(ctx.jac.abel(g.generators[static_cast<std::size_t>(i)].o, base), pm, M, T);
            const std::int64_t v = val_or_prec(th.value);
            low = std::min(low, v);
            box = std::max(box, th.shells);
            tail = std::min(tail, th.tail_valuation);
            Json e;
            e["point"] = "u_{e0}(o" + std::to_string(i) + ")";
            e["theta_valuation"] = v;
            pts.push_back(e);
        }
        Json z;
        z["name"] = "theta vanishes at half periods u_{e0}(o_i)";
        z["points"] = pts;
        z["min_valuation"] = low;
        z["pass"] = low >= T;
        checks.push_back(z);
    }

    // theta(u(D - K)) for every oracle non-special D on the finite branch points
    std::optional<Divisor> K;
    std::string k_source;
    if (ctx.cfg.riemann_divisor) {
        Divisor d;
        for (const auto& l : *ctx.cfg.riemann_divisor) d.add_branch(g, l, 1);
        K = d;
        k_source = "config";
    } else if (g.p == 2) {
        K = hyperelliptic_riemann_divisor(g);
        k_source = "hyperelliptic default";
    }
    if (K) {
        const FiniteBranchData fb = finite_branch_data(g);
        const CoverData cover(g.p, fb.exponents);
        const auto list = enumerate_nonspecial(cover);
        std::int64_t high = std::numeric_limits<std::int64_t>::min();
        Json rows_nv = Json::array();
        for (const auto& entry : list) {
            Divisor D;
            for (std::size_t k = 0; k < entry.divisor.d.size(); ++k)
                if (entry.divisor.d[k] != 0) D.add_branch(g, fb.labels[k], entry.divisor.d[k]);
            const ThetaValue th = riemann_theta(ctx.jac.abel(D - *K, base).inverse(), pm, M, T);
            const std::int64_t v = val_or_prec(th.value);
            high = std::max(high, v);
            box = std::max(box, th.shells);
            tail = std::min(tail, th.tail_valuation);
            Json e;
            e["D"] = D.to_string();
            e["theta_valuation"] = v;
            rows_nv.push_back(e);
        }
        Json nv;
        nv["name"] = "theta(u(D - K)) nonzero for non-special D";
        nv["K"] = K->to_string();
        nv["K_source"] = k_source;
        nv["divisors"] = rows_nv;
        nv["max_valuation"] = list.empty() ? 0 : high;
        nv["pass"] = !list.empty() && high < T;
        checks.push_back(nv);
    } else {
        Json nv;
        nv["name"] = "theta(u(D - K)) nonzero for non-special D";
        nv["skipped"] = "conditional: no Riemann divisor configured for p > 2";
        nv["pass"] = true;
        checks.push_back(nv);
    }
    out["checks"] = checks;
    Json cert;
    cert["L"] = ctx.cfg.policy.max_length;
    cert["M_max"] = M;
    cert["M_used"] = box;
    cert["tail"] = std::min<std::int64_t>(tail, pm.tail);
    out["certificate"] = cert;
    pass = true;
    for (const auto& c : checks) pass = pass && c.at("pass").get<bool>();
    return out;
}

Json task_dim_table(const Context& ctx, bool& pass) {
    const DivisorSurvey s = survey_divisors(ctx.cfg.dim_primes, ctx.cfg.dim_max_branch_points);
    Json out;
    Json sum;
    sum["covers"] = s.covers;
    sum["divisors"] = s.rows.size();
    sum["formula_oracle_disagreements"] = s.disagreements;
    sum["disagreements_with_infinity_unbranched"] = s.disagreements_unbranched;
    sum["disagreements_off_pattern"] = s.disagreements_off_pattern;
    sum["riemann_roch_checked"] = s.rr_checked;
    sum["riemann_roch_failures"] = s.rr_failures;
    std::int64_t nonspecial = 0, lit = 0, rep = 0, lit_ns = 0, rep_ns = 0;
    for (const auto& r : s.rows) {
        const bool ns = r.oracle.value == 1;
        nonspecial += ns;
        lit += r.literal_condition;
        rep += r.repaired_condition;
        lit_ns += r.literal_condition && ns;
        rep_ns += r.repaired_condition && ns;
    }
    sum["nonspecial_divisors"] = nonspecial;
    sum["literal_condition_3_true"] = lit;
    sum["literal_condition_3_true_and_nonspecial"] = lit_ns;
    sum["repaired_condition_3_true"] = rep;
    sum["repaired_condition_3_true_and_nonspecial"] = rep_ns;
    out["summary"] = sum;
    out["disagreement_pattern"] =
        "formula - oracle = #{k : p does not divide k R, g_k > 0}; occurs only when infinity is branched";

    // disagreements grouped by cover and (formula, oracle)
    std::map<std::pair<std::string, std::pair<int, int>>, std::int64_t> groups;
    for (const auto& r : s.rows)
        if (r.formula.value != r.oracle.value) ++groups[{r.cover, {r.formula.value, r.oracle.value}}];
    Json dis = Json::array();
    for (const auto& [key, count] : groups) {
        Json e;
        e["cover"] = key.first;
        e["formula"] = key.second.first;
        e["oracle"] = key.second.second;
        e["divisors"] = count;
        dis.push_back(e);
    }
    out["disagreements"] = dis;

    // hyperelliptic genus 2: D = B_1 + B_2 on five finite Weierstrass points
    {
        const CoverData c(2, {1, 1, 1, 1, 1});
        const BranchDivisor D{{1, 1, 0, 0, 0}};
        const auto fo = dim_formula(c, D), oo = dim_oracle(c, D);
        Json e;
        e["cover"] = c.to_string();
        e["divisor"] = D.to_string();
        e["formula"] = fo.value;
        e["formula_g_k"] = fo.per_eigenspace;
        e["oracle"] = oo.value;
        e["oracle_eigenspaces"] = oo.per_eigenspace;
        out["g_distinct_weierstrass_points"] = e;
    }

    // index of specialty: oracle vs claimed s, grouped by (r, s)
    std::map<std::pair<int, int>, std::map<int, std::int64_t>> spec;
    for (const auto& r : s.specialty) ++spec[{r.doubled, r.single}][r.oracle];
    Json sp = Json::array();
    for (const auto& [rs, hist] : spec) {
        Json e;
        e["r"] = rs.first;
        e["s"] = rs.second;
        e["claimed"] = rs.second;
        Json h = Json::object();
        for (const auto& [v, n] : hist) h[std::to_string(v)] = n;
        e["oracle_counts"] = h;
        sp.push_back(e);
    }
    out["index_of_specialty"] = sp;
    out["index_of_specialty_equals_r"] = s.specialty_equals_doubled == static_cast<std::int64_t>(s.specialty.size());
    out["index_of_specialty_equals_s"] = s.specialty_equals_single == static_cast<std::int64_t>(s.specialty.size());
    pass = s.rr_failures == 0 && s.disagreements_off_pattern == 0 && s.disagreements_unbranched == 0;
    return out;
}

Json curve_json(const CurveModel& m) {
    Json out;
    out["equation"] = m.equation();
    Json a = Json::array(), b = Json::array();
    for (std::size_t i = 0; i < m.a.size(); ++i) {
        a.push_back(m.a[i].to_string());
        b.push_back(m.b[i].to_string());
    }
    out["r"] = m.r;
    out["l"] = m.l;
    out["a"] = a;
    out["b"] = b;
    out["min_separation"] = m.min_separation;
    return out;
}

Json task_curve(const Context& ctx, bool& pass) {
    ProjectiveMatrix mu = ProjectiveMatrix::identity(*ctx.group.field);
    const GroupData normal = normalize(ctx.group, &mu);
    const ThetaEngine engine(normal, ctx.cfg.policy);
    const CurveModel m = build_curve(engine);
    const IdentityCheck inv = verify_x_invariance(engine, ctx.cfg.seed);
    Json out = curve_json(m);
    out["conjugator"] = mu.to_string();
    out["x_invariance"] = check_json(inv);
    Json cert;
    cert["L"] = ctx.cfg.policy.max_length;
    cert["shells"] = m.shells;
    cert["tail"] = m.tail;
    out["certificate"] = cert;
    pass = inv.pass;
    return out;
}

Json task_cross_ratio(const Context& ctx, bool& pass) {
    const int T = ctx.cfg.policy.tail;
    const GroupData normal = normalize(ctx.group);
    const ThetaEngine engine(normal, ctx.cfg.policy);
    const Jacobian jac(engine, ctx.cfg.seed);
    const CurveModel curve = build_curve(engine);
    CrossRatioRequest req = ctx.cfg.cross_ratio;
    req.max_box = ctx.cfg.theta_box;
    const CrossRatioReport rep = verify_cross_ratio_theorem(jac, curve, req);

    // one more word length and one more theta shell
    TruncationPolicy more = ctx.cfg.policy;
    ++more.max_length;
    const ThetaEngine engine2(normal, more);
    const Jacobian jac2(engine2, ctx.cfg.seed);
    const CurveModel curve2 = build_curve(engine2);
    CrossRatioRequest req2 = req;
    req2.min_box = rep.lhs.box + 1;
    req2.max_box = std::max(req.max_box, rep.lhs.box + 1);
    const CrossRatioReport rep2 = verify_cross_ratio_theorem(jac2, curve2, req2);
    const std::int64_t drift_lhs = relative_deviation(rep2.lhs.normalized, rep.lhs.normalized);
    const std::int64_t drift_rhs = relative_deviation(rep2.rhs, rep.rhs);

    auto labels = [](const std::set<int>& s) { return std::vector<int>(s.begin(), s.end()); };
    Json out;
    out["P1"] = labels(rep.P1);
    out["P2"] = labels(rep.P2);
    out["l"] = rep.l;
    out["m"] = rep.m;
    out["k"] = rep.k;
    out["j"] = rep.j;
    out["branch_points"] = {{"k", hyperelliptic_label(rep.k)}, {"j", hyperelliptic_label(rep.j)},
                            {"l", hyperelliptic_label(rep.l)}, {"m", hyperelliptic_label(rep.m)}};
    out["reading"] = "symmetric ratio theta^2[P1](u(Q1)) theta^2[P2](u(Q2)) / (theta^2[P1](u(Q2)) theta^2[P2](u(Q1)))";
    out["lhs_raw"] = rep.lhs.raw.to_string();
    out["lhs"] = rep.lhs.normalized.to_string();
    out["kappa"] = rep.lhs.kappa;
    out["rhs"] = rep.rhs.to_string();
    out["deviation"] = rep.deviation;
    out["raw_deviation"] = rep.raw_deviation;
    out["printed_denominator"] = rep.printed_reading;
    Json stab;
    stab["L"] = more.max_length;
    stab["M"] = rep2.lhs.box;
    stab["lhs_drift"] = drift_lhs;
    stab["rhs_drift"] = drift_rhs;
    stab["pass"] = drift_lhs >= T && drift_rhs >= T;
    out["stability"] = stab;
    Json cert;
    cert["L"] = ctx.cfg.policy.max_length;
    cert["M"] = rep.lhs.box;
    cert["tail"] = std::min(rep.lhs.tail, curve.tail);
    out["certificate"] = cert;
    out["pass"] = rep.pass;
    pass = rep.pass && stab["pass"].get<bool>();
    return out;
}

}  // namespace

RunResult run(const RunConfig& cfg) {
    const GroupData g = build_configured_group(cfg);
    RunResult res;
    Json header;
    header["name"] = cfg.name;
    header["field"] = {{"residue_prime", cfg.field.q}, {"precision", cfg.field.precision}, {"cover_degree", cfg.field.cover_degree}};
    header["generators"] = cfg.generators;
    header["truncation"] = {{"max_word_length", cfg.policy.max_length}, {"tail", cfg.policy.tail}, {"theta_box", cfg.theta_box}};
    header["seed"] = cfg.seed;
    header["tasks"] = cfg.tasks;
    if (cfg.riemann_divisor) header["riemann_divisor"] = *cfg.riemann_divisor;
    header["genus"] = g.rank;
    res.report["header"] = header;

    const ThetaEngine engine(g, cfg.policy);
    const Jacobian jac(engine, cfg.seed);
    const Context ctx{cfg, g, engine, jac};
    Json tasks = Json::array();
    for (const auto& t : cfg.tasks) {
        Json entry;
        entry["task"] = t;
        bool pass = false;
        try {
            Json body;
            if (t == "check-schottky") body = task_check_schottky(ctx, pass);
            else if (t == "lemma-suite") body = task_lemma_suite(ctx, pass);
            else if (t == "periods") body = task_periods(ctx, pass);
            else if (t == "branch-images") body = task_branch_images(ctx, pass);
            else if (t == "dim-table") body = task_dim_table(ctx, pass);
            else if (t == "curve") body = task_curve(ctx, pass);
            else if (t == "cross-ratio-verify") body = task_cross_ratio(ctx, pass);
            entry["pass"] = pass;
            entry["result"] = body;
        } catch (const std::exception& e) {
            pass = false;
            entry["pass"] = false;
            entry["error"] = e.what();
        }
        res.pass = res.pass && pass;
        tasks.push_back(entry);
    }
    res.report["tasks"] = tasks;
    res.report["pass"] = res.pass;
    return res;
}

std::string render_json(const RunResult& r) { return r.report.dump(2) + "\n"; }

namespace {

void render_value(const Json& j, int indent, std::ostringstream& out);

std::string scalar(const Json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_boolean()) return j.get<bool>() ? "yes" : "no";
    return j.dump();
}

bool flat_array(const Json& j) {
    return j.is_array() && std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
}

void render_value(const Json& j, int indent, std::ostringstream& out) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            if (v.is_primitive()) {
                out << pad << k << ": " << scalar(v) << "\n";
            } else if (flat_array(v)) {
                out << pad << k << ": [";
                for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << scalar(v[i]);
                out << "]\n";
            } else {
                out << pad << k << ":\n";
                render_value(v, indent + 2, out);
            }
        }
    } else if (j.is_array()) {
        for (const auto& e : j) {
            if (e.is_primitive()) {
                out << pad << "- " << scalar(e) << "\n";
            } else if (flat_array(e)) {
                out << pad << "- [";
                for (std::size_t i = 0; i < e.size(); ++i) out << (i ? ", " : "") << scalar(e[i]);
                out << "]\n";
            } else {
                out << pad << "-\n";
                render_value(e, indent + 2, out);
            }
        }
    } else {
        out << pad << scalar(j) << "\n";
    }
}

}  // namespace

std::string render_text(const RunResult& r) {
    std::ostringstream out;
    out << "== header\n";
    render_value(r.report.at("header"), 2, out);
    for (const auto& t : r.report.at("tasks")) {
        out << "== " << t.at("task").get<std::string>() << ": " << (t.at("pass").get<bool>() ? "PASS" : "FAIL") << "\n";
        if (t.contains("error")) out << "  error: " << t.at("error").get<std::string>() << "\n";
        if (t.contains("result")) render_value(t.at("result"), 2, out);
    }
    out << "== overall: " << (r.pass ? "PASS" : "FAIL") << "\n";
    return out.str();
}

}  // namespace mumford
