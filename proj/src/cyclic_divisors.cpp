#include "mumford/cyclic_divisors.hpp"

#include <algorithm>
#include <numeric>

#include "mumford/padic.hpp"

namespace mumford {

namespace {

int mod(std::int64_t x, int p) { return static_cast<int>(((x % p) + p) % p); }

bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

// Smallest m with p m + shift >= bound: the order of h at a point of
// ramification p where y^l contributes shift.
int least_order(int p, std::int64_t shift, std::int64_t bound) {
    std::int64_t m = (bound - shift) / p - 1;
    while (p * m + shift < bound) ++m;
    return static_cast<int>(m);
}

}  // namespace

CoverData::CoverData(int p, std::vector<int> r) : p_(p), r_(std::move(r)) {
    if (!is_prime(p_)) throw DomainError("cover degree must be prime");
    if (r_.empty()) throw DomainError("cover needs a finite branch point");
    for (int x : r_)
        if (x < 1 || x >= p_) throw DomainError("branch exponents must lie in 1..p-1");
}

int CoverData::r_sum() const { return std::accumulate(r_.begin(), r_.end(), 0); }

int CoverData::genus() const {
    const int branch = n() + (infinity_branched() ? 1 : 0);
    return (p_ - 1) * (branch - 2) / 2;
}

std::string CoverData::to_string() const {
    std::string s = "p=" + std::to_string(p_) + " r=(";
    for (std::size_t j = 0; j < r_.size(); ++j) s += (j ? "," : "") + std::to_string(r_[j]);
    return s + ")";
}

int BranchDivisor::degree() const { return std::accumulate(d.begin(), d.end(), 0); }

std::string BranchDivisor::to_string() const {
    std::string s = "(";
    for (std::size_t j = 0; j < d.size(); ++j) s += (j ? "," : "") + std::to_string(d[j]);
    return s + ")";
}

BranchDivisor operator-(const BranchDivisor& x, const BranchDivisor& y) {
    if (x.d.size() != y.d.size()) throw DomainError("divisor length mismatch");
    BranchDivisor out = x;
    for (std::size_t j = 0; j < out.d.size(); ++j) out.d[j] -= y.d[j];
    return out;
}

static void check_length(const CoverData& cover, const BranchDivisor& D) {
    if (static_cast<int>(D.d.size()) != cover.n()) throw DomainError("divisor length must equal the branch point count");
}

DimensionCount dim_formula(const CoverData& cover, const BranchDivisor& D) {
    check_length(cover, D);
    const int p = cover.p();
    DimensionCount out;
    for (int k = 0; k < p; ++k) {
        std::int64_t num = D.degree();
        std::int64_t kr = 0;
        for (int j = 0; j < cover.n(); ++j) {
            num -= mod(static_cast<std::int64_t>(k) * cover.r()[j] + D.d[j], p);
            kr += static_cast<std::int64_t>(k) * cover.r()[j];
        }
        num += mod(kr, p);
        if (num % p != 0) throw DomainError("dimension formula numerator not divisible by p");
        const int gk = static_cast<int>(num / p) + 1;
        out.per_eigenspace.push_back(gk);
        out.value += std::max(0, gk);
    }
    return out;
}

DimensionCount dim_oracle(const CoverData& cover, const BranchDivisor& D) {
    check_length(cover, D);
    const int p = cover.p();
    const std::int64_t R = cover.r_sum();
    DimensionCount out;
    for (int l = 0; l < p; ++l) {
        // f = h(x) y^l. At B_j: ord(x - a_j) = p, ord(y) = r_j, need ord f >= -d_j.
        std::int64_t poles = 0;
        for (int j = 0; j < cover.n(); ++j) poles -= least_order(p, static_cast<std::int64_t>(l) * cover.r()[j], -D.d[j]);
        // At infinity, per point: ord(x) = -e, ord(y) = -e R / p, e = p if branched else 1.
        // Need -e deg h - l e R / p >= 0, i.e. p deg h + l R <= 0.
        std::int64_t max_deg = (-l * R) / p + 1;
        while (p * max_deg + l * R > 0) --max_deg;
        // h = g(x) / prod (x - a_j)^{P_j}, g polynomial of degree <= sum P_j + max_deg
        const std::int64_t dim = std::max<std::int64_t>(0, poles + max_deg + 1);
        out.per_eigenspace.push_back(static_cast<int>(dim));
        out.value += static_cast<int>(dim);
    }
    return out;
}

SpecialtyIndex index_of_specialty(const CoverData& cover, const BranchDivisor& D) {
    check_length(cover, D);
    const int g = cover.genus();
    if (D.degree() != g) throw DomainError("index of specialty requires deg D = g");
    SpecialtyIndex out;
    out.oracle = dim_oracle(cover, D).value - D.degree() + g - 1;
    out.shape_ok = cover.p() == 2;
    for (int x : D.d) {
        if (x == 2) ++out.doubled;
        else if (x == 1) ++out.single;
        else if (x != 0) out.shape_ok = false;
    }
    return out;
}

bool literal_condition(const CoverData& cover, const BranchDivisor& D) {
    check_length(cover, D);
    const int p = cover.p(), g = cover.genus();
    for (int k = 0; k < p; ++k) {
        std::int64_t kr = 0;
        for (int x : cover.r()) kr += static_cast<std::int64_t>(k) * x;
        for (int j = 0; j < cover.n(); ++j)
            if (g - mod(D.d[j] + static_cast<std::int64_t>(k) * cover.r()[j], p) + mod(kr, p) + 1 != 0) return false;
    }
    return true;
}

bool repaired_condition(const CoverData& cover, const BranchDivisor& D) {
    check_length(cover, D);
    const int p = cover.p(), g = cover.genus();
    for (int k = 1; k < p; ++k) {
        std::int64_t kr = 0, sum = 0;
        for (int j = 0; j < cover.n(); ++j) {
            kr += static_cast<std::int64_t>(k) * cover.r()[j];
            sum += mod(D.d[j] + static_cast<std::int64_t>(k) * cover.r()[j], p);
        }
        if (g - sum + mod(kr, p) + 1 != 0) return false;
    }
    return true;
}

namespace {

// Calls f on every vector in [lo, hi]^n with the given coordinate sum.
template <class F>
void for_each_vector(int n, int lo, int hi, int sum, F&& f) {
    std::vector<int> d(static_cast<std::size_t>(n), lo);
    while (true) {
        if (std::accumulate(d.begin(), d.end(), 0) == sum) f(BranchDivisor{d});
        int i = 0;
        while (i < n && d[static_cast<std::size_t>(i)] == hi) d[static_cast<std::size_t>(i++)] = lo;
        if (i == n) return;
        ++d[static_cast<std::size_t>(i)];
    }
}

}  // namespace

std::vector<NonspecialEntry> enumerate_nonspecial(const CoverData& cover) {
    double total = 1;
    for (int j = 0; j < cover.n(); ++j) total *= cover.p();
    if (total > 400000) throw DomainError("exhaustive enumeration too large");
    std::vector<NonspecialEntry> out;
    for_each_vector(cover.n(), 0, cover.p() - 1, cover.genus(), [&](const BranchDivisor& D) {
        if (dim_oracle(cover, D).value == 1)
            out.push_back({D, literal_condition(cover, D), repaired_condition(cover, D)});
    });
    return out;
}

BranchDivisor hyperelliptic_canonical(const CoverData& cover) {
    if (cover.p() != 2) throw DomainError("canonical divisor on branch points needs p = 2");
    BranchDivisor k{std::vector<int>(static_cast<std::size_t>(cover.n()), 0)};
    k.d[0] = 2 * cover.genus() - 2;
    return k;
}

int riemann_roch_defect(const CoverData& cover, const BranchDivisor& D) {
    const BranchDivisor K = hyperelliptic_canonical(cover);
    return dim_oracle(cover, D).value - dim_oracle(cover, K - D).value - (D.degree() - cover.genus() + 1);
}

DivisorSurvey survey_divisors(const std::vector<int>& primes, int max_branch_points) {
    DivisorSurvey out;
    for (int p : primes) {
        for (int n = 1; n <= max_branch_points; ++n) {
            // nondecreasing exponent vectors
            std::vector<int> r(static_cast<std::size_t>(n), 1);
            while (true) {
                const CoverData cover(p, r);
                const int g = cover.genus();
                ++out.covers;
                for_each_vector(n, 0, p - 1, g, [&](const BranchDivisor& D) {
                    SurveyRow row;
                    row.cover = cover.to_string();
                    row.divisor = D.to_string();
                    row.infinity_branched = cover.infinity_branched();
                    row.formula = dim_formula(cover, D);
                    row.oracle = dim_oracle(cover, D);
                    row.literal_condition = literal_condition(cover, D);
                    row.repaired_condition = repaired_condition(cover, D);
                    if (row.formula.value != row.oracle.value) {
                        ++out.disagreements;
                        if (!row.infinity_branched) ++out.disagreements_unbranched;
                        int predicted = 0;
                        for (int k = 0; k < p; ++k)
                            if (mod(static_cast<std::int64_t>(k) * cover.r_sum(), p) != 0 &&
                                row.formula.per_eigenspace[static_cast<std::size_t>(k)] > 0)
                                ++predicted;
                        if (row.formula.value - row.oracle.value != predicted) ++out.disagreements_off_pattern;
                    }
                    out.rows.push_back(std::move(row));
                });
                if (p == 2) {
                    for (int deg = -n; deg <= 3 * n; ++deg)
                        for_each_vector(n, -1, 3, deg, [&](const BranchDivisor& D) {
                            ++out.rr_checked;
                            if (riemann_roch_defect(cover, D) != 0) ++out.rr_failures;
                        });
                    for_each_vector(n, 0, 2, g, [&](const BranchDivisor& D) {
                        const SpecialtyIndex idx = index_of_specialty(cover, D);
                        out.specialty.push_back({cover.to_string(), D.to_string(), idx.doubled, idx.single, idx.oracle});
                        if (idx.oracle == idx.doubled) ++out.specialty_equals_doubled;
                        if (idx.oracle == idx.single) ++out.specialty_equals_single;
                    });
                }
                int i = n - 1;
                while (i >= 0 && r[static_cast<std::size_t>(i)] == p - 1) --i;
                if (i < 0) break;
                const int v = r[static_cast<std::size_t>(i)] + 1;
                for (int j = i; j < n; ++j) r[static_cast<std::size_t>(j)] = v;
            }
        }
    }
    return out;
}

}  // namespace mumford
