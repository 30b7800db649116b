#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mumford {

// y^p = prod_j (x - a_j)^{r_j} over n finite branch points.
class CoverData {
public:
    CoverData(int p, std::vector<int> r);

    int p() const { return p_; }
    int n() const { return static_cast<int>(r_.size()); }
    const std::vector<int>& r() const { return r_; }
    int r_sum() const;
    bool infinity_branched() const { return r_sum() % p_ != 0; }
    // Riemann-Hurwitz over all branch points, infinity included when branched
    int genus() const;
    std::string to_string() const;

private:
    int p_;
    std::vector<int> r_;
};

// sum_j d_j B_j over the finite branch points
struct BranchDivisor {
    std::vector<int> d;

    int degree() const;
    std::string to_string() const;
    friend BranchDivisor operator-(const BranchDivisor& x, const BranchDivisor& y);
    friend bool operator==(const BranchDivisor&, const BranchDivisor&) = default;
};

struct DimensionCount {
    std::vector<int> per_eigenspace;  // index k (formula) or l (oracle), 0..p-1
    int value = 0;
};

// sum_k max(0, g_k) with g_k = (deg D - sum_j ((k r_j + d_j) mod p) + ((sum_j k r_j) mod p)) / p + 1
DimensionCount dim_formula(const CoverData& cover, const BranchDivisor& D);

// dim L(D) from local valuations of h(x) y^l at every branch point and infinity
DimensionCount dim_oracle(const CoverData& cover, const BranchDivisor& D);

struct SpecialtyIndex {
    int oracle = 0;  // dim L(D) - deg D + g - 1
    // D = 2(B_{i_1} + ... + B_{i_r}) + B_{j_1} + ... + B_{j_s}; claimed value s
    int doubled = 0;
    int single = 0;
    bool shape_ok = false;  // p = 2 and every d_j in {0, 1, 2}
};

SpecialtyIndex index_of_specialty(const CoverData& cover, const BranchDivisor& D);

struct NonspecialEntry {
    BranchDivisor divisor;
    bool literal_condition = false;   // condition (3) per branch point j, k = 0..p-1
    bool repaired_condition = false;  // condition (3) summed over j, k = 1..p-1
};

// Degree-g divisors with 0 <= d_j <= p-1 and oracle dimension 1.
std::vector<NonspecialEntry> enumerate_nonspecial(const CoverData& cover);

bool literal_condition(const CoverData& cover, const BranchDivisor& D);
bool repaired_condition(const CoverData& cover, const BranchDivisor& D);

// (2g - 2) B_1, a canonical divisor when p = 2
BranchDivisor hyperelliptic_canonical(const CoverData& cover);

// dim(D) - dim(K - D) - (deg D - g + 1); zero when Riemann-Roch holds
int riemann_roch_defect(const CoverData& cover, const BranchDivisor& D);

// Exhaustive survey over covers with sorted exponent vectors.
struct SurveyRow {
    std::string cover;
    std::string divisor;
    bool infinity_branched = false;
    DimensionCount formula;
    DimensionCount oracle;
    bool literal_condition = false;
    bool repaired_condition = false;
};

struct SpecialtyRow {
    std::string cover;
    std::string divisor;
    int doubled = 0;
    int single = 0;
    int oracle = 0;
};

struct DivisorSurvey {
    std::vector<SurveyRow> rows;
    std::vector<SpecialtyRow> specialty;
    std::int64_t covers = 0;
    std::int64_t rr_checked = 0;
    std::int64_t rr_failures = 0;
    std::int64_t disagreements = 0;
    std::int64_t disagreements_unbranched = 0;   // infinity unbranched
    std::int64_t disagreements_off_pattern = 0;  // formula - oracle != #{l : p does not divide l R, g_l > 0}
    std::int64_t specialty_equals_doubled = 0;
    std::int64_t specialty_equals_single = 0;
};

DivisorSurvey survey_divisors(const std::vector<int>& primes, int max_branch_points);

}  // namespace mumford
