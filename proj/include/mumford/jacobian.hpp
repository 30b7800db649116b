#pragma once

#include <string>
#include <vector>

#include "mumford/theta.hpp"

namespace mumford {

// Hom(Gamma, K*) element, stored by its values on the free basis.
struct Character {
    std::vector<PadicNumber> values;
    std::int64_t tail = PadicNumber::kExact;  // certificate of the weakest component

    static Character identity(const Field& f, int rank);
    int rank() const { return static_cast<int>(values.size()); }
    PadicNumber eval(const Word& w) const;
    Character inverse() const;
    Character pow(std::int64_t k) const;
    friend Character operator*(const Character& x, const Character& y);
    friend Character operator/(const Character& x, const Character& y) { return x * y.inverse(); }
};

// min over components of v(x_k / y_k - 1)
std::int64_t character_deviation(const Character& x, const Character& y);

struct PeriodMatrix {
    std::vector<std::vector<PadicNumber>> q;  // q[i][j] = c_{xi_i}(xi_j)
    std::vector<PadicNumber> rho;             // rho[i]^2 = q[i][i]
    std::string rho_source;                   // "c_{e_i,e_0}(xi_i)" or "square root"
    std::int64_t symmetry_deviation = 0;
    std::int64_t rho_deviation = 0;  // v(rho^2 / q_ii - 1), minimum over i
    std::int64_t tail = 0;

    int rank() const { return static_cast<int>(q.size()); }
    // c_{xi_k} as a character: row k
    Character lattice(int k) const;
};

struct DivisorTerm {
    std::string label;  // "o1", "e0", or empty for explicit points
    P1Point point;
    int multiplicity = 0;
};

class Divisor {
public:
    Divisor() = default;
    Divisor& add(const P1Point& p, int multiplicity, std::string label = {});
    Divisor& add_branch(const GroupData& g, const std::string& label, int multiplicity);
    const std::vector<DivisorTerm>& terms() const { return terms_; }
    int degree() const;
    std::string to_string() const;
    friend Divisor operator-(const Divisor& x, const Divisor& y);
    friend Divisor operator+(const Divisor& x, const Divisor& y);

private:
    std::vector<DivisorTerm> terms_;
};

// "o<i>" or "e<i>" resolved through the group's fixed-point table.
P1Point branch_point(const GroupData& g, const std::string& label);

// Abel map, period matrix and theta series over a theta engine. The engine
// must outlive this object.
class Jacobian {
public:
    Jacobian(const ThetaEngine& engine, std::uint64_t seed);

    const ThetaEngine& engine() const { return engine_; }
    const GroupData& group() const { return engine_.group(); }

    // u_o(x) = c_{x,o}
    Character abel(const P1Point& x, const P1Point& o) const;
    Character abel(const Divisor& d, const P1Point& o) const;

    const PeriodMatrix& period_matrix() const;

private:
    const ThetaEngine& engine_;
    P1Point probe1_, probe2_;
    mutable std::optional<PeriodMatrix> periods_;
};

PeriodMatrix compute_period_matrix(const ThetaEngine& engine, const P1Point& probe1, const P1Point& probe2);

// Riemann theta series over the box |n_i| <= M, stopping at the first M >= 1
// whose boundary terms all have valuation >= tail and no less than the
// previous boundary, and at least min_box. tail_valuation is that boundary
// valuation.
ThetaValue riemann_theta(const Character& c, const PeriodMatrix& pm, int max_box, int tail, int min_box = 1);

// theta(c / u_o(D - K))
ThetaValue theta_with_characteristic(const Character& c, const Divisor& d, const Divisor& k, const P1Point& o,
                                     const Jacobian& jac, int max_box, int tail, int min_box = 1);

// Branch point images on the free basis; see the report entries for the
// readings evaluated.
LemmaSuiteReport verify_branch_point_images(const Jacobian& jac, std::uint64_t seed);

}  // namespace mumford
