#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mumford/curve.hpp"
#include "mumford/jacobian.hpp"

namespace mumford {

// Hyperelliptic branch labels: B_1 = e_0 (over infinity), B_2 = o_0 (over 0),
// B_{2i+1} = o_i, B_{2i+2} = e_i.
std::string hyperelliptic_label(int label);
P1Point hyperelliptic_branch_point(const GroupData& g, int label);
// x-coordinate of B_label from the curve model
P1Point hyperelliptic_branch_value(const CurveModel& curve, int label);

// K = sum of B_i over the odd labels 3, 5, ..., 2g+1
Divisor hyperelliptic_riemann_divisor(const GroupData& g);

// u_{B_1}(sum_{i in P} B_i + K)
Character characteristic_shift(const std::set<int>& P, const Jacobian& jac);

// theta(c / u_{B_1}(sum_{i in P} B_i + K))
ThetaValue theta_char_hyper(const std::set<int>& P, const Character& c, const Jacobian& jac, int max_box,
                            int min_box = 1);

// kappa with x = prod_k c_{xi_k}^{kappa_k}, checked to the given deviation;
// empty when x is not a lattice element.
std::optional<std::vector<int>> lattice_coordinates(const Character& x, const PeriodMatrix& pm, std::int64_t tolerance);

// (a - c)(b - d) / ((a - d)(b - c)), one argument may be infinity
PadicNumber cross_ratio(const P1Point& a, const P1Point& b, const P1Point& c, const P1Point& d);

struct LambdaValue {
    PadicNumber raw;         // theta^2[P1](Q1) theta^2[P2](Q2) / (theta^2[P1](Q2) theta^2[P2](Q1))
    PadicNumber normalized;  // raw * u(Q2)(kappa) / u(Q1)(kappa)
    std::vector<int> kappa;  // (u_1 / u_2)^2 = prod_k c_{xi_k}^{kappa_k}
    std::int64_t tail = PadicNumber::kExact;
    int box = 0;  // largest theta box used
};

LambdaValue lambda_ratio(const std::set<int>& P1, const std::set<int>& P2, const P1Point& Q1, const P1Point& Q2,
                         const Jacobian& jac, int max_box, int min_box = 1);

struct CrossRatioRequest {
    std::set<int> P1{1, 2}, P2{1, 3};
    int k = 4, j = 5;
    int max_box = 6;
    int min_box = 1;
};

struct CrossRatioReport {
    std::set<int> P1, P2;
    int l = 0, m = 0, k = 0, j = 0;
    LambdaValue lhs;
    PadicNumber rhs;
    std::int64_t deviation = 0;      // v(normalized / rhs - 1)
    std::int64_t raw_deviation = 0;  // v(raw / rhs - 1)
    std::string printed_reading;     // outcome of the denominator as displayed
    bool pass = false;
};

CrossRatioReport verify_cross_ratio_theorem(const Jacobian& jac, const CurveModel& curve, const CrossRatioRequest& req);

}  // namespace mumford
