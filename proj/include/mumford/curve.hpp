#pragma once

#include <string>
#include <vector>

#include "mumford/theta.hpp"

namespace mumford {

// Conjugates the configuration so that o_0 = 0 and e_0 = infinity.
// conjugator receives the Moebius map used (identity when already normal).
GroupData normalize(const GroupData& g, ProjectiveMatrix* conjugator = nullptr);

bool is_normalized(const GroupData& g);

// x(z) = Theta_{o_0,e_0}(z)^p
ThetaValue x_coordinate(const ThetaEngine& engine, const P1Point& z);

struct CurveModel {
    int p = 2;
    std::vector<int> r, l;             // exponents at o_i and e_i
    std::vector<PadicNumber> a;        // a[i] = x(o_i), a[0] = 0
    std::vector<P1Point> b;            // b[i] = x(e_i), b[0] = infinity
    std::int64_t tail = PadicNumber::kExact;
    int shells = 0;
    std::int64_t min_separation = 0;   // min v(u - w) over distinct finite branch values

    // y^p = x^{r_0} prod_i (x - a_i)^{r_i} (x - b_i)^{l_i}
    std::string equation() const;
};

CurveModel build_curve(const ThetaEngine& engine);

// x(sigma_i z) = x(z) at probe points, i = 0..s
IdentityCheck verify_x_invariance(const ThetaEngine& engine, std::uint64_t seed, int probes = 2);

}  // namespace mumford
