#pragma once

#include <array>

#include "mumford/schottky.hpp"

namespace fixtures {

using namespace mumford;

inline ProjectiveMatrix ints(const Field& f, std::array<std::int64_t, 4> e) {
    return {PadicNumber::from_int(f, e[0]), PadicNumber::from_int(f, e[1]), PadicNumber::from_int(f, e[2]),
            PadicNumber::from_int(f, e[3])};
}

// Involution with fixed points u and w.
inline std::array<std::int64_t, 4> involution(std::int64_t u, std::int64_t w) {
    return {u + w, -2 * u * w, 2, -(u + w)};
}

// Genus-2 hyperelliptic configuration over Q_7: sigma_0 = diag(-1, 1), sigma_i
// swapping i and i + 49.
inline GroupData hyperelliptic(int precision = 20) {
    const Field& f = Field::get(7, precision);
    return build_group({7, precision, 2}, {ints(f, {-1, 0, 0, 1}), ints(f, involution(1, 50)), ints(f, involution(2, 51))});
}

// p = 3, s = 1 over Q_7.
inline GroupData cyclic3(int precision = 20) {
    const Field& f = Field::get(7, precision);
    return build_group({7, precision, 3}, {ints(f, {0, -1, 1, -1}), ints(f, {-351, 120457, -1, 8})});
}

// Tate curve: p = 2, s = 1.
inline GroupData tate(int precision = 20) {
    const Field& f = Field::get(7, precision);
    return build_group({7, precision, 2}, {ints(f, {-1, 0, 0, 1}), ints(f, involution(1, 50))});
}

}  // namespace fixtures
