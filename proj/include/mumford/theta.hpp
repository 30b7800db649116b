#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mumford/schottky.hpp"

namespace mumford {

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TruncationPolicy {
    int max_length = 8;
    int tail = 10;
    void validate() const;
};

struct ThetaValue {
    PadicNumber value;
    std::int64_t tail_valuation = 0;  // min over the last shell of v(factor - 1)
    int shells = 0;                   // longest word length used
};

// v(x/y - 1) capped by precision; both zero counts as full agreement.
std::int64_t relative_deviation(const PadicNumber& x, const PadicNumber& y);

struct AutomorphyValue {
    PadicNumber value;  // direct product
    PadicNumber ratio;  // theta quotient at a probe
    std::int64_t deviation = 0;
    std::int64_t tail_valuation = 0;
    int shells = 0;
};

// Theta products over a fixed group and truncation policy. Orbits of the
// points a, b are cached per instance.
class ThetaEngine {
public:
    ThetaEngine(GroupData group, TruncationPolicy policy);
    // The same group seen through z -> upsilon z. Orbits are generated in the
    // original frame and mapped over, since the new frame may put infinity
    // inside a Schottky disk.
    ThetaEngine reframed(const ProjectiveMatrix& upsilon) const;

    const GroupData& group() const { return group_; }
    const TruncationPolicy& policy() const { return policy_; }
    const WordTable& words() const { return *table_; }

    ThetaValue theta(const P1Point& a, const P1Point& b, const P1Point& z) const;

    // u_gamma(z) = Theta_{a, gamma a}(z), which does not depend on a and is
    // multiplicative in gamma; evaluated on basis letters at the given base.
    ThetaValue theta_gamma(const Word& gamma, const P1Point& base, const P1Point& z) const;

    // c_{a,b}(alpha) for alpha normalizing the group, as the direct product
    // prod_gamma X(gamma a)/X(gamma b).
    ThetaValue automorphy_direct(const P1Point& a, const P1Point& b, const ProjectiveMatrix& alpha) const;
    // Theta_{a,b}(alpha z0) / Theta_{alpha^-1 a, alpha^-1 b}(z0); for alpha in
    // the group the denominator is Theta_{a,b}(z0).
    ThetaValue automorphy_ratio(const P1Point& a, const P1Point& b, const ProjectiveMatrix& alpha,
                                const P1Point& z0, bool in_group = false) const;
    // Both routes, cross-checked; throws if they disagree beyond the tail bound.
    AutomorphyValue automorphy_constant(const P1Point& a, const P1Point& b, const ProjectiveMatrix& alpha,
                                        const P1Point& z0, bool in_group = false) const;
    // For a group word: both routes on each basis letter, combined through
    // the abelianized exponent vector (c_{a,b} is a character of the group).
    AutomorphyValue automorphy_constant(const P1Point& a, const P1Point& b, const Word& gamma,
                                        const P1Point& z0) const;

    // c_beta(gamma) = c_{beta a, a}(gamma), checked at two base points.
    PadicNumber multiplier(const Word& beta, const Word& gamma, const P1Point& base1, const P1Point& base2) const;

    std::shared_ptr<const std::vector<P1Point>> orbit(const P1Point& a) const;

private:
    using Frame = std::pair<ProjectiveMatrix, ProjectiveMatrix>;
    ThetaEngine(GroupData group, TruncationPolicy policy, std::shared_ptr<const WordTable> table, Frame frame);

    GroupData group_;
    TruncationPolicy policy_;
    std::shared_ptr<const WordTable> table_;
    std::optional<Frame> frame_;  // upsilon, upsilon^-1
    mutable std::mutex mu_;
    mutable std::map<std::string, std::shared_ptr<const std::vector<P1Point>>> orbits_;
};

// Deterministic probe points: units, outside every isometric disk by at least
// one valuation unit, and off the residue classes of all fixed points.
class ProbeGenerator {
public:
    ProbeGenerator(const GroupData& g, std::uint64_t seed);
    P1Point next();

private:
    const Field* field_;
    std::mt19937_64 rng_;
    std::vector<DiskInfo> disks_;
    std::vector<P1Point> avoid_;
};

struct IdentityCheck {
    std::string name;
    std::string detail;
    int probes = 0;
    std::int64_t deviation = 0;  // minimum over all evaluations
    std::int64_t tail = 0;       // minimum certified tail valuation
    int shells = 0;
    bool pass = false;
    bool informational = false;  // reported but not counted
};

struct LemmaSuiteReport {
    std::vector<IdentityCheck> checks;
    bool pass() const;
};

LemmaSuiteReport verify_lemma_suite(const ThetaEngine& engine, std::uint64_t seed, int probes = 2);

}  // namespace mumford
