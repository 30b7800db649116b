#include "mumford/moebius.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace mumford {

const PadicNumber& P1Point::value() const {
    if (!z_) throw DomainError("point at infinity has no finite value");
    return *z_;
}

std::string P1Point::to_string() const { return z_ ? z_->to_string() : "inf"; }

std::int64_t point_agreement(const P1Point& a, const P1Point& b) {
    if (a.is_infinity() && b.is_infinity()) return PadicNumber::kExact;
    if (a.is_infinity() || b.is_infinity()) {
        const PadicNumber& z = a.is_infinity() ? b.value() : a.value();
        return z.is_zero() ? PadicNumber::kExact : -z.valuation();
    }
    return agreement(a.value(), b.value());
}

ProjectiveMatrix::ProjectiveMatrix(PadicNumber a, PadicNumber b, PadicNumber c, PadicNumber d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
    rescale();
}

ProjectiveMatrix ProjectiveMatrix::identity(const Field& f) {
    return {PadicNumber::one(f), PadicNumber::zero(f), PadicNumber::zero(f), PadicNumber::one(f)};
}

ProjectiveMatrix ProjectiveMatrix::diagonal(const PadicNumber& x, const PadicNumber& y) {
    return {x, PadicNumber::zero(x.field()), PadicNumber::zero(x.field()), y};
}

void ProjectiveMatrix::rescale() {
    std::int64_t vmin = PadicNumber::kExact;
    for (const auto* e : {&a_, &b_, &c_, &d_})
        if (!e->is_zero()) vmin = std::min(vmin, e->valuation());
    if (vmin == 0 || vmin == PadicNumber::kExact) return;
    const Field& f = field();
    const auto s = PadicNumber::from_parts(f, -vmin, 1, f.precision());
    a_ *= s;
    b_ *= s;
    c_ *= s;
    d_ *= s;
}

ProjectiveMatrix ProjectiveMatrix::inverse() const { return {d_, -b_, -c_, a_}; }

bool ProjectiveMatrix::is_scalar() const {
    return b_.is_zero() && c_.is_zero() && agreement(a_, d_) >= std::min(a_.absolute_precision(), d_.absolute_precision());
}

std::optional<ProjectiveMatrix> ProjectiveMatrix::unimodular() const {
    const PadicNumber det = determinant();
    if (det.valuation() % 2 != 0) return std::nullopt;
    try {
        const PadicNumber s = hensel_sqrt(det).inverse();
        ProjectiveMatrix m = *this;
        m.a_ *= s;
        m.b_ *= s;
        m.c_ *= s;
        m.d_ *= s;
        return m;
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

std::string ProjectiveMatrix::to_string() const {
    std::ostringstream os;
    os << "[[" << a_.to_string() << ", " << b_.to_string() << "], [" << c_.to_string() << ", " << d_.to_string() << "]]";
    return os.str();
}

ProjectiveMatrix operator*(const ProjectiveMatrix& x, const ProjectiveMatrix& y) {
    return {x.a_ * y.a_ + x.b_ * y.c_, x.a_ * y.b_ + x.b_ * y.d_, x.c_ * y.a_ + x.d_ * y.c_, x.c_ * y.b_ + x.d_ * y.d_};
}

std::int64_t projective_agreement(const ProjectiveMatrix& x, const ProjectiveMatrix& y) {
    // pick the entry of x with smallest valuation as the common scale
    const PadicNumber* xs[4] = {&x.a(), &x.b(), &x.c(), &x.d()};
    const PadicNumber* ys[4] = {&y.a(), &y.b(), &y.c(), &y.d()};
    int k = -1;
    for (int i = 0; i < 4; ++i)
        if (!xs[i]->is_zero() && (k < 0 || xs[i]->valuation() < xs[k]->valuation())) k = i;
    if (k < 0 || ys[k]->is_zero()) return std::numeric_limits<std::int64_t>::min();
    const PadicNumber sx = xs[k]->inverse(), sy = ys[k]->inverse();
    std::int64_t best = PadicNumber::kExact;
    for (int i = 0; i < 4; ++i) best = std::min(best, agreement(*xs[i] * sx, *ys[i] * sy));
    return best;
}

bool projectively_equal(const ProjectiveMatrix& x, const ProjectiveMatrix& y) {
    return projective_agreement(x, y) >= x.field().precision() / 2;
}

P1Point apply(const ProjectiveMatrix& m, const P1Point& z) {
    if (z.is_infinity()) {
        if (m.c().is_exact_zero()) return P1Point::infinity();
        if (m.c().is_zero()) throw PrecisionError("precision exhausted");
        return P1Point(m.a() / m.c());
    }
    const PadicNumber den = m.c() * z.value() + m.d();
    const PadicNumber num = m.a() * z.value() + m.b();
    if (den.is_exact_zero()) return P1Point::infinity();
    if (den.is_zero()) {
        // (num : den) with den vanishing to full precision is infinity unless num vanishes too
        if (num.is_zero()) throw PrecisionError("precision exhausted");
        return P1Point::infinity();
    }
    return P1Point(num / den);
}

P1Point apply_first_order(const ProjectiveMatrix& m, const P1Point& z) {
    if (z.is_infinity() || z.value().is_zero()) return apply(m, z);
    const PadicNumber zl = z.value().lifted();
    const PadicNumber den = m.c() * zl + m.d();
    if (den.is_zero()) return apply(m, z);
    const P1Point out = apply(m, P1Point(zl));
    if (out.is_infinity()) return out;
    const std::int64_t gain = m.determinant().valuation() - 2 * den.valuation();
    return P1Point(out.value().with_absolute_precision(z.value().absolute_precision() + gain));
}

std::pair<P1Point, P1Point> fixed_points(const ProjectiveMatrix& m) {
    if (m.is_scalar()) throw DomainError("scalar matrix has no isolated fixed points");
    const PadicNumber diff = m.a() - m.d();
    if (m.c().is_zero()) {
        // upper triangular: z = b/(d-a) and infinity
        if (diff.is_zero()) throw DomainError("parabolic element unsupported");
        return {P1Point(m.b() / (-diff)), P1Point::infinity()};
    }
    const Field& f = m.field();
    const PadicNumber four = PadicNumber::from_int(f, 4);
    const PadicNumber disc = diff * diff + four * m.b() * m.c();
    if (disc.is_zero()) throw DomainError("parabolic element unsupported");
    PadicNumber s;
    try {
        s = hensel_sqrt(disc);
    } catch (const DomainError&) {
        throw DomainError("fixed points not rational");
    }
    const PadicNumber two_c = PadicNumber::from_int(f, 2) * m.c();
    return {P1Point((diff - s) / two_c), P1Point((diff + s) / two_c)};
}

std::optional<int> projective_order(const ProjectiveMatrix& m, int bound) {
    ProjectiveMatrix acc = m;
    for (int k = 1; k <= bound; ++k) {
        if (acc.is_scalar()) return k;
        acc = acc * m;
    }
    return std::nullopt;
}

PadicNumber multiplier_at(const ProjectiveMatrix& m, const P1Point& fixed) {
    if (fixed.is_infinity()) {
        // local coordinate 1/z: derivative is d/a
        return m.d() / m.a();
    }
    const PadicNumber den = m.c() * fixed.value() + m.d();
    return m.determinant() / (den * den);
}

ProjectiveMatrix frame_conjugator(const P1Point& o, const P1Point& e) {
    if (o.is_infinity() && e.is_infinity()) throw DomainError("degenerate frame");
    const Field& f = o.is_infinity() ? e.value().field() : o.value().field();
    const auto one = PadicNumber::one(f);
    const auto zero = PadicNumber::zero(f);
    if (e.is_infinity()) return {one, -o.value(), zero, one};
    if (o.is_infinity()) return {zero, one, one, -e.value()};
    return {one, -o.value(), one, -e.value()};
}

Diagonalization diagonalize(const ProjectiveMatrix& m, const PadicNumber& zeta, int p) {
    auto order = projective_order(m, p);
    if (!order || *order != p) throw DomainError("element is not elliptic of the cover order");
    auto [first, second] = fixed_points(m);
    const PadicNumber mult = multiplier_at(m, first);
    for (int nu = 1; nu < p; ++nu) {
        const PadicNumber z = zeta.pow(nu);
        if (agreement(mult, z) >= 1) {
            // agreement modulo q is enough: distinct Teichmuller roots differ mod q
            Diagonalization out{frame_conjugator(first, second), nu, first, second};
            return out;
        }
    }
    throw DomainError("multiplier is not a power of the chosen root of unity");
}

}  // namespace mumford
