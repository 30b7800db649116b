#include "mumford/padic.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace mumford {

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

void FieldSpec::validate() const {
    if (!is_prime(q)) throw DomainError("residue_prime must be prime");
    if (precision < 1) throw DomainError("precision must be >= 1");
    if (cover_degree < 2 || !is_prime(static_cast<std::uint64_t>(cover_degree)))
        throw DomainError("cover_degree must be prime");
    if (cover_degree > 2 && (q - 1) % static_cast<std::uint64_t>(cover_degree) != 0)
        throw DomainError("root of unity not in field: cover_degree must divide q-1");
    Field::get(q, precision);
}

Field::Field(std::uint64_t q, int n) : q_(q), n_(n) {
    pow_.push_back(1);
    for (int k = 1; k <= n; ++k) pow_.push_back(pow_.back() * q);
}

const Field& Field::get(std::uint64_t q, int precision) {
    static std::mutex mu;
    static std::map<std::pair<std::uint64_t, int>, std::unique_ptr<Field>> registry;
    if (!is_prime(q)) throw DomainError("residue_prime must be prime");
    if (precision < 1) throw DomainError("precision must be >= 1");
    unsigned __int128 m = 1;
    for (int k = 0; k < precision; ++k) {
        m *= q;
        if (m >= (static_cast<unsigned __int128>(1) << 62))
            throw DomainError("q^N exceeds 62 bits; lower the precision");
    }
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = registry[{q, precision}];
    if (!slot) slot.reset(new Field(q, precision));
    return *slot;
}

std::uint64_t Field::invmod(std::uint64_t a, std::uint64_t m) const {
    std::int64_t t = 0, nt = 1;
    std::int64_t r = static_cast<std::int64_t>(m), nr = static_cast<std::int64_t>(a % m);
    while (nr != 0) {
        std::int64_t qt = r / nr;
        std::int64_t tmp = t - qt * nt;
        t = nt;
        nt = tmp;
        tmp = r - qt * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1) throw DomainError("not invertible");
    if (t < 0) t += static_cast<std::int64_t>(m);
    return static_cast<std::uint64_t>(t);
}

namespace {

std::int64_t sat_add(std::int64_t a, std::int64_t b) {
    return std::min(a + b, PadicNumber::kExact);
}

}  // namespace

PadicNumber PadicNumber::zero(const Field& f) {
    PadicNumber z;
    z.f_ = &f;
    return z;
}

PadicNumber PadicNumber::zero_to(const Field& f, std::int64_t absolute_precision) {
    PadicNumber z;
    z.f_ = &f;
    z.v_ = std::min(absolute_precision, kExact);
    return z;
}

PadicNumber PadicNumber::lifted() const {
    if (zero_) return *this;
    PadicNumber x = *this;
    x.r_ = f_->precision();
    return x;
}

PadicNumber PadicNumber::with_absolute_precision(std::int64_t a) const {
    if (a >= absolute_precision()) return *this;
    if (zero_ || a <= v_) return zero_to(*f_, a);
    PadicNumber x = *this;
    x.r_ = static_cast<int>(a - v_);
    x.u_ %= f_->power(x.r_);
    return x;
}

PadicNumber PadicNumber::one(const Field& f) { return from_parts(f, 0, 1, f.precision()); }

PadicNumber PadicNumber::from_int(const Field& f, std::int64_t n) { return from_rational(f, n, 1); }

PadicNumber PadicNumber::from_rational(const Field& f, std::int64_t num, std::int64_t den) {
    if (den == 0) throw DomainError("division by zero");
    if (num == 0) return zero(f);
    const auto q = static_cast<std::int64_t>(f.q());
    std::int64_t v = 0;
    while (num % q == 0) {
        num /= q;
        ++v;
    }
    while (den % q == 0) {
        den /= q;
        --v;
    }
    const std::uint64_t m = f.power(f.precision());
    auto reduce = [m](std::int64_t x) {
        auto r = static_cast<std::int64_t>(static_cast<unsigned __int128>(x < 0 ? -x : x) % m);
        if (x < 0 && r != 0) r = static_cast<std::int64_t>(m) - r;
        return static_cast<std::uint64_t>(r);
    };
    std::uint64_t u = f.mulmod(reduce(num), f.invmod(reduce(den), m), m);
    return from_parts(f, v, u, f.precision());
}

PadicNumber PadicNumber::from_parts(const Field& f, std::int64_t v, std::uint64_t u, int r) {
    if (r < 1) throw PrecisionError("precision exhausted");
    r = std::min(r, f.precision());
    u %= f.power(r);
    if (u % f.q() == 0) throw DomainError("unit part divisible by q");
    PadicNumber x;
    x.f_ = &f;
    x.zero_ = false;
    x.v_ = v;
    x.u_ = u;
    x.r_ = r;
    return x;
}

const Field& PadicNumber::field() const {
    if (!f_) throw DomainError("number has no field");
    return *f_;
}

PadicNumber PadicNumber::operator-() const {
    if (zero_) return *this;
    PadicNumber x = *this;
    x.u_ = f_->power(r_) - u_;
    return x;
}

PadicNumber PadicNumber::inverse() const {
    if (is_exact_zero()) throw DomainError("division by zero");
    if (zero_) throw PrecisionError("precision exhausted");
    PadicNumber x = *this;
    x.v_ = -v_;
    x.u_ = f_->invmod(u_, f_->power(r_));
    return x;
}

PadicNumber PadicNumber::pow(std::int64_t k) const {
    if (k == 0) return one(field());
    if (k < 0) return inverse().pow(-k);
    if (zero_) {
        if (is_exact_zero()) return *this;
        return zero_to(*f_, v_ > 0 ? sat_add(v_ * k, 0) : v_);
    }
    PadicNumber x = *this;
    x.v_ = v_ * k;
    const std::uint64_t m = f_->power(r_);
    std::uint64_t base = u_, acc = 1;
    auto e = static_cast<std::uint64_t>(k);
    while (e) {
        if (e & 1) acc = f_->mulmod(acc, base, m);
        base = f_->mulmod(base, base, m);
        e >>= 1;
    }
    x.u_ = acc;
    return x;
}

PadicNumber operator*(const PadicNumber& x, const PadicNumber& y) {
    const Field* f = x.f_ ? x.f_ : y.f_;
    if (x.is_exact_zero() || y.is_exact_zero()) return PadicNumber::zero(*f);
    if (x.zero_ || y.zero_) {
        std::int64_t a = x.zero_ && y.zero_ ? sat_add(x.v_, y.v_)
                         : x.zero_          ? sat_add(x.v_, y.v_)
                                            : sat_add(y.v_, x.v_);
        return PadicNumber::zero_to(*f, a);
    }
    PadicNumber z;
    z.f_ = f;
    z.zero_ = false;
    z.v_ = x.v_ + y.v_;
    z.r_ = std::min(x.r_, y.r_);
    const std::uint64_t m = f->power(z.r_);
    z.u_ = f->mulmod(x.u_ % m, y.u_ % m, m);
    return z;
}

PadicNumber operator+(const PadicNumber& x, const PadicNumber& y) {
    if (x.is_exact_zero()) return y.f_ || !x.f_ ? y : x;
    if (y.is_exact_zero()) return x;
    const Field& f = *(x.f_ ? x.f_ : y.f_);
    const std::int64_t a = std::min(x.absolute_precision(), y.absolute_precision());
    if (x.zero_ && y.zero_) return PadicNumber::zero_to(f, a);
    const PadicNumber* lo = &x;
    const PadicNumber* hi = &y;
    if (lo->zero_ || (!hi->zero_ && hi->v_ < lo->v_)) std::swap(lo, hi);
    // lo is nonzero with the smaller valuation
    if (lo->v_ >= a) return PadicNumber::zero_to(f, a);
    const int width = static_cast<int>(a - lo->v_);
    const std::uint64_t m = f.power(width);
    std::uint64_t s = lo->u_ % m;
    if (!hi->zero_ && hi->v_ < a) {
        const int shift = static_cast<int>(hi->v_ - lo->v_);
        const std::uint64_t part = f.mulmod(hi->u_ % f.power(width - shift), f.power(shift), m);
        s += part;
        if (s >= m) s -= m;
    }
    if (s == 0) return PadicNumber::zero_to(f, a);
    std::int64_t v = lo->v_;
    int r = width;
    while (s % f.q() == 0) {
        s /= f.q();
        ++v;
        --r;
    }
    return PadicNumber::from_parts(f, v, s, r);
}

bool PadicNumber::identical(const PadicNumber& o) const {
    return zero_ == o.zero_ && v_ == o.v_ && u_ == o.u_ && r_ == o.r_;
}

std::uint64_t PadicNumber::residue(int k) const {
    const Field& f = field();
    if (zero_) return 0;
    if (v_ < 0) throw DomainError("residue of non-integral value");
    if (v_ >= k) return 0;
    const std::uint64_t m = f.power(k);
    return f.mulmod(u_ % m, f.power(static_cast<int>(v_)), m);
}

std::vector<std::uint64_t> PadicNumber::digits() const {
    std::vector<std::uint64_t> out;
    std::uint64_t u = u_;
    for (int i = 0; i < r_; ++i) {
        out.push_back(u % f_->q());
        u /= f_->q();
    }
    return out;
}

std::string PadicNumber::to_string() const {
    std::ostringstream os;
    if (is_exact_zero()) return "0";
    const std::uint64_t q = field().q();
    if (zero_) {
        os << "O(" << q << "^" << v_ << ")";
        return os.str();
    }
    os << "[";
    auto d = digits();
    for (std::size_t i = 0; i < d.size(); ++i) os << (i ? "," : "") << d[i];
    os << "] * " << q << "^" << v_ << " + O(" << q << "^" << (v_ + r_) << ")";
    return os.str();
}

std::int64_t agreement(const PadicNumber& x, const PadicNumber& y) {
    const std::int64_t a = std::min(x.absolute_precision(), y.absolute_precision());
    if (x.is_exact_zero() && y.is_exact_zero()) return PadicNumber::kExact;
    PadicNumber d = x - y;
    return d.is_zero() ? std::min(a, d.valuation()) : d.valuation();
}

PadicNumber teichmuller(const Field& f, std::uint64_t a) {
    const std::uint64_t q = f.q();
    if (a % q == 0) throw DomainError("teichmuller of a residue divisible by q");
    const std::uint64_t m = f.power(f.precision());
    std::uint64_t w = a % q;
    for (int it = 0; it <= f.precision() + 1; ++it) {
        std::uint64_t base = w, acc = 1, e = q;
        while (e) {
            if (e & 1) acc = f.mulmod(acc, base, m);
            base = f.mulmod(base, base, m);
            e >>= 1;
        }
        if (acc == w) break;
        w = acc;
    }
    return PadicNumber::from_parts(f, 0, w, f.precision());
}

std::uint64_t smallest_primitive_root(std::uint64_t q) {
    if (q == 2) return 1;
    std::vector<std::uint64_t> factors;
    std::uint64_t n = q - 1;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) {
            factors.push_back(d);
            while (n % d == 0) n /= d;
        }
    if (n > 1) factors.push_back(n);
    auto powmod = [q](std::uint64_t b, std::uint64_t e) {
        unsigned __int128 acc = 1, base = b % q;
        while (e) {
            if (e & 1) acc = acc * base % q;
            base = base * base % q;
            e >>= 1;
        }
        return static_cast<std::uint64_t>(acc);
    };
    for (std::uint64_t g = 2; g < q; ++g) {
        bool ok = true;
        for (auto pf : factors)
            if (powmod(g, (q - 1) / pf) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    throw DomainError("no primitive root");
}

PadicNumber primitive_root_of_unity(const Field& f, std::uint64_t order) {
    if (order == 0 || (f.q() - 1) % order != 0) throw DomainError("root of unity not in field");
    if (order == 1) return PadicNumber::one(f);
    return teichmuller(f, smallest_primitive_root(f.q())).pow(static_cast<std::int64_t>((f.q() - 1) / order));
}

namespace {

std::uint64_t sqrt_mod_prime(std::uint64_t a, std::uint64_t q) {
    auto mul = [q](std::uint64_t x, std::uint64_t y) {
        return static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * y % q);
    };
    auto powm = [&](std::uint64_t b, std::uint64_t e) {
        std::uint64_t acc = 1;
        b %= q;
        while (e) {
            if (e & 1) acc = mul(acc, b);
            b = mul(b, b);
            e >>= 1;
        }
        return acc;
    };
    a %= q;
    if (powm(a, (q - 1) / 2) != 1) throw DomainError("square root not in field");
    // Tonelli-Shanks
    std::uint64_t s = 0, odd = q - 1;
    while (odd % 2 == 0) {
        odd /= 2;
        ++s;
    }
    std::uint64_t z = 2;
    while (powm(z, (q - 1) / 2) != q - 1) ++z;
    std::uint64_t m = s, c = powm(z, odd), t = powm(a, odd), r = powm(a, (odd + 1) / 2);
    while (t != 1) {
        std::uint64_t i = 0, tt = t;
        while (tt != 1) {
            tt = mul(tt, tt);
            ++i;
        }
        std::uint64_t b = c;
        for (std::uint64_t j = 0; j + i + 1 < m; ++j) b = mul(b, b);
        m = i;
        c = mul(b, b);
        t = mul(t, c);
        r = mul(r, b);
    }
    return r;
}

}  // namespace

PadicNumber hensel_sqrt(const PadicNumber& x) {
    if (x.is_zero()) throw DomainError("square root of zero");
    const Field& f = x.field();
    if (x.valuation() % 2 != 0) throw DomainError("square root not in field: odd valuation");
    const std::uint64_t q = f.q();
    const int r = x.relative_precision();
    const std::uint64_t m = f.power(r);
    std::uint64_t y;
    int out_r = r;
    if (q == 2) {
        if (x.unit() % 8 != 1 && r >= 3) throw DomainError("unsupported, use q odd");
        y = 1;
        for (int i = 3; i < r; ++i) {
            const std::uint64_t mod = f.power(i + 1);
            if ((f.mulmod(y, y, mod) + mod - x.unit() % mod) % mod != 0) y += f.power(i - 1);
        }
        out_r = std::max(1, r - 1);
        y %= f.power(out_r);
    } else {
        y = sqrt_mod_prime(x.unit(), q);
        if (y > (q - 1) / 2) y = q - y;
        std::uint64_t mod = q;
        while (mod < m) {
            mod = (mod > m / mod) ? m : mod * mod;
            // y <- y - (y^2 - u) / (2y)
            const std::uint64_t y2 = f.mulmod(y, y, mod);
            const std::uint64_t diff = (y2 + mod - x.unit() % mod) % mod;
            const std::uint64_t step = f.mulmod(diff, f.invmod((2 * y) % mod, mod), mod);
            y = (y + mod - step) % mod;
        }
    }
    return PadicNumber::from_parts(f, x.valuation() / 2, y, out_r);
}

void PadicAccumulator::add(const PadicNumber& x) {
    if (x.is_exact_zero()) return;
    abs_prec_ = std::min(abs_prec_, x.absolute_precision());
    if (!x.is_zero()) terms_.push_back({x.valuation(), x.unit(), x.relative_precision()});
}

void PadicAccumulator::merge(const PadicAccumulator& o) {
    abs_prec_ = std::min(abs_prec_, o.abs_prec_);
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
}

PadicNumber PadicAccumulator::value() const {
    const Field& f = *f_;
    if (terms_.empty()) return abs_prec_ >= PadicNumber::kExact ? PadicNumber::zero(f) : PadicNumber::zero_to(f, abs_prec_);
    std::int64_t vmin = terms_.front().v;
    for (const auto& t : terms_) vmin = std::min(vmin, t.v);
    if (vmin >= abs_prec_) return PadicNumber::zero_to(f, abs_prec_);
    const int width = static_cast<int>(std::min<std::int64_t>(abs_prec_ - vmin, f.precision()));
    const std::int64_t a = vmin + width;
    const std::uint64_t m = f.power(width);
    std::uint64_t s = 0;
    for (const auto& t : terms_) {
        if (t.v >= a) continue;
        const int shift = static_cast<int>(t.v - vmin);
        s += f.mulmod(t.u % f.power(width - shift), f.power(shift), m);
        if (s >= m) s -= m;
    }
    if (s == 0) return PadicNumber::zero_to(f, a);
    std::int64_t v = vmin;
    int r = width;
    while (s % f.q() == 0) {
        s /= f.q();
        ++v;
        --r;
    }
    return PadicNumber::from_parts(f, v, s, r);
}

}  // namespace mumford
