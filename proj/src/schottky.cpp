#include "mumford/schottky.hpp"

#include <cstdlib>
#include <map>
#include <mutex>
#include <sstream>

namespace mumford {

Word::Word(std::vector<Letter> letters) : letters_(std::move(letters)) { reduce(); }

void Word::reduce() {
    std::vector<Letter> out;
    out.reserve(letters_.size());
    for (const auto& l : letters_) {
        if (!out.empty() && out.back().basis == l.basis && out.back().exponent == -l.exponent)
            out.pop_back();
        else
            out.push_back(l);
    }
    letters_ = std::move(out);
}

Word Word::inverse() const {
    std::vector<Letter> out(letters_.rbegin(), letters_.rend());
    for (auto& l : out) l.exponent = -l.exponent;
    return Word(std::move(out));
}

std::vector<int> Word::abelianize(int rank) const {
    std::vector<int> out(static_cast<std::size_t>(rank), 0);
    for (const auto& l : letters_) out.at(static_cast<std::size_t>(l.basis)) += l.exponent;
    return out;
}

std::string Word::to_string(const std::vector<std::string>& names) const {
    if (letters_.empty()) return "id";
    std::ostringstream os;
    for (std::size_t k = 0; k < letters_.size(); ++k) {
        if (k) os << ' ';
        os << names.at(static_cast<std::size_t>(letters_[k].basis));
        if (letters_[k].exponent < 0) os << "^-1";
    }
    return os.str();
}

Word operator*(const Word& x, const Word& y) {
    std::vector<Letter> l = x.letters_;
    l.insert(l.end(), y.letters_.begin(), y.letters_.end());
    return Word(std::move(l));
}

std::vector<std::string> GroupData::basis_names() const {
    std::vector<std::string> out;
    for (const auto& b : basis) out.push_back(b.name);
    return out;
}

ProjectiveMatrix GroupData::matrix_of(const Word& w) const {
    ProjectiveMatrix m = ProjectiveMatrix::identity(*field);
    for (const auto& l : w.letters()) {
        const auto& b = basis.at(static_cast<std::size_t>(l.basis)).matrix;
        m = m * (l.exponent > 0 ? b : b.inverse());
    }
    return m;
}

ProjectiveMatrix GroupData::matrix_of(const SigmaWord& w) const {
    // merge runs of the same generator and use the shortest signed power
    SigmaWord merged;
    for (const auto& l : w) {
        if (!merged.empty() && merged.back().generator == l.generator)
            merged.back().exponent += l.exponent;
        else
            merged.push_back(l);
        int& e = merged.back().exponent;
        e = ((e % p) + p) % p;
        if (2 * e > p) e -= p;
        if (e == 0) merged.pop_back();
    }
    ProjectiveMatrix m = ProjectiveMatrix::identity(*field);
    for (const auto& l : merged) {
        const auto& s = generators.at(static_cast<std::size_t>(l.generator)).matrix;
        const ProjectiveMatrix step = l.exponent > 0 ? s : s.inverse();
        for (int k = 0; k < std::abs(l.exponent); ++k) m = m * step;
    }
    return m;
}

GroupData build_group(const FieldSpec& spec, const std::vector<ProjectiveMatrix>& sigma) {
    spec.validate();
    if (sigma.size() < 2) throw DomainError("need at least two generators sigma_0, sigma_1");
    GroupData g;
    g.spec = spec;
    g.field = &Field::get(spec.q, spec.precision);
    g.p = spec.cover_degree;
    g.zeta = primitive_root_of_unity(*g.field, static_cast<std::uint64_t>(g.p));
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (sigma[i].determinant().is_zero()) throw DomainError("sigma_" + std::to_string(i) + ": singular matrix");
        Diagonalization d = [&] {
            try {
                return diagonalize(sigma[i], g.zeta, g.p);
            } catch (const DomainError& e) {
                throw DomainError("sigma_" + std::to_string(i) + ": " + e.what());
            }
        }();
        g.generators.push_back({sigma[i], d.o, d.e, d.exponent, d.conjugator});
    }
    const int s = g.s();
    const ProjectiveMatrix s0 = sigma[0];
    const ProjectiveMatrix s0inv = s0.inverse();
    for (int j = 1; j <= s; ++j) {
        ProjectiveMatrix m = sigma[static_cast<std::size_t>(j)] * s0inv;
        for (int i = 1; i < g.p; ++i) {
            if (i > 1) m = s0 * m * s0inv;
            BasisElement b{j, i, "x" + std::to_string(j) + "_" + std::to_string(i), {}, m};
            // sigma_0^{i-1} sigma_j sigma_0^{-i}
            if (i > 1) b.sigma_word.push_back({0, i - 1});
            b.sigma_word.push_back({j, 1});
            b.sigma_word.push_back({0, -i});
            g.basis.push_back(std::move(b));
        }
    }
    g.rank = static_cast<int>(g.basis.size());
    return g;
}

GroupData conjugate_group(const GroupData& g, const ProjectiveMatrix& mu) {
    std::vector<ProjectiveMatrix> sigma;
    const ProjectiveMatrix inv = mu.inverse();
    for (const auto& gen : g.generators) sigma.push_back(mu * gen.matrix * inv);
    return build_group(g.spec, sigma);
}

Word rewrite_to_basis(const GroupData& g, const SigmaWord& w) {
    const int p = g.p;
    int coset = 0;
    std::vector<Letter> out;
    for (const auto& l : w) {
        if (l.generator < 0 || l.generator > g.s()) throw DomainError("unknown generator");
        const int reps = ((l.exponent % p) + p) % p;
        for (int r = 0; r < reps; ++r) {
            if (l.generator == 0) {
                coset = (coset + 1) % p;
                continue;
            }
            const int j = l.generator;
            if (coset + 1 < p) {
                out.push_back({g.basis_index(j, coset + 1), 1});
            } else {
                // sigma_0^{p-1} sigma_j = (xi_{j,1} ... xi_{j,p-1})^{-1}
                for (int i = p - 1; i >= 1; --i) out.push_back({g.basis_index(j, i), -1});
            }
            coset = (coset + 1) % p;
        }
    }
    if (coset != 0) throw DomainError("not in kernel");
    return Word(std::move(out));
}

SigmaWord sigma_word_of(const Word& w, const GroupData& g) {
    SigmaWord out;
    for (const auto& l : w.letters()) {
        const auto& sw = g.basis.at(static_cast<std::size_t>(l.basis)).sigma_word;
        if (l.exponent > 0) {
            out.insert(out.end(), sw.begin(), sw.end());
        } else {
            for (auto it = sw.rbegin(); it != sw.rend(); ++it) out.push_back({it->generator, -it->exponent});
        }
    }
    return out;
}

WordTable::WordTable(const GroupData& g, int max_length) {
    if (max_length < 0) throw DomainError("negative word length");
    entries_.push_back({-1, {0, 0}, ProjectiveMatrix::identity(*g.field)});
    shell_start_ = {0, 1};
    for (const auto& b : g.basis) {
        gens_.push_back(b.matrix);
        invs_.push_back(b.matrix.inverse());
    }
    for (int len = 1; len <= max_length; ++len) {
        const std::size_t lo = shell_start_[static_cast<std::size_t>(len - 1)];
        const std::size_t hi = shell_start_[static_cast<std::size_t>(len)];
        for (std::size_t k = lo; k < hi; ++k) {
            for (int b = 0; b < g.rank; ++b) {
                for (int e : {1, -1}) {
                    if (len > 1 && entries_[k].last.basis == b && entries_[k].last.exponent == -e) continue;
                    ProjectiveMatrix m = letter_matrix({b, e}) * entries_[k].matrix;
                    entries_.push_back({static_cast<int>(k), {b, e}, std::move(m)});
                }
            }
        }
        shell_start_.push_back(entries_.size());
    }
}

Word WordTable::word(std::size_t k) const {
    std::vector<Letter> l;
    for (int cur = static_cast<int>(k); cur > 0; cur = entries_[static_cast<std::size_t>(cur)].parent)
        l.push_back(entries_[static_cast<std::size_t>(cur)].last);
    return Word(std::move(l));
}

const ProjectiveMatrix& WordTable::letter_matrix(const Letter& l) const {
    const auto& v = l.exponent > 0 ? gens_ : invs_;
    return v.at(static_cast<std::size_t>(l.basis));
}

std::shared_ptr<const WordTable> word_table(const GroupData& g, int max_length) {
    // Tables are keyed by the basis matrices' rendering, which identifies the group.
    static std::mutex mu;
    static std::map<std::string, std::shared_ptr<const WordTable>> cache;
    std::string key = std::to_string(g.spec.q) + "/" + std::to_string(g.spec.precision);
    for (const auto& b : g.basis) key += b.matrix.to_string();
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end() && it->second->max_length() >= max_length) return it->second;
    }
    auto table = std::make_shared<const WordTable>(g, max_length);
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[key];
    if (!slot || slot->max_length() < max_length) slot = table;
    return slot;
}

PingPongReport ping_pong_check(const GroupData& g) {
    PingPongReport rep;
    for (const auto& b : g.basis) {
        for (int e : {1, -1}) {
            const ProjectiveMatrix m = e > 0 ? b.matrix : b.matrix.inverse();
            auto u = m.unimodular();
            if (!u) throw DomainError("cannot normalize " + b.name + " to determinant 1");
            if (u->c().is_zero()) throw DomainError("infinity inside a disk, re-normalize configuration");
            rep.disks.push_back({b.name + (e > 0 ? "" : "^-1"), P1Point(-(u->d() / u->c())), -u->c().valuation()});
        }
    }
    rep.pass = true;
    for (std::size_t i = 0; i < rep.disks.size(); ++i) {
        for (std::size_t j = i + 1; j < rep.disks.size(); ++j) {
            const auto& x = rep.disks[i];
            const auto& y = rep.disks[j];
            const std::int64_t dist = point_agreement(x.center, y.center);
            if (dist >= std::min(x.radius_exponent, y.radius_exponent)) {
                rep.pass = false;
                rep.overlaps.push_back(x.element + " / " + y.element);
            }
        }
    }
    return rep;
}

bool check_conjugation_product(const GroupData& g) {
    for (const auto& b : g.basis) {
        SigmaWord w;
        for (int k = 0; k < g.p; ++k) {
            w.push_back({0, k});
            w.insert(w.end(), b.sigma_word.begin(), b.sigma_word.end());
            w.push_back({0, -k});
        }
        for (int x : rewrite_to_basis(g, w).abelianize(g.rank))
            if (x != 0) return false;
    }
    return true;
}

}  // namespace mumford
