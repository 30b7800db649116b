#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mumford/moebius.hpp"

namespace mumford {

struct SigmaLetter {
    int generator;  // 0..s
    int exponent;
};
using SigmaWord = std::vector<SigmaLetter>;

struct Letter {
    int basis;     // flattened index into GroupData::basis
    int exponent;  // +1 or -1
    bool operator==(const Letter&) const = default;
};

class Word {
public:
    Word() = default;
    explicit Word(std::vector<Letter> letters);
    static Word letter(int basis, int exponent) { return Word({{basis, exponent}}); }

    const std::vector<Letter>& letters() const { return letters_; }
    std::size_t length() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    Word inverse() const;
    // Exponent sums per basis element.
    std::vector<int> abelianize(int rank) const;
    std::string to_string(const std::vector<std::string>& names) const;

    friend Word operator*(const Word& x, const Word& y);
    bool operator==(const Word&) const = default;

private:
    void reduce();
    std::vector<Letter> letters_;
};

struct BasisElement {
    int j = 0;  // generator index 1..s
    int i = 0;  // conjugation level 1..p-1
    std::string name;
    SigmaWord sigma_word;
    ProjectiveMatrix matrix;
};

struct GeneratorData {
    ProjectiveMatrix matrix;
    P1Point o, e;
    int nu = 0;
    ProjectiveMatrix upsilon;  // o -> 0, e -> infinity
};

struct GroupData {
    FieldSpec spec;
    const Field* field = nullptr;
    int p = 2;
    PadicNumber zeta;
    std::vector<GeneratorData> generators;  // sigma_0..sigma_s
    std::vector<BasisElement> basis;
    int rank = 0;

    int s() const { return static_cast<int>(generators.size()) - 1; }
    int basis_index(int j, int i) const { return (j - 1) * (p - 1) + (i - 1); }
    std::vector<std::string> basis_names() const;
    ProjectiveMatrix matrix_of(const Word& w) const;
    ProjectiveMatrix matrix_of(const SigmaWord& w) const;
};

GroupData build_group(const FieldSpec& spec, const std::vector<ProjectiveMatrix>& sigma);
GroupData conjugate_group(const GroupData& g, const ProjectiveMatrix& mu);

Word rewrite_to_basis(const GroupData& g, const SigmaWord& w);
SigmaWord sigma_word_of(const Word& w, const GroupData& g);

// Every reduced word up to a length bound, grouped by length, with matrices.
class WordTable {
public:
    struct Entry {
        int parent;   // word with the first letter removed, -1 for the identity
        Letter last;  // prepended letter (unused for the identity)
        ProjectiveMatrix matrix;
    };

    WordTable(const GroupData& g, int max_length);
    int max_length() const { return static_cast<int>(shell_start_.size()) - 2; }
    std::size_t size() const { return entries_.size(); }
    const Entry& entry(std::size_t k) const { return entries_[k]; }
    std::size_t shell_begin(int length) const { return shell_start_[static_cast<std::size_t>(length)]; }
    std::size_t shell_end(int length) const { return shell_start_[static_cast<std::size_t>(length) + 1]; }
    Word word(std::size_t k) const;
    const ProjectiveMatrix& letter_matrix(const Letter& l) const;

private:
    std::vector<ProjectiveMatrix> gens_, invs_;
    std::vector<Entry> entries_;
    std::vector<std::size_t> shell_start_;
};

std::shared_ptr<const WordTable> word_table(const GroupData& g, int max_length);

struct DiskInfo {
    std::string element;
    P1Point center;
    std::int64_t radius_exponent;  // disk is { z : v(z - center) >= radius_exponent }
};

struct PingPongReport {
    bool pass = false;
    std::vector<DiskInfo> disks;
    std::vector<std::string> overlaps;
};

PingPongReport ping_pong_check(const GroupData& g);

// Abelianization check: prod_k sigma_0^k gamma sigma_0^-k is a commutator for every basis gamma.
bool check_conjugation_product(const GroupData& g);

}  // namespace mumford
