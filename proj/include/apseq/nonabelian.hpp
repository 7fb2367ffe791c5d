#pragma once

#include <concepts>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "apseq/error.hpp"

namespace apseq {

/// r^rotation s^flip in the dihedral group D_n of order 2n, with s r = r^-1 s.
struct DihedralElement {
    std::int64_t n = 1;
    std::int64_t rotation = 0;
    int flip = 0;

    bool operator==(const DihedralElement&) const = default;
};

DihedralElement mul(const DihedralElement& x, const DihedralElement& y);
DihedralElement inverse(const DihedralElement& x);
DihedralElement identity_like(const DihedralElement& x);
bool same_group(const DihedralElement& x, const DihedralElement& y);
std::string to_string(const DihedralElement& x);

/// All 2n elements of D_n: rotations first, then reflections.
std::vector<DihedralElement> dihedral_elements(std::int64_t n);
std::size_t dihedral_index(const DihedralElement& x);

/// Reduced word in the free group on generators 1 = a, 2 = b. Letters are
/// (generator, exponent +-1) with no adjacent inverse pair.
class FreeWord {
public:
    using Letter = std::pair<int, int>;

    FreeWord() = default;
    explicit FreeWord(std::vector<Letter> letters);
    /// Parses e.g. "a", "b^2a", "a^-1b^-1", "e" for the empty word.
    static FreeWord parse(std::string_view text);
    static FreeWord generator(int g, int exponent = 1);

    const std::vector<Letter>& letters() const { return letters_; }
    std::size_t length() const { return letters_.size(); }

    bool operator==(const FreeWord&) const = default;

private:
    std::vector<Letter> letters_;
};

FreeWord mul(const FreeWord& x, const FreeWord& y);
FreeWord inverse(const FreeWord& x);
FreeWord identity_like(const FreeWord& x);
bool same_group(const FreeWord& x, const FreeWord& y);
std::string to_string(const FreeWord& x);

/// Z/nZ written multiplicatively, for cross-checks against the additive
/// progression predicate.
struct CyclicMul {
    std::int64_t n = 1;
    std::int64_t value = 0;

    bool operator==(const CyclicMul&) const = default;
};

CyclicMul mul(const CyclicMul& x, const CyclicMul& y);
CyclicMul inverse(const CyclicMul& x);
CyclicMul identity_like(const CyclicMul& x);
bool same_group(const CyclicMul& x, const CyclicMul& y);
std::string to_string(const CyclicMul& x);

template <class G>
concept GroupElement = std::equality_comparable<G> && requires(const G& x, const G& y) {
    { mul(x, y) } -> std::same_as<G>;
    { inverse(x) } -> std::same_as<G>;
    { identity_like(x) } -> std::same_as<G>;
    { same_group(x, y) } -> std::same_as<bool>;
};

namespace detail {

template <GroupElement G, class Step>
bool constant_nontrivial_step(std::span<const G> seq, Step step) {
    require(seq.size() >= 2, "a progression test needs at least two terms");
    for (const auto& x : seq) require(same_group(seq[0], x), "sequence mixes elements of different groups");
    const G r = step(seq[0], seq[1]);
    if (r == identity_like(r)) return false;
    for (std::size_t i = 1; i + 1 < seq.size(); ++i) {
        if (!(step(seq[i], seq[i + 1]) == r)) return false;
    }
    return true;
}

}  // namespace detail

/// (a, ra, r^2 a, ...): s_{i+1} s_i^-1 constant and not the identity.
template <GroupElement G>
bool is_left_ap(std::span<const G> seq) {
    return detail::constant_nontrivial_step(seq, [](const G& x, const G& y) { return mul(y, inverse(x)); });
}

/// (a, ar, ar^2, ...): s_i^-1 s_{i+1} constant and not the identity.
template <GroupElement G>
bool is_right_ap(std::span<const G> seq) {
    return detail::constant_nontrivial_step(seq, [](const G& x, const G& y) { return mul(inverse(x), y); });
}

template <GroupElement G>
std::vector<G> invert_sequence(std::span<const G> seq) {
    std::vector<G> out;
    out.reserve(seq.size());
    for (const auto& x : seq) out.push_back(inverse(x));
    return out;
}

/// Injective k-sequences of D_n that are left (resp. right) progressions
/// with nonidentity step. Requires 2 <= k <= 2n and 2n <= 200.
std::uint64_t left_ap_count(std::int64_t n, std::int64_t k);
std::uint64_t right_ap_count(std::int64_t n, std::int64_t k);

/// Checks that inversion carries left progressions onto right ones and back
/// for every injective progression k-sequence of D_n.
bool inversion_bijection_on_progressions(std::int64_t n, std::int64_t k);

/// Checks is_left_ap(T) == is_right_ap(invert_sequence(T)) for every
/// sequence T over D_n of length 2..max_len (with repetition).
bool inversion_bijection_exhaustive(std::int64_t n, std::int64_t max_len);

}  // namespace apseq
