#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "apseq/limits.hpp"

namespace apseq {

enum class Family { IntervalBox, Cyclic, Abelian, ElementaryP };

std::string_view family_name(Family f);

/// A point of the ambient group: a coordinate vector. For the interval box
/// the ambient group is the integer lattice and coordinates are unbounded;
/// for the group families coordinate i lives in [0, factor_i - 1].
struct Element {
    std::vector<std::int64_t> coords;

    Element() = default;
    explicit Element(std::vector<std::int64_t> c) : coords(std::move(c)) {}
    Element(std::initializer_list<std::int64_t> c) : coords(c) {}

    std::size_t dim() const { return coords.size(); }
    bool operator==(const Element&) const = default;
    auto operator<=>(const Element&) const = default;
};

std::string to_string(const Element& x);

/// Describes the finite additive set under study. Immutable once built; all
/// factories validate and throw `InvalidArgument` / `BudgetExceeded`.
class AdditiveSetSpec {
public:
    /// [1,n]^d inside Z^d.
    static AdditiveSetSpec interval(std::int64_t n, int d = 1, const Limits& limits = {});
    /// Z/nZ.
    static AdditiveSetSpec cyclic(std::int64_t n, const Limits& limits = {});
    /// Z/n_1 x ... x Z/n_d with n_1 | n_2 | ... | n_d, each n_i >= 2.
    static AdditiveSetSpec abelian(std::vector<std::int64_t> factors, const Limits& limits = {});
    /// (Z/pZ)^d, p prime.
    static AdditiveSetSpec elementary(std::int64_t p, int d, const Limits& limits = {});

    /// Parses `interval:n[,d]`, `cyclic:n`, `abelian:n1xn2x...`,
    /// `elementary:p^d`. Abelian factor lists that are not already a
    /// divisibility chain are normalized to their invariant factors.
    static AdditiveSetSpec parse(std::string_view text, const Limits& limits = {});

    Family family() const { return family_; }
    bool is_group() const { return family_ != Family::IntervalBox; }

    /// Side length (interval), modulus (cyclic), |A| otherwise.
    std::int64_t n() const;
    int dim() const { return dim_; }
    /// Prime base of an elementary p-group; 0 for other families.
    std::int64_t p() const { return p_; }
    /// Per-coordinate moduli of a group family (empty for the interval box).
    const std::vector<std::int64_t>& factors() const { return factors_; }
    /// Largest invariant factor (group exponent). Group families only.
    std::int64_t exponent() const;

    std::uint64_t size() const { return size_; }

    /// Canonical textual form; `parse(to_string())` reproduces the spec.
    std::string to_string() const;

    bool contains(const Element& x) const;
    /// All-zero vector (for the interval box it lies outside the box).
    Element identity() const { return Element(std::vector<std::int64_t>(dim_, 0)); }

    bool operator==(const AdditiveSetSpec&) const = default;

private:
    AdditiveSetSpec() = default;

    Family family_ = Family::Cyclic;
    std::int64_t side_ = 1;
    int dim_ = 1;
    std::int64_t p_ = 0;
    std::vector<std::int64_t> factors_;
    std::uint64_t size_ = 1;
};

Element add(const AdditiveSetSpec& set, const Element& x, const Element& y);
Element negate(const AdditiveSetSpec& set, const Element& x);
Element subtract(const AdditiveSetSpec& set, const Element& x, const Element& y);
/// Iterated sum m*x; m may be negative.
Element scalar_mul(const AdditiveSetSpec& set, std::int64_t m, const Element& x);
/// Smallest positive m with m*x = 0. Rejected for the interval box.
std::uint64_t element_order(const AdditiveSetSpec& set, const Element& x);

/// Row-major mixed-radix bijection between the set and [0, |A|).
std::uint64_t canonical_index(const AdditiveSetSpec& set, const Element& x);
Element element_at(const AdditiveSetSpec& set, std::uint64_t index);

/// table[i] = canonical index of element_at(i) + delta, or -1 when the sum
/// leaves the set (interval box only).
std::vector<std::int64_t> translation_table(const AdditiveSetSpec& set, const Element& delta);

// Number theory helpers. Inputs stay desk-scale, so trial division is used.

std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t m);
bool is_prime(std::uint64_t m);
std::uint64_t totient(std::uint64_t m);
int mobius(std::uint64_t m);
/// Sorted ascending.
std::vector<std::uint64_t> divisors(std::uint64_t m);

/// Invariant-factor chain of the product of the given cyclic groups, via
/// prime-power redistribution (largest powers go to the last factor).
std::vector<std::int64_t> normalize_invariant_factors(const std::vector<std::int64_t>& factors);

}  // namespace apseq
