#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "apseq/counting.hpp"
#include "apseq/groups.hpp"
#include "apseq/limits.hpp"

namespace apseq {

/// A listing of every element of a set exactly once, stored as canonical
/// indices. Construction validates the bijection.
class Ordering {
public:
    Ordering(AdditiveSetSpec set, std::vector<std::uint32_t> seq);

    static Ordering from_elements(const AdditiveSetSpec& set, const std::vector<Element>& elems);
    static Ordering identity(const AdditiveSetSpec& set);

    const AdditiveSetSpec& set() const { return set_; }
    std::span<const std::uint32_t> seq() const { return seq_; }
    /// position(x) = i such that seq()[i] == x.
    std::span<const std::uint32_t> positions() const { return pos_; }
    std::size_t size() const { return seq_.size(); }
    Element element(std::size_t i) const { return element_at(set_, seq_[i]); }

    Ordering reversed() const;

    bool operator==(const Ordering& o) const { return set_ == o.set_ && seq_ == o.seq_; }

private:
    AdditiveSetSpec set_;
    std::vector<std::uint32_t> seq_;
    std::vector<std::uint32_t> pos_;
};

/// L(sigma) together with one progression realizing it. Among witnesses of
/// maximal length the smallest (base index, step key) is returned.
struct LasResult {
    std::uint64_t length = 0;
    APSpec witness;
    std::vector<std::uint64_t> positions;  // strictly increasing
};

/// Total order on steps used for tie-breaking: the canonical index for
/// group families, a signed mixed-radix offset for the interval box.
std::uint64_t step_key(const AdditiveSetSpec& set, const Element& step);

/// Walks the orbit cycles of x -> x + r for every nonidentity step r and
/// keeps the longest run of consecutive orbit terms with increasing
/// positions. Group families only.
LasResult longest_ap_orbitwalk(const Ordering& ordering, const Limits& limits = {});

/// Dynamic program over position pairs i < j: the progression ending with
/// (seq[i], seq[j]) extends the one ending with (2 seq[i] - seq[j], seq[i]).
/// Works for every family, quadratic time and memory.
LasResult longest_ap_pairdp(const Ordering& ordering, const Limits& limits = {});

/// Orbit-walk for groups, pair-DP for the interval box.
LasResult longest_ap(const Ordering& ordering, const Limits& limits = {});

/// Re-checks that the witness is a nontrivial progression of the stated
/// length sitting at strictly increasing positions.
bool verify_witness(const Ordering& ordering, const LasResult& result);

/// N_k: number of progression k-orderings appearing in order in sigma.
std::uint64_t count_k_subsequences(const Ordering& ordering, std::int64_t k, const Limits& limits = {});

/// Same, against a precomputed progression list (for repeated sampling).
std::uint64_t count_in_order(const ProgressionList& list, std::span<const std::uint32_t> positions);

}  // namespace apseq
