#include "apseq/las.hpp"

#include <limits>
#include <tuple>

#include "apseq/error.hpp"

namespace apseq {

Ordering::Ordering(AdditiveSetSpec set, std::vector<std::uint32_t> seq)
    : set_(std::move(set)), seq_(std::move(seq)) {
    if (seq_.size() != set_.size()) {
        throw InvalidArgument("ordering of " + set_.to_string() + " must list " + std::to_string(set_.size()) +
                              " elements, got " + std::to_string(seq_.size()));
    }
    constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
    pos_.assign(seq_.size(), unset);
    for (std::size_t i = 0; i < seq_.size(); ++i) {
        const auto x = seq_[i];
        if (x >= seq_.size()) {
            throw InvalidArgument("index " + std::to_string(x) + " out of range for " + set_.to_string());
        }
        if (pos_[x] != unset) throw InvalidArgument("index " + std::to_string(x) + " repeated in ordering");
        pos_[x] = static_cast<std::uint32_t>(i);
    }
}

Ordering Ordering::from_elements(const AdditiveSetSpec& set, const std::vector<Element>& elems) {
    std::vector<std::uint32_t> seq;
    seq.reserve(elems.size());
    for (const auto& e : elems) seq.push_back(static_cast<std::uint32_t>(canonical_index(set, e)));
    return Ordering(set, std::move(seq));
}

Ordering Ordering::identity(const AdditiveSetSpec& set) {
    std::vector<std::uint32_t> seq(set.size());
    for (std::size_t i = 0; i < seq.size(); ++i) seq[i] = static_cast<std::uint32_t>(i);
    return Ordering(set, std::move(seq));
}

Ordering Ordering::reversed() const {
    return Ordering(set_, std::vector<std::uint32_t>(seq_.rbegin(), seq_.rend()));
}

std::uint64_t step_key(const AdditiveSetSpec& set, const Element& step) {
    if (set.is_group()) return canonical_index(set, add(set, step, set.identity()));
    const std::int64_t n = set.n();
    std::uint64_t key = 0;
    for (auto c : step.coords) {
        require(c > -n && c < n, "interval step " + to_string(step) + " has no progression of length 2");
        key = key * static_cast<std::uint64_t>(2 * n - 1) + static_cast<std::uint64_t>(c + n - 1);
    }
    return key;
}

namespace {

LasResult singleton_result(const Ordering& ordering) {
    LasResult r;
    r.length = 1;
    r.witness = {ordering.element(0), ordering.set().identity(), 1};
    r.positions = {0};
    return r;
}

void fill_positions(const Ordering& ordering, LasResult& r) {
    const auto& set = ordering.set();
    r.positions.clear();
    Element term = r.witness.base;
    for (std::uint64_t i = 0; i < r.length; ++i) {
        r.positions.push_back(ordering.positions()[canonical_index(set, term)]);
        term = add(set, term, r.witness.step);
    }
}

// Keeps the longest candidate, ties broken by (base index, step key).
struct BestTracker {
    std::uint64_t length = 0;
    std::uint64_t base = 0;
    std::uint64_t step = 0;

    bool improves(std::uint64_t len) const { return len >= length; }
    void offer(std::uint64_t len, std::uint64_t b, std::uint64_t s) {
        if (len > length || std::tie(b, s) < std::tie(base, step)) {
            length = len;
            base = b;
            step = s;
        }
    }
};

}  // namespace

LasResult longest_ap_orbitwalk(const Ordering& ordering, const Limits& limits) {
    const auto& set = ordering.set();
    if (!set.is_group()) {
        throw InvalidArgument("orbit-walk needs a group family; use the pair DP for " + set.to_string());
    }
    const std::uint64_t n = set.size();
    if (n > limits.orbitwalk_max) {
        throw BudgetExceeded("orbit-walk is capped at |A| <= " + std::to_string(limits.orbitwalk_max));
    }
    if (n == 1) return singleton_result(ordering);

    const auto pos = ordering.positions();
    BestTracker best;
    std::vector<std::uint64_t> stamp(n, 0);
    std::vector<std::uint32_t> cycle;
    for (std::uint64_t s = 1; s < n; ++s) {
        const auto shift = translation_table(set, element_at(set, s));
        for (std::uint64_t x = 0; x < n; ++x) {
            if (stamp[x] == s) continue;
            cycle.clear();
            std::uint64_t c = x;
            do {
                cycle.push_back(static_cast<std::uint32_t>(c));
                stamp[c] = s;
                c = static_cast<std::uint64_t>(shift[c]);
            } while (c != x);
            const std::size_t len = cycle.size();
            // Start right after a descent so no run wraps past the start.
            std::size_t start = 0;
            while (pos[cycle[(start + len - 1) % len]] < pos[cycle[start]]) ++start;
            std::uint64_t run = 0;
            for (std::size_t i = 0; i < len; ++i) {
                const std::size_t at = (start + i) % len;
                const auto prev = cycle[(at + len - 1) % len];
                run = (i > 0 && pos[prev] < pos[cycle[at]]) ? run + 1 : 1;
                if (best.improves(run)) {
                    const auto base = cycle[(at + len - (run - 1) % len) % len];
                    best.offer(run, base, s);
                }
            }
        }
    }

    LasResult r;
    r.length = best.length;
    r.witness = {element_at(set, best.base), element_at(set, best.step), static_cast<std::int64_t>(best.length)};
    fill_positions(ordering, r);
    return r;
}

LasResult longest_ap_pairdp(const Ordering& ordering, const Limits& limits) {
    const auto& set = ordering.set();
    const std::uint64_t n = set.size();
    if (n > limits.pairdp_max || n > std::numeric_limits<std::uint16_t>::max()) {
        throw BudgetExceeded("pair DP is capped at |A| <= " + std::to_string(limits.pairdp_max));
    }
    if (n == 1) return singleton_result(ordering);

    const int d = set.dim();
    const bool group = set.is_group();
    std::vector<std::int64_t> radix(d);
    for (int i = 0; i < d; ++i) radix[i] = group ? set.factors()[i] : set.n();
    // Zero-based digits of every element, by canonical index.
    std::vector<std::int64_t> digits(n * d);
    for (std::uint64_t x = 0; x < n; ++x) {
        auto e = element_at(set, x);
        for (int i = 0; i < d; ++i) digits[x * d + i] = group ? e.coords[i] : e.coords[i] - 1;
    }

    const auto seq = ordering.seq();
    const auto pos = ordering.positions();
    std::vector<std::uint16_t> dp(n * (n - 1) / 2);
    auto cell = [](std::uint64_t i, std::uint64_t j) { return j * (j - 1) / 2 + i; };

    BestTracker best;
    std::vector<std::int64_t> diff(d);
    for (std::uint64_t j = 1; j < n; ++j) {
        const std::int64_t* y = &digits[seq[j] * d];
        for (std::uint64_t i = 0; i < j; ++i) {
            const std::int64_t* x = &digits[seq[i] * d];
            // predecessor 2x - y
            std::int64_t pred = 0;
            bool inside = true;
            for (int t = 0; t < d; ++t) {
                std::int64_t c = 2 * x[t] - y[t];
                if (group) {
                    c %= radix[t];
                    if (c < 0) c += radix[t];
                } else if (c < 0 || c >= radix[t]) {
                    inside = false;
                    break;
                }
                pred = pred * radix[t] + c;
            }
            std::uint64_t len = 2;
            if (inside && pos[pred] < i) len = dp[cell(pos[pred], i)] + 1u;
            dp[cell(i, j)] = static_cast<std::uint16_t>(len);
            if (!best.improves(len)) continue;

            std::uint64_t base = 0, key = 0;
            for (int t = 0; t < d; ++t) {
                diff[t] = y[t] - x[t];
                std::int64_t b = y[t] - static_cast<std::int64_t>(len - 1) * diff[t];
                if (group) {
                    b %= radix[t];
                    if (b < 0) b += radix[t];
                    diff[t] = (diff[t] + radix[t]) % radix[t];
                    key = key * radix[t] + diff[t];
                } else {
                    key = key * (2 * radix[t] - 1) + (diff[t] + radix[t] - 1);
                }
                base = base * radix[t] + b;
            }
            best.offer(len, base, key);
        }
    }

    LasResult r;
    r.length = best.length;
    Element step{std::vector<std::int64_t>(d)};
    std::uint64_t key = best.step;
    for (int t = d - 1; t >= 0; --t) {
        const std::int64_t span = group ? radix[t] : 2 * radix[t] - 1;
        const auto digit = static_cast<std::int64_t>(key % span);
        key /= span;
        step.coords[t] = group ? digit : digit - (radix[t] - 1);
    }
    r.witness = {element_at(set, best.base), step, static_cast<std::int64_t>(best.length)};
    fill_positions(ordering, r);
    return r;
}

LasResult longest_ap(const Ordering& ordering, const Limits& limits) {
    return ordering.set().is_group() ? longest_ap_orbitwalk(ordering, limits) : longest_ap_pairdp(ordering, limits);
}

bool verify_witness(const Ordering& ordering, const LasResult& result) {
    const auto& set = ordering.set();
    if (result.length == 0 || result.positions.size() != result.length) return false;
    if (result.witness.length != static_cast<std::int64_t>(result.length)) return false;
    if (result.length > 1 && result.witness.step == set.identity()) return false;
    Element term = result.witness.base;
    for (std::size_t i = 0; i < result.length; ++i) {
        if (!set.contains(term)) return false;
        const auto p = result.positions[i];
        if (p >= ordering.size() || ordering.seq()[p] != canonical_index(set, term)) return false;
        if (i > 0 && result.positions[i - 1] >= p) return false;
        term = add(set, term, result.witness.step);
    }
    return true;
}

std::uint64_t count_in_order(const ProgressionList& list, std::span<const std::uint32_t> positions) {
    const auto k = static_cast<std::size_t>(list.k);
    std::uint64_t count = 0;
    for (std::size_t off = 0; off < list.terms.size(); off += k) {
        bool ordered = true;
        for (std::size_t i = 1; i < k && ordered; ++i) {
            ordered = positions[list.terms[off + i - 1]] < positions[list.terms[off + i]];
        }
        count += ordered;
    }
    return count;
}

std::uint64_t count_k_subsequences(const Ordering& ordering, std::int64_t k, const Limits& limits) {
    require(k >= 2 && static_cast<std::uint64_t>(k) <= ordering.size(),
            "N_k requires 2 <= k <= |A|");
    return count_in_order(list_progressions(ordering.set(), k, limits), ordering.positions());
}

}  // namespace apseq
