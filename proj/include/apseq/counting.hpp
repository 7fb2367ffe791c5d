#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "apseq/groups.hpp"
#include "apseq/limits.hpp"

namespace apseq {

enum class CountMethod { ClosedForm, BruteForce, BoundsOnly };

std::string_view method_name(CountMethod m);

/// Exact count and/or bounds on the number of progression k-orderings.
/// Invariant: lower <= exact <= upper when exact is present.
struct CountResult {
    std::optional<std::uint64_t> exact;
    std::uint64_t lower = 0;
    std::uint64_t upper = 0;
    CountMethod method = CountMethod::ClosedForm;

    static CountResult exactly(std::uint64_t v, CountMethod m) { return {v, v, v, m}; }
};

/// A progression (base, base + step, ..., base + (length-1) step).
struct APSpec {
    Element base;
    Element step;
    std::int64_t length = 0;
};

/// P_{nk}: k-orderings of [1,n] forming a nontrivial progression.
/// Uses the summation form 2nm - (k-1)(m^2 + m), m = floor((n-1)/(k-1)).
/// k = 1 returns n (one singleton per element).
CountResult count_interval(std::int64_t n, std::int64_t k);

/// Two-sided bound on P_{nk} from the fractional-part identity:
///   (n-k+2)(n-1)/(k-1) - k + 1  <=  P_{nk}  <=  (n-k+2)(n-1)/(k-1) + k - 3,
/// rounded outward to integers and with the lower end clamped at 0.
CountResult bounds_interval(std::int64_t n, std::int64_t k);

/// P_{nkd} = (P_{nk} + n)^d - n^d for the box [1,n]^d. Overflow throws.
CountResult count_lattice(std::int64_t n, std::int64_t k, int d);

/// Q_{nk} for Z/nZ: n for k = 1, 0 for k > n, otherwise
/// n (n - sum_{j<k, j|n} phi(j)).
CountResult count_cyclic(std::int64_t n, std::int64_t k);

enum class OrderCounting { Auto, Iterate, Divisors };

/// Number of elements of a group family whose order is at least k.
std::uint64_t elements_with_order_at_least(const AdditiveSetSpec& group, std::int64_t k,
                                           OrderCounting how = OrderCounting::Auto);

/// Q_k(Z) = |Z| * #{r : ord(r) >= k} for any finite abelian group family.
CountResult count_abelian_exact(const AdditiveSetSpec& group, std::int64_t k,
                                OrderCounting how = OrderCounting::Auto);

/// Bounds for a general finite abelian group with invariant factors
/// n_1 | ... | n_d, with j the first index having k <= n_j:
///   lower = (prod_{i<j} n_i)(prod_{i>=j} Q_{n_i,k})
///   upper = n prod_{i>=j} n_i - n
CountResult bounds_abelian(const AdditiveSetSpec& group, std::int64_t k);

/// Closed-form exact count for any family (interval, lattice or group).
CountResult count_closed_form(const AdditiveSetSpec& set, std::int64_t k);

/// Naive oracle: tries every (base, step) candidate pair, walks the terms
/// and checks membership and distinctness directly.
CountResult brute_force_count(const AdditiveSetSpec& set, std::int64_t k, const Limits& limits = {});

/// Same oracle, all lengths at once: result[k] for 0 <= k <= max_k.
std::vector<std::uint64_t> brute_force_profile(const AdditiveSetSpec& set, std::int64_t max_k,
                                               const Limits& limits = {});

/// Visits every valid progression k-ordering of the set exactly once.
/// `terms` holds canonical indices of the k terms in progression order.
using ProgressionVisitor =
    std::function<void(std::uint64_t base, const Element& step, std::span<const std::uint32_t> terms)>;
std::uint64_t for_each_progression(const AdditiveSetSpec& set, std::int64_t k, const ProgressionVisitor& visit,
                                   const Limits& limits = {});

/// All progression k-orderings, flattened: terms[i*k .. i*k+k) is one.
struct ProgressionList {
    std::int64_t k = 0;
    std::vector<std::uint32_t> terms;

    std::uint64_t size() const { return k ? terms.size() / static_cast<std::uint64_t>(k) : 0; }
};
ProgressionList list_progressions(const AdditiveSetSpec& set, std::int64_t k, const Limits& limits = {});

/// Lower-bound sanity check against the totient-sum asymptotic
///   n^2 - (3/pi^2) n (k-1)^2 <= Q_{nk} + n k log(k+2)^2.
/// The error term is only asymptotic, so a failure is a warning.
struct WalfiszCheck {
    double lhs = 0;
    double count = 0;
    double slack = 0;
    bool ok = true;
};
WalfiszCheck walfisz_diagnostic(std::int64_t n, std::int64_t k);

}  // namespace apseq
