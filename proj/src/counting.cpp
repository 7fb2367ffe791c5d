#include "apseq/counting.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "apseq/error.hpp"
#include "checked.hpp"

namespace apseq {

using detail::add_checked;
using detail::mul_checked;
using detail::pow_checked;

namespace {

void require_group(const AdditiveSetSpec& set, const char* op) {
    if (!set.is_group()) {
        throw InvalidArgument(std::string(op) + " is defined only for group families, not " + set.to_string());
    }
}

// Advances a mixed-radix odometer over [lo_i, hi_i]; false once it wraps.
bool advance(std::vector<std::int64_t>& digits, const std::vector<std::int64_t>& lo,
             const std::vector<std::int64_t>& hi) {
    for (int i = static_cast<int>(digits.size()) - 1; i >= 0; --i) {
        if (++digits[i] <= hi[i]) return true;
        digits[i] = lo[i];
    }
    return false;
}

}  // namespace

std::string_view method_name(CountMethod m) {
    switch (m) {
        case CountMethod::ClosedForm: return "closed";
        case CountMethod::BruteForce: return "brute";
        case CountMethod::BoundsOnly: return "bounds";
    }
    return "?";
}

CountResult count_interval(std::int64_t n, std::int64_t k) {
    require(n >= 1, "interval count requires n >= 1");
    require(k >= 1 && k <= n, "interval count requires 1 <= k <= n");
    if (k == 1) return CountResult::exactly(static_cast<std::uint64_t>(n), CountMethod::ClosedForm);
    const auto un = static_cast<std::uint64_t>(n);
    const auto km1 = static_cast<std::uint64_t>(k - 1);
    const std::uint64_t m = (un - 1) / km1;
    // sum_{r=1}^{m} 2(n - (k-1) r)
    const std::uint64_t total = mul_checked(mul_checked(2, un), m);
    const std::uint64_t sub = mul_checked(km1, add_checked(mul_checked(m, m), m));
    return CountResult::exactly(total - sub, CountMethod::ClosedForm);
}

CountResult bounds_interval(std::int64_t n, std::int64_t k) {
    require(k >= 2 && k <= n, "interval bounds require 2 <= k <= n");
    const __int128 num = static_cast<__int128>(n - k + 2) * (n - 1);
    const __int128 den = k - 1;
    const __int128 fl = num / den;
    const __int128 ce = (num + den - 1) / den;
    __int128 lower = fl - k + 1;
    __int128 upper = ce + k - 3;
    if (lower < 0) lower = 0;
    if (upper < 0) upper = 0;
    CountResult r;
    r.lower = static_cast<std::uint64_t>(lower);
    r.upper = static_cast<std::uint64_t>(upper);
    r.method = CountMethod::BoundsOnly;
    return r;
}

CountResult count_lattice(std::int64_t n, std::int64_t k, int d) {
    require(d >= 1, "lattice count requires d >= 1");
    const auto p = count_interval(n, k);
    const auto un = static_cast<std::uint64_t>(n);
    if (k == 1) return CountResult::exactly(pow_checked(un, d), CountMethod::ClosedForm);
    if (d == 1) return p;
    // Each coordinate projection is a valid progression or one of the n
    // trivial ones; remove the n^d all-trivial combinations.
    const std::uint64_t per_axis = add_checked(*p.exact, un);
    return CountResult::exactly(pow_checked(per_axis, d) - pow_checked(un, d), CountMethod::ClosedForm);
}

CountResult count_cyclic(std::int64_t n, std::int64_t k) {
    require(n >= 1, "cyclic count requires n >= 1");
    require(k >= 1, "cyclic count requires k >= 1");
    const auto un = static_cast<std::uint64_t>(n);
    if (k == 1) return CountResult::exactly(un, CountMethod::ClosedForm);
    if (k > n) return CountResult::exactly(0, CountMethod::ClosedForm);
    std::uint64_t short_orders = 0;
    for (auto j : divisors(un)) {
        if (j >= static_cast<std::uint64_t>(k)) break;
        short_orders += totient(j);
    }
    return CountResult::exactly(mul_checked(un, un - short_orders), CountMethod::ClosedForm);
}

std::uint64_t elements_with_order_at_least(const AdditiveSetSpec& group, std::int64_t k, OrderCounting how) {
    require_group(group, "order counting");
    if (k <= 1) return group.size();
    if (how == OrderCounting::Auto) how = group.size() <= 100'000 ? OrderCounting::Iterate : OrderCounting::Divisors;

    const auto& f = group.factors();
    if (how == OrderCounting::Iterate) {
        std::vector<std::int64_t> digit(f.size(), 0), lo(f.size(), 0), hi(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) hi[i] = f[i] - 1;
        std::uint64_t count = 0;
        do {
            std::uint64_t order = 1;
            for (std::size_t i = 0; i < f.size(); ++i) {
                auto fi = static_cast<std::uint64_t>(f[i]);
                order = std::lcm(order, fi / std::gcd(static_cast<std::uint64_t>(digit[i]), fi));
            }
            if (order >= static_cast<std::uint64_t>(k)) ++count;
        } while (advance(digit, lo, hi));
        return count;
    }

    // #{x : ord(x) | m} = prod_i gcd(m, n_i); Moebius inversion gives the
    // number of elements of order exactly m.
    const auto exp = static_cast<std::uint64_t>(group.exponent());
    const auto divs = divisors(exp);
    std::map<std::uint64_t, std::uint64_t> dividing;
    for (auto m : divs) {
        std::uint64_t c = 1;
        for (auto fi : f) c *= std::gcd(m, static_cast<std::uint64_t>(fi));
        dividing[m] = c;
    }
    std::uint64_t short_orders = 0;
    for (auto m : divs) {
        if (m >= static_cast<std::uint64_t>(k)) break;
        std::int64_t exact = 0;
        for (auto e : divs) {
            if (e > m) break;
            if (m % e == 0) exact += mobius(m / e) * static_cast<std::int64_t>(dividing[e]);
        }
        short_orders += static_cast<std::uint64_t>(exact);
    }
    return group.size() - short_orders;
}

CountResult count_abelian_exact(const AdditiveSetSpec& group, std::int64_t k, OrderCounting how) {
    require_group(group, "count_abelian_exact");
    require(k >= 1, "progression length k must be >= 1");
    if (k == 1) return CountResult::exactly(group.size(), CountMethod::ClosedForm);
    return CountResult::exactly(mul_checked(group.size(), elements_with_order_at_least(group, k, how)),
                                CountMethod::ClosedForm);
}

CountResult bounds_abelian(const AdditiveSetSpec& group, std::int64_t k) {
    require_group(group, "bounds_abelian");
    require(k >= 2, "bounds_abelian requires k >= 2");
    const auto& f = group.factors();
    std::size_t j = 0;
    while (j < f.size() && k > f[j]) ++j;
    if (j == f.size()) {
        throw InvalidArgument("bounds_abelian requires k <= n_d (the largest invariant factor)");
    }
    const std::uint64_t n = group.size();
    std::uint64_t tail = 1;
    std::uint64_t lower = 1;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto fi = static_cast<std::uint64_t>(f[i]);
        if (i < j) {
            lower = mul_checked(lower, fi);
        } else {
            tail = mul_checked(tail, fi);
            lower = mul_checked(lower, *count_cyclic(f[i], k).exact);
        }
    }
    CountResult r;
    r.lower = lower;
    r.upper = mul_checked(n, tail) - n;
    r.method = CountMethod::BoundsOnly;
    return r;
}

CountResult count_closed_form(const AdditiveSetSpec& set, std::int64_t k) {
    switch (set.family()) {
        case Family::IntervalBox:
            if (k > set.n()) return CountResult::exactly(0, CountMethod::ClosedForm);
            return set.dim() == 1 ? count_interval(set.n(), k) : count_lattice(set.n(), k, set.dim());
        case Family::Cyclic: return count_cyclic(set.n(), k);
        case Family::Abelian:
        case Family::ElementaryP: return count_abelian_exact(set, k);
    }
    throw InternalError("unknown family");
}

std::vector<std::uint64_t> brute_force_profile(const AdditiveSetSpec& set, std::int64_t max_k,
                                               const Limits& limits) {
    require(max_k >= 1, "brute force requires k >= 1");
    if (set.is_group()) {
        if (set.size() > limits.brute_force_group_order) {
            throw BudgetExceeded("brute force is capped at |A| <= " + std::to_string(limits.brute_force_group_order));
        }
    } else if (set.n() > limits.brute_force_interval_n || set.dim() > limits.brute_force_interval_d) {
        throw BudgetExceeded("brute force over an interval box is capped at n <= " +
                             std::to_string(limits.brute_force_interval_n) +
                             ", d <= " + std::to_string(limits.brute_force_interval_d));
    }

    const int d = set.dim();
    const bool group = set.is_group();
    std::vector<std::int64_t> radix(d);
    for (int i = 0; i < d; ++i) radix[i] = group ? set.factors()[i] : set.n();

    auto index_of = [&](const std::vector<std::int64_t>& c) {
        std::uint64_t idx = 0;
        for (int i = 0; i < d; ++i) idx = idx * radix[i] + static_cast<std::uint64_t>(group ? c[i] : c[i] - 1);
        return idx;
    };
    auto inside = [&](const std::vector<std::int64_t>& c) {
        for (int i = 0; i < d; ++i) {
            if (group ? (c[i] < 0 || c[i] >= radix[i]) : (c[i] < 1 || c[i] > radix[i])) return false;
        }
        return true;
    };

    // Candidate steps: every nonzero group element, or every nonzero lattice
    // vector small enough to keep two terms inside the box.
    std::vector<std::int64_t> step_lo(d), step_hi(d), base_lo(d), base_hi(d);
    for (int i = 0; i < d; ++i) {
        step_lo[i] = group ? 0 : -(radix[i] - 1);
        step_hi[i] = radix[i] - 1;
        base_lo[i] = group ? 0 : 1;
        base_hi[i] = group ? radix[i] - 1 : radix[i];
    }

    std::vector<std::uint64_t> counts(static_cast<std::size_t>(max_k) + 1, 0);
    std::vector<std::uint8_t> seen(set.size(), 0);
    std::vector<std::uint64_t> touched;
    std::vector<std::int64_t> base = base_lo, term(d);
    do {
        counts[1] += 1;
        std::vector<std::int64_t> step = step_lo;
        do {
            bool zero = true;
            for (auto s : step) zero = zero && s == 0;
            if (zero) continue;
            term = base;
            touched.assign(1, index_of(base));
            seen[touched[0]] = 1;
            for (std::int64_t len = 2; len <= max_k; ++len) {
                for (int i = 0; i < d; ++i) {
                    term[i] += step[i];
                    if (group) term[i] %= radix[i];
                }
                if (!inside(term)) break;
                const auto idx = index_of(term);
                if (seen[idx]) break;
                seen[idx] = 1;
                touched.push_back(idx);
                counts[len] += 1;
            }
            for (auto t : touched) seen[t] = 0;
        } while (advance(step, step_lo, step_hi));
    } while (advance(base, base_lo, base_hi));
    return counts;
}

CountResult brute_force_count(const AdditiveSetSpec& set, std::int64_t k, const Limits& limits) {
    require(k >= 1, "progression length k must be >= 1");
    if (static_cast<std::uint64_t>(k) > set.size()) return CountResult::exactly(0, CountMethod::BruteForce);
    auto profile = brute_force_profile(set, k, limits);
    return CountResult::exactly(profile[k], CountMethod::BruteForce);
}

std::uint64_t for_each_progression(const AdditiveSetSpec& set, std::int64_t k, const ProgressionVisitor& visit,
                                   const Limits& limits) {
    require(k >= 1, "progression length k must be >= 1");
    if (static_cast<std::uint64_t>(k) > set.size()) return 0;
    const auto expected = count_closed_form(set, k);
    if (*expected.exact > limits.progression_cap) {
        throw BudgetExceeded("progression enumeration of " + std::to_string(*expected.exact) +
                             " items exceeds the cap of " + std::to_string(limits.progression_cap));
    }

    std::vector<std::uint32_t> terms(static_cast<std::size_t>(k));
    std::uint64_t visited = 0;
    if (k == 1) {
        const auto zero = set.identity();
        for (std::uint64_t a = 0; a < set.size(); ++a) {
            terms[0] = static_cast<std::uint32_t>(a);
            visit(a, zero, terms);
            ++visited;
        }
        return visited;
    }

    auto walk = [&](const Element& step) {
        const auto shift = translation_table(set, step);
        for (std::uint64_t a = 0; a < set.size(); ++a) {
            std::int64_t cur = static_cast<std::int64_t>(a);
            bool ok = true;
            for (std::int64_t i = 0; i < k; ++i) {
                if (cur < 0) {
                    ok = false;
                    break;
                }
                terms[i] = static_cast<std::uint32_t>(cur);
                if (i + 1 < k) cur = shift[cur];
            }
            if (!ok) continue;
            visit(a, step, terms);
            ++visited;
        }
    };

    if (set.is_group()) {
        // Injective iff the step's order is at least k.
        for (std::uint64_t s = 1; s < set.size(); ++s) {
            auto step = element_at(set, s);
            if (element_order(set, step) >= static_cast<std::uint64_t>(k)) walk(step);
        }
    } else {
        const std::int64_t reach = (set.n() - 1) / (k - 1);
        const int d = set.dim();
        std::vector<std::int64_t> lo(d, -reach), hi(d, reach), step = lo;
        do {
            bool zero = true;
            for (auto s : step) zero = zero && s == 0;
            if (!zero) walk(Element(step));
        } while (advance(step, lo, hi));
    }
    if (visited != *expected.exact) {
        throw InternalError("progression generator visited " + std::to_string(visited) +
                            " items but the closed form predicts " + std::to_string(*expected.exact));
    }
    return visited;
}

ProgressionList list_progressions(const AdditiveSetSpec& set, std::int64_t k, const Limits& limits) {
    ProgressionList list;
    list.k = k;
    for_each_progression(
        set, k,
        [&](std::uint64_t, const Element&, std::span<const std::uint32_t> t) {
            list.terms.insert(list.terms.end(), t.begin(), t.end());
        },
        limits);
    return list;
}

WalfiszCheck walfisz_diagnostic(std::int64_t n, std::int64_t k) {
    require(k >= 2 && k <= n, "walfisz diagnostic requires 2 <= k <= n");
    WalfiszCheck c;
    const double dn = static_cast<double>(n);
    const double km1 = static_cast<double>(k - 1);
    c.lhs = dn * dn - 3.0 / (std::numbers::pi * std::numbers::pi) * dn * km1 * km1;
    c.count = static_cast<double>(*count_cyclic(n, k).exact);
    const double lg = std::log(static_cast<double>(k) + 2.0);
    c.slack = dn * static_cast<double>(k) * lg * lg;
    c.ok = c.lhs <= c.count + c.slack;
    return c;
}

}  // namespace apseq
