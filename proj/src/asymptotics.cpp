#include "apseq/asymptotics.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include "apseq/counting.hpp"
#include "apseq/error.hpp"

namespace apseq {

double log_gamma(double x) {
    require(x > 0 && std::isfinite(x), "log_gamma requires a finite x > 0");
    static constexpr std::array<double, 9> coef = {
        0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
    };
    if (x < 0.5) return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
    x -= 1.0;
    double a = coef[0];
    for (int i = 1; i < 9; ++i) a += coef[i] / (x + i);
    const double t = x + 7.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (x + 0.5) * std::log(t) - t + std::log(a);
}

std::string_view mode_name(ContinuationMode m) { return m == ContinuationMode::Interp ? "interp" : "smooth"; }

ContinuationMode parse_mode(std::string_view text) {
    if (text == "interp") return ContinuationMode::Interp;
    if (text == "smooth") return ContinuationMode::Smooth;
    throw InvalidArgument("unknown continuation mode '" + std::string(text) + "' (expected interp or smooth)");
}

namespace {

void require_threshold_family(const AdditiveSetSpec& set) {
    require(set.family() != Family::Abelian,
            "thresholds are defined for interval, cyclic and elementary p-group sets, not " + set.to_string());
}

// log(t^d - n^d) for t > n.
double log_power_gap(double log_t, double log_n, int d) {
    return d * log_t + std::log1p(-std::exp(d * (log_n - log_t)));
}

}  // namespace

std::int64_t max_progression_length(const AdditiveSetSpec& set) {
    require_threshold_family(set);
    if (set.size() == 1) return 1;
    return set.family() == Family::ElementaryP ? set.p() : set.n();
}

double log_count(const AdditiveSetSpec& set, std::int64_t k) {
    const auto kmax = max_progression_length(set);
    require(k >= 1 && k <= kmax, "k = " + std::to_string(k) + " is outside [1, " + std::to_string(kmax) + "] for " +
                                     set.to_string());
    if (k == 1) return std::log(static_cast<double>(set.size()));
    switch (set.family()) {
        case Family::IntervalBox: {
            const double n = static_cast<double>(set.n());
            const double p = static_cast<double>(*count_interval(set.n(), k).exact);
            return log_power_gap(std::log(p + n), std::log(n), set.dim());
        }
        case Family::Cyclic: {
            const auto n = static_cast<std::uint64_t>(set.n());
            std::uint64_t small = 0;
            for (auto j : divisors(n)) {
                if (j >= static_cast<std::uint64_t>(k)) break;
                small += totient(j);
            }
            return std::log(static_cast<double>(n)) + std::log(static_cast<double>(n - small));
        }
        case Family::ElementaryP: {
            const double lp = std::log(static_cast<double>(set.p()));
            return 2 * set.dim() * lp + std::log1p(-std::exp(-set.dim() * lp));
        }
        case Family::Abelian: break;
    }
    throw InternalError("unreachable family in log_count");
}

double continued_log_count(const AdditiveSetSpec& set, double x, ContinuationMode mode) {
    const auto kmax = max_progression_length(set);
    require(x >= 2 && x <= static_cast<double>(kmax),
            "x = " + std::to_string(x) + " is outside [2, " + std::to_string(kmax) + "] for " + set.to_string());
    if (mode == ContinuationMode::Smooth) {
        require(set.family() == Family::IntervalBox, "smooth continuation is only defined for the interval box");
        const double n = static_cast<double>(set.n());
        const double t = (n - x + 2) * (n - 1) / (x - 1) + n;
        return log_power_gap(std::log(t), std::log(n), set.dim());
    }
    const double lo = std::floor(x);
    const double frac = x - lo;
    const double at_lo = log_count(set, static_cast<std::int64_t>(lo));
    if (frac == 0) return at_lo;
    return at_lo + frac * (log_count(set, static_cast<std::int64_t>(lo) + 1) - at_lo);
}

double asymptotic_estimate(std::int64_t n, int d) {
    require(n >= 3, "asymptotic_estimate requires n >= 3");
    require(d >= 1, "asymptotic_estimate requires d >= 1");
    const double ln = std::log(static_cast<double>(n));
    return 2.0 * d * ln / std::log(ln);
}

namespace {

constexpr double kExact = 1e-12;

struct Root {
    double value;
    bool clamped;
};

// F strictly decreasing on [lo, hi]. Integer nodes are bracketed first so a
// root that lands on an integer is returned exactly.
Root bisect(const std::function<double(double)>& F, std::int64_t lo, std::int64_t hi) {
    const double flo = F(static_cast<double>(lo));
    if (std::abs(flo) <= kExact) return {static_cast<double>(lo), false};
    if (flo < 0) return {static_cast<double>(lo), true};
    const double fhi = F(static_cast<double>(hi));
    if (std::abs(fhi) <= kExact) return {static_cast<double>(hi), false};
    if (fhi > 0) return {static_cast<double>(hi), true};

    while (hi - lo > 1) {
        const auto mid = lo + (hi - lo) / 2;
        const double f = F(static_cast<double>(mid));
        if (std::abs(f) <= kExact) return {static_cast<double>(mid), false};
        (f > 0 ? lo : hi) = mid;
    }
    double a = static_cast<double>(lo), b = static_cast<double>(hi);
    double mid = 0.5 * (a + b);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (a + b);
        const double f = F(mid);
        if (std::abs(f) <= kExact || mid <= a || mid >= b) break;
        (f > 0 ? a : b) = mid;
    }
    return {mid, false};
}

}  // namespace

ThresholdResult solve_threshold(const AdditiveSetSpec& set, ContinuationMode mode) {
    const auto kmax = max_progression_length(set);
    require(kmax >= 2, "threshold needs a set with a progression of length 2, got " + set.to_string());
    require(mode == ContinuationMode::Interp || set.family() == Family::IntervalBox,
            "smooth continuation is only defined for the interval box");

    std::function<double(double)> F;
    std::int64_t hi = kmax;
    if (set.family() == Family::ElementaryP) {
        // The count is constant in k, so invert log Gamma(tau + 1) = log(p^2d - p^d).
        const double c = log_count(set, 2);
        F = [c](double x) { return c - log_gamma(x + 1); };
        hi = static_cast<std::int64_t>(set.size());
    } else {
        F = [&set, mode](double x) { return continued_log_count(set, x, mode) - log_gamma(x + 1); };
    }
    const auto root = bisect(F, 2, hi);

    ThresholdResult r;
    r.value = root.value;
    r.floor = static_cast<std::int64_t>(std::floor(root.value));
    r.ceil = static_cast<std::int64_t>(std::ceil(root.value));
    r.set = set;
    r.boundary_clamped = root.clamped;
    r.residual = F(root.value);
    r.mode = mode;
    if (set.family() != Family::ElementaryP && set.n() >= 3) r.asymptotic = asymptotic_estimate(set.n(), set.dim());
    if (!root.clamped && std::abs(r.residual) > 1e-9) {
        throw InternalError("threshold residual " + std::to_string(r.residual) + " exceeds 1e-9 for " +
                            set.to_string());
    }
    return r;
}

}  // namespace apseq
