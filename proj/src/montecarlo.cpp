#include "apseq/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "apseq/counting.hpp"
#include "apseq/error.hpp"

namespace apseq {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

Rng Rng::for_sample(std::uint64_t seed, std::uint64_t index) { return Rng(splitmix64(splitmix64(seed) ^ index)); }

std::uint64_t Rng::uniform_below(std::uint64_t bound) {
    require(bound >= 1, "uniform_below requires bound >= 1");
    // 2^64 mod bound values at the bottom of the range are rejected.
    const std::uint64_t reject = (0 - bound) % bound;
    while (true) {
        const std::uint64_t x = next();
        if (x >= reject) return x % bound;
    }
}

Ordering sample_ordering(const AdditiveSetSpec& set, Rng& rng) {
    std::vector<std::uint32_t> seq(set.size());
    std::iota(seq.begin(), seq.end(), 0u);
    for (std::size_t i = seq.size(); i > 1; --i) std::swap(seq[i - 1], seq[rng.uniform_below(i)]);
    return Ordering(set, std::move(seq));
}

namespace {

// Runs fn(i) for i in [0, count); results are written by index so the
// merge order never depends on scheduling.
template <class Fn>
void for_each_sample(std::uint64_t count, unsigned threads, Fn&& fn) {
    if (threads <= 1) {
        for (std::uint64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        try {
            for (std::uint64_t i = next++; i < count && !failed; i = next++) fn(i);
        } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

void check_config(const ExperimentConfig& config) {
    require(config.samples >= 1, "samples must be at least 1");
}

}  // namespace

SubseqCountStats estimate_Nk_mean(const ExperimentConfig& config) {
    check_config(config);
    require(config.k.has_value(), "N_k estimation needs k");
    const auto k = *config.k;
    const auto& set = config.set;
    require(k >= 2 && static_cast<std::uint64_t>(k) <= set.size(), "N_k requires 2 <= k <= |A|");

    const auto list = list_progressions(set, k, config.limits);
    std::vector<std::uint64_t> per(config.samples);
    for_each_sample(config.samples, config.threads, [&](std::uint64_t i) {
        Rng rng = Rng::for_sample(config.seed, i);
        per[i] = count_in_order(list, sample_ordering(set, rng).positions());
    });

    SubseqCountStats s;
    s.samples = config.samples;
    const double m = static_cast<double>(config.samples);
    double sum = 0;
    for (auto v : per) sum += static_cast<double>(v);
    s.mean = sum / m;
    double ss = 0;
    for (auto v : per) ss += (static_cast<double>(v) - s.mean) * (static_cast<double>(v) - s.mean);
    s.std_error = config.samples > 1 ? std::sqrt(ss / (m - 1) / m) : 0.0;

    double expected = static_cast<double>(list.size());
    for (std::int64_t i = 2; i <= k; ++i) expected /= static_cast<double>(i);
    s.expected = expected;
    if (s.std_error > 0) {
        s.z = (s.mean - s.expected) / s.std_error;
    } else if (s.mean != s.expected) {
        s.z = std::copysign(std::numeric_limits<double>::infinity(), s.mean - s.expected);
    }
    return s;
}

double LHistogram::fraction(std::int64_t k) const {
    if (k < 0 || static_cast<std::size_t>(k) >= counts.size() || samples == 0) return 0;
    return static_cast<double>(counts[k]) / static_cast<double>(samples);
}

std::int64_t LHistogram::mode() const {
    std::size_t best = 0;
    for (std::size_t k = 1; k < counts.size(); ++k) {
        if (counts[k] > counts[best]) best = k;
    }
    return static_cast<std::int64_t>(best);
}

LHistogram empirical_L_distribution(const ExperimentConfig& config) {
    check_config(config);
    const auto& set = config.set;
    const auto cap = set.is_group() ? config.limits.orbitwalk_max : config.limits.pairdp_max;
    if (set.size() > cap) {
        throw BudgetExceeded("L sampling for " + set.to_string() + " is capped at |A| <= " + std::to_string(cap));
    }
    std::vector<std::uint64_t> per(config.samples);
    for_each_sample(config.samples, config.threads, [&](std::uint64_t i) {
        Rng rng = Rng::for_sample(config.seed, i);
        per[i] = longest_ap(sample_ordering(set, rng), config.limits).length;
    });
    LHistogram h;
    h.samples = config.samples;
    h.counts.assign(set.size() + 1, 0);
    for (auto l : per) ++h.counts[l];
    return h;
}

CoverageResult coverage_experiment(const ExperimentConfig& config) {
    CoverageResult c;
    c.threshold = solve_threshold(config.set);
    c.histogram = empirical_L_distribution(config);
    c.coverage = c.histogram.fraction(c.threshold.floor);
    if (c.threshold.ceil != c.threshold.floor) c.coverage += c.histogram.fraction(c.threshold.ceil);
    const auto mode = c.histogram.mode();
    c.mode_in_window = mode == c.threshold.floor || mode == c.threshold.ceil;
    return c;
}

double total_variation(const LHistogram& sampled, const DistributionTable& exact) {
    require(sampled.samples > 0 && exact.total > 0, "total variation needs nonempty distributions");
    const std::size_t top = std::max(sampled.counts.size(), exact.counts.size());
    double tv = 0;
    for (std::size_t k = 0; k < top; ++k) {
        const double q = static_cast<double>(exact.count(static_cast<std::int64_t>(k))) / static_cast<double>(exact.total);
        tv += std::abs(sampled.fraction(static_cast<std::int64_t>(k)) - q);
    }
    return tv / 2;
}

}  // namespace apseq
