#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "apseq/counting.hpp"
#include "apseq/error.hpp"
#include "apseq/montecarlo.hpp"

using namespace apseq;

namespace {

std::uint64_t rank_of(std::span<const std::uint32_t> seq) {
    std::vector<std::uint32_t> v(seq.begin(), seq.end());
    std::uint64_t rank = 0;
    while (std::prev_permutation(v.begin(), v.end())) ++rank;
    return rank;
}

// Golden cyclic row 12 and interval row 7.
const std::vector<std::uint64_t> kCyclic12 = {0, 0, 0, 12843792, 280207968, 144390384, 37599168,
                                              3453408, 449856, 51264, 5232, 480, 48};
const std::vector<std::uint64_t> kInterval7 = {0, 0, 104, 3232, 1480, 198, 24, 2};

}  // namespace

TEST_CASE("SplitMix64 reference outputs") {
    // First outputs of the reference generator seeded with 0.
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafull);
    CHECK(splitmix64(0x9e3779b97f4a7c15ull) == 0x6e789e6aa1b965f4ull);
}

TEST_CASE("sampling is deterministic per (seed, index)") {
    const auto z = AdditiveSetSpec::cyclic(5);
    Rng a = Rng::for_sample(42, 0), b = Rng::for_sample(42, 0), c = Rng::for_sample(42, 1);
    const auto oa = sample_ordering(z, a);
    CHECK(oa == sample_ordering(z, b));
    CHECK(sample_ordering(z, c).size() == 5);
    Rng one = Rng::for_sample(1, 1);
    CHECK(sample_ordering(AdditiveSetSpec::interval(1), one) == Ordering::identity(AdditiveSetSpec::interval(1)));
}

TEST_CASE("uniform_below stays in range") {
    Rng rng(5);
    std::vector<int> hits(7);
    for (int i = 0; i < 70000; ++i) ++hits[rng.uniform_below(7)];
    for (int h : hits) CHECK(std::abs(h - 10000) < 600);
    CHECK(rng.uniform_below(1) == 0);
    CHECK_THROWS_AS(rng.uniform_below(0), InvalidArgument);
}

TEST_CASE("shuffle is uniform over the 24 orderings of a 4-set") {
    const auto z = AdditiveSetSpec::cyclic(4);
    std::vector<std::uint64_t> hits(24);
    const std::uint64_t samples = 100000;
    for (std::uint64_t i = 0; i < samples; ++i) {
        Rng rng = Rng::for_sample(2024, i);
        ++hits[rank_of(sample_ordering(z, rng).seq())];
    }
    const double expected = static_cast<double>(samples) / 24.0;
    double chi2 = 0;
    for (auto h : hits) chi2 += (static_cast<double>(h) - expected) * (static_cast<double>(h) - expected) / expected;
    // upper 1e-6 quantile of chi-square with 23 degrees of freedom
    CHECK(chi2 < 70.55);
}

TEST_CASE("E{N_k} battery") {
    struct Case {
        const char* set;
        std::int64_t k;
    };
    const Case cases[] = {{"interval:20", 3},  {"interval:30", 3},  {"interval:40", 4},   {"interval:25", 5},
                          {"interval:50", 3},  {"interval:60", 4},  {"interval:5,2", 3},  {"interval:6,2", 4},
                          {"interval:4,3", 3}, {"cyclic:20", 3},    {"cyclic:31", 3},     {"cyclic:32", 4},
                          {"cyclic:50", 3},    {"cyclic:45", 5},    {"abelian:2x10", 3},  {"abelian:3x9", 4},
                          {"abelian:4x4", 3},  {"elementary:5^2", 3}, {"elementary:3^3", 3}, {"elementary:7^1", 4}};
    int within = 0;
    std::uint64_t seed = 100;
    for (const auto& c : cases) {
        ExperimentConfig cfg;
        cfg.set = AdditiveSetSpec::parse(c.set);
        cfg.samples = 1000;
        cfg.seed = seed++;
        cfg.k = c.k;
        const auto s = estimate_Nk_mean(cfg);
        double expected = static_cast<double>(*count_closed_form(cfg.set, c.k).exact);
        for (std::int64_t i = 2; i <= c.k; ++i) expected /= static_cast<double>(i);
        CHECK(s.expected == doctest::Approx(expected).epsilon(1e-12));
        CHECK(s.std_error >= 0);
        within += std::abs(s.z) <= 3;
    }
    CHECK(within >= 19);
}

TEST_CASE("N_k at k = |A|") {
    ExperimentConfig cfg;
    cfg.set = AdditiveSetSpec::interval(5);
    cfg.samples = 600;
    cfg.seed = 3;
    cfg.k = 5;
    const auto s = estimate_Nk_mean(cfg);
    CHECK(s.expected == doctest::Approx(2.0 / 120.0));
    // N_5 is 1 exactly when the sample is one of the two monotone orderings.
    CHECK(s.mean * 600 == doctest::Approx(std::round(s.mean * 600)));
}

TEST_CASE("zero variance gives an infinite or zero z") {
    ExperimentConfig cfg;
    cfg.set = AdditiveSetSpec::cyclic(2);
    cfg.samples = 10;
    cfg.seed = 1;
    cfg.k = 2;
    // Either ordering of Z/2 contains exactly one progression in order.
    const auto s = estimate_Nk_mean(cfg);
    CHECK(s.mean == 1.0);
    CHECK(s.std_error == 0.0);
    CHECK(s.expected == 1.0);
    CHECK(s.z == 0.0);
}

TEST_CASE("thread count does not change results") {
    ExperimentConfig cfg;
    cfg.set = AdditiveSetSpec::cyclic(40);
    cfg.samples = 300;
    cfg.seed = 77;
    cfg.k = 3;
    const auto a = estimate_Nk_mean(cfg);
    const auto ha = empirical_L_distribution(cfg);
    cfg.threads = 4;
    const auto b = estimate_Nk_mean(cfg);
    const auto hb = empirical_L_distribution(cfg);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(ha.counts == hb.counts);
}

TEST_CASE("L histograms against exact tables") {
    ExperimentConfig cfg;
    cfg.samples = 10000;
    cfg.seed = 12;
    cfg.set = AdditiveSetSpec::cyclic(12);
    const auto hc = empirical_L_distribution(cfg);
    for (std::size_t k = 0; k < kCyclic12.size(); ++k) {
        CHECK(std::abs(hc.fraction(static_cast<std::int64_t>(k)) - static_cast<double>(kCyclic12[k]) / 479001600.0) <= 0.02);
    }
    cfg.set = AdditiveSetSpec::interval(7);
    const auto hi = empirical_L_distribution(cfg);
    for (std::size_t k = 0; k < kInterval7.size(); ++k) {
        CHECK(std::abs(hi.fraction(static_cast<std::int64_t>(k)) - static_cast<double>(kInterval7[k]) / 5040.0) <= 0.02);
    }
    DistributionTable exact;
    exact.set = cfg.set;
    exact.counts = kInterval7;
    exact.total = 5040;
    CHECK(total_variation(hi, exact) < 0.02);

    cfg.set = AdditiveSetSpec::interval(2);
    cfg.samples = 50;
    const auto h2 = empirical_L_distribution(cfg);
    CHECK(h2.fraction(2) == 1.0);
    CHECK(h2.mode() == 2);
}

TEST_CASE("coverage experiment reports the window") {
    ExperimentConfig cfg;
    cfg.set = AdditiveSetSpec::cyclic(12);
    cfg.samples = 4000;
    cfg.seed = 9;
    const auto c = coverage_experiment(cfg);
    const double exact = static_cast<double>(kCyclic12[c.threshold.floor] +
                                             (c.threshold.ceil != c.threshold.floor ? kCyclic12[c.threshold.ceil] : 0)) /
                         479001600.0;
    // four standard errors of a proportion at 4000 samples
    CHECK(std::abs(c.coverage - exact) <= 4 * std::sqrt(exact * (1 - exact) / 4000.0));
}

TEST_CASE("config validation") {
    ExperimentConfig cfg;
    cfg.set = AdditiveSetSpec::cyclic(10);
    cfg.samples = 0;
    CHECK_THROWS_AS(empirical_L_distribution(cfg), InvalidArgument);
    cfg.samples = 5;
    CHECK_THROWS_AS(estimate_Nk_mean(cfg), InvalidArgument);
    cfg.k = 11;
    CHECK_THROWS_AS(estimate_Nk_mean(cfg), InvalidArgument);
    cfg.limits.orbitwalk_max = 5;
    CHECK_THROWS_AS(empirical_L_distribution(cfg), BudgetExceeded);
}
