#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "apseq/asymptotics.hpp"
#include "apseq/enumeration.hpp"
#include "apseq/groups.hpp"
#include "apseq/las.hpp"
#include "apseq/limits.hpp"

namespace apseq {

/// MT19937-64 seeded per sample from SplitMix64(seed, index), so sample i
/// sees the same stream whatever the thread layout.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    static Rng for_sample(std::uint64_t seed, std::uint64_t index);

    std::uint64_t next() { return engine_(); }
    /// Uniform on [0, bound) by rejection, bound >= 1.
    std::uint64_t uniform_below(std::uint64_t bound);

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Fisher-Yates shuffle of the canonical indices.
Ordering sample_ordering(const AdditiveSetSpec& set, Rng& rng);

struct ExperimentConfig {
    AdditiveSetSpec set = AdditiveSetSpec::cyclic(1);
    std::uint64_t samples = 1;
    std::uint64_t seed = 0;
    std::optional<std::int64_t> k;
    /// 0 or 1 runs on the calling thread.
    unsigned threads = 1;
    Limits limits;
};

struct SubseqCountStats {
    double mean = 0;
    double std_error = 0;
    double expected = 0;
    /// (mean - expected) / std_error; +-inf or 0 when std_error is 0.
    double z = 0;
    std::uint64_t samples = 0;
};

SubseqCountStats estimate_Nk_mean(const ExperimentConfig& config);

/// counts[k] = number of samples with L = k.
struct LHistogram {
    std::vector<std::uint64_t> counts;
    std::uint64_t samples = 0;

    double fraction(std::int64_t k) const;
    /// Most frequent L, smallest on ties.
    std::int64_t mode() const;
};

LHistogram empirical_L_distribution(const ExperimentConfig& config);

struct CoverageResult {
    ThresholdResult threshold;
    LHistogram histogram;
    /// Fraction of samples with L in {floor, ceil} of the threshold.
    double coverage = 0;
    bool mode_in_window = false;
};

CoverageResult coverage_experiment(const ExperimentConfig& config);

/// Half the L1 distance between the sampled and exact distributions of L.
double total_variation(const LHistogram& sampled, const DistributionTable& exact);

}  // namespace apseq
