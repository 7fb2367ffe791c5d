#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "apseq/groups.hpp"
#include "apseq/las.hpp"
#include "apseq/limits.hpp"

namespace apseq {

/// counts[k] = number of orderings of `set` whose longest progression
/// subsequence has length k, for 0 <= k <= |A|. Sums to |A|!.
struct DistributionTable {
    AdditiveSetSpec set = AdditiveSetSpec::cyclic(1);
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;

    std::uint64_t count(std::int64_t k) const {
        return k >= 0 && static_cast<std::size_t>(k) < counts.size() ? counts[k] : 0;
    }
    bool operator==(const DistributionTable&) const = default;
};

struct EnumerationOptions {
    /// 0 runs inline on the calling thread; N >= 1 uses N worker threads
    /// and raises the size budget to `limits.enumeration_parallel_max`.
    unsigned parallel = 0;
    /// Enumerate only orbit representatives under the set's affine
    /// symmetries (translations and unit dilations for Z/nZ, translations
    /// for other groups, point reflection for the box) and reweight.
    bool symmetry = false;
    Limits limits;
};

DistributionTable distribution(const AdditiveSetSpec& set, const EnumerationOptions& options = {});

/// Like `distribution`, but reads/writes a versioned JSON cache file
/// under `cache_dir`. Corrupt or stale entries are recomputed.
DistributionTable distribution_cached(const AdditiveSetSpec& set, const EnumerationOptions& options,
                                      const std::filesystem::path& cache_dir);

std::filesystem::path cache_path(const std::filesystem::path& cache_dir, const AdditiveSetSpec& set);
std::string cache_payload(const DistributionTable& table);
std::optional<DistributionTable> parse_cache_payload(const std::string& text, const AdditiveSetSpec& set);

/// FNV-1a 64-bit digest, used for cache and golden-file checksums.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

/// CSV with header `n,k1,...,k<columns>` and one row per table. Entries
/// with k > |A| are left empty.
std::string distribution_csv(const std::vector<DistributionTable>& rows, std::size_t columns);

/// Number of orderings of Z/nZ with no 3-term progression subsequence:
/// 2^(n-1) when n is a power of two, else 0.
std::uint64_t three_free_count(std::uint64_t n);

/// Builds the 3-free ordering (2s_1, ..., 2s_h, 2t_1+1, ..., 2t_h+1) of
/// Z/2^m Z from 3-free orderings S, T of Z/2^(m-1) Z, or the variant with
/// the odd block first.
Ordering construct_three_free(int m, const Ordering& evens, const Ordering& odds, bool evens_first);

/// Every 3-free ordering of Z/2^m Z, generated recursively by the
/// construction (m = 0 gives the single ordering of the trivial group).
std::vector<Ordering> all_three_free(int m);

/// Parity-block test: first half one parity, second half the other, both
/// halves (contracted by x -> (x - parity)/2) recursively 3-free.
bool three_free_structure_check(const Ordering& ordering);

}  // namespace apseq
