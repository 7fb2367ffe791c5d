#pragma once

#include <cstdint>

namespace apseq {

/// Size and work caps shared by the library. Every operation that can blow
/// up takes a `Limits` (defaulted) and throws `BudgetExceeded` past the cap.
struct Limits {
    std::uint64_t max_cardinality = 10'000'000;
    std::uint64_t brute_force_group_order = 10'000;
    std::int64_t brute_force_interval_n = 50;
    int brute_force_interval_d = 3;
    std::uint64_t pairdp_max = 5000;
    std::uint64_t orbitwalk_max = 20'000;
    std::uint64_t progression_cap = 50'000'000;
    std::uint64_t enumeration_max = 10;
    std::uint64_t enumeration_parallel_max = 12;
};

}  // namespace apseq
