#pragma once

#include <cstdint>
#include <string>

#include "apseq/error.hpp"

namespace apseq::detail {

inline std::uint64_t mul_checked(std::uint64_t a, std::uint64_t b, const char* what = "count") {
    std::uint64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw BudgetExceeded(std::string(what) + " overflows the 64-bit integer range");
    }
    return r;
}

inline std::uint64_t add_checked(std::uint64_t a, std::uint64_t b, const char* what = "count") {
    std::uint64_t r = 0;
    if (__builtin_add_overflow(a, b, &r)) {
        throw BudgetExceeded(std::string(what) + " overflows the 64-bit integer range");
    }
    return r;
}

inline std::uint64_t pow_checked(std::uint64_t base, int exp, const char* what = "count") {
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) r = mul_checked(r, base, what);
    return r;
}

}  // namespace apseq::detail
