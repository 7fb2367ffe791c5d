#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "apseq/groups.hpp"

namespace apseq {

/// log Gamma(x) for x > 0 (Lanczos, g = 7).
double log_gamma(double x);

enum class ContinuationMode { Interp, Smooth };

std::string_view mode_name(ContinuationMode m);
ContinuationMode parse_mode(std::string_view text);

/// Largest k with a nonzero progression count: the side length for the
/// interval box, n for Z/nZ, p for (Z/p)^d.
std::int64_t max_progression_length(const AdditiveSetSpec& set);

/// Natural log of the progression count at integer k, from the closed
/// forms, evaluated in log space so large boxes never overflow.
double log_count(const AdditiveSetSpec& set, std::int64_t k);

/// Continuous extension of log count(k) to real x in [2, k_max].
/// Interp: linear interpolation between integer nodes (any family).
/// Smooth: log(((n-x+2)(n-1)/(x-1) + n)^d - n^d), interval box only.
double continued_log_count(const AdditiveSetSpec& set, double x, ContinuationMode mode = ContinuationMode::Interp);

struct ThresholdResult {
    double value = 0;
    std::int64_t floor = 0;
    std::int64_t ceil = 0;
    AdditiveSetSpec set = AdditiveSetSpec::cyclic(1);
    /// Set when F has no root inside [2, k_max] and value is an endpoint.
    bool boundary_clamped = false;
    /// 2d log n / log log n; absent for p-groups and for n < 3.
    std::optional<double> asymptotic;
    double residual = 0;
    ContinuationMode mode = ContinuationMode::Interp;
};

/// Root of continued_log_count(x) - log_gamma(x + 1) = 0: psi(n,d) for the
/// box, chi(n) for Z/nZ, tau(p,d) for (Z/p)^d.
ThresholdResult solve_threshold(const AdditiveSetSpec& set, ContinuationMode mode = ContinuationMode::Interp);

/// 2d log n / log log n (natural logs), n >= 3.
double asymptotic_estimate(std::int64_t n, int d);

}  // namespace apseq
