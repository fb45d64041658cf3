#pragma once

// Vocabulary shared by the simulator and the oracle: schemes, metrics,
// policies and the full parameter set of one operating point.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "canoma/channel.hpp"
#include "canoma/content.hpp"

namespace canoma {

enum class Scheme { canoma, noma, oma_cache, oma };
enum class Metric { marg_product, joint };
enum class OrderingPolicy { by_gain, fixed };

/// What the base station does with the power share of a self-served vehicle.
enum class PowerPolicy { reallocate, idle };

/// How coinciding requests are transmitted.
enum class DuplicatePolicy { separate, merge };

std::string_view to_string(Scheme s) noexcept;
std::string_view to_string(Metric m) noexcept;
std::string_view to_string(OrderingPolicy p) noexcept;
std::string_view to_string(PowerPolicy p) noexcept;
std::string_view to_string(DuplicatePolicy p) noexcept;
std::string_view to_string(ZipfConvention c) noexcept;

std::optional<Scheme> parse_scheme(std::string_view text) noexcept;
std::optional<Metric> parse_metric(std::string_view text) noexcept;
std::optional<OrderingPolicy> parse_ordering(std::string_view text) noexcept;
std::optional<PowerPolicy> parse_power_policy(std::string_view text) noexcept;
std::optional<DuplicatePolicy> parse_duplicate_policy(std::string_view text) noexcept;
std::optional<ZipfConvention> parse_zipf_convention(std::string_view text) noexcept;

constexpr bool is_noma(Scheme s) noexcept { return s == Scheme::canoma || s == Scheme::noma; }
constexpr bool is_cache_aware(Scheme s) noexcept { return s == Scheme::canoma || s == Scheme::oma_cache; }

/// Linear power ratio from decibels.
double db_to_linear(double db) noexcept;

struct ModelParams {
    std::size_t vehicles = 2;
    std::size_t files = 10;                   ///< catalog size T
    double zeta = 0.8;
    ZipfConvention convention = ZipfConvention::inverse;
    std::vector<std::size_t> capacities{2, 2};  ///< per vehicle, top-C placement
    double snr_db = 10.0;                      ///< total transmit SNR, P / sigma^2 with sigma^2 = 1
    double alpha = 0.2;                        ///< strongest vehicle's power fraction
    double theta = 1.0;                        ///< SINR threshold, all files
    std::vector<LinkSpec> links{LinkSpec::vehicular_default(), LinkSpec::vehicular_default()};
    OrderingPolicy ordering = OrderingPolicy::by_gain;
    PowerPolicy power_policy = PowerPolicy::reallocate;
    DuplicatePolicy duplicates = DuplicatePolicy::separate;

    double total_power() const noexcept { return db_to_linear(snr_db); }

    /// Throws ParameterError naming the offending field.
    void validate() const;

    /// Sets every vehicle's capacity to `c`.
    void set_capacity(std::size_t c);
    /// Resizes per-vehicle vectors, replicating the first entry.
    void set_vehicles(std::size_t n);
};

}  // namespace canoma
