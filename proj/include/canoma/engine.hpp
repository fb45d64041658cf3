#pragma once

// Seeded Monte Carlo over delivery-phase trials.
//
// Trial t of a run with base seed s draws vehicle v's request from
// trial_stream(s, t, kRequestStream + v) and its channel from
// trial_stream(s, t, kChannelStream + v). Streams never depend on the model
// parameters being swept, so runs that share a seed are coupled by common
// random numbers, and results never depend on the worker count.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "canoma/access.hpp"
#include "canoma/content.hpp"
#include "canoma/model.hpp"

namespace canoma {

inline constexpr std::uint64_t kRequestStream = 0x100;
inline constexpr std::uint64_t kChannelStream = 0x200;

struct TrialConfig {
    ModelParams model;
    Scheme scheme = Scheme::canoma;
    Metric metric = Metric::marg_product;
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 1;
    unsigned workers = 0;  ///< 0 = hardware concurrency

    void validate() const;
};

/// Success counters; merging is element-wise addition.
struct Counts {
    std::uint64_t n = 0;
    std::vector<std::uint64_t> ok;    ///< per vehicle
    std::vector<std::uint64_t> pair;  ///< pair[i*N + j]: both i and j ok
    std::uint64_t joint = 0;          ///< all vehicles ok
    std::uint64_t strong = 0;         ///< strongest-position vehicle ok
    std::uint64_t weak = 0;           ///< weakest-position vehicle ok

    explicit Counts(std::size_t vehicles = 2);
    Counts& operator+=(const Counts& other);
};

struct Estimate {
    Metric metric = Metric::marg_product;
    double p_hat = 0.0;  ///< value of `metric`
    double std_err = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t n = 0;

    std::vector<double> marginals;
    double joint = 0.0;
    double std_err_joint = 0.0;
    double marg_product = 0.0;
    double std_err_marg_product = 0.0;  ///< delta method
    double strong = 0.0;
    double weak = 0.0;

    double value(Metric m) const { return m == Metric::joint ? joint : marg_product; }
    double std_err_of(Metric m) const { return m == Metric::joint ? std_err_joint : std_err_marg_product; }

    friend bool operator==(const Estimate&, const Estimate&) = default;
};

/// Normal-approximation 95% intervals clipped to [0, 1]. Throws on n == 0.
Estimate summarize(const Counts& counts, Metric metric);

/// Per-run state derived once from the model.
class PreparedModel {
public:
    explicit PreparedModel(const ModelParams& params);

    const ModelParams& params() const noexcept { return params_; }
    const PopularityProfile& profile() const noexcept { return profile_; }
    std::span<const CacheContents> caches() const noexcept { return caches_; }
    const PowerAllocation& allocation() const noexcept { return alloc_; }
    const DecodeThresholds& thresholds() const noexcept { return thresholds_; }

private:
    ModelParams params_;
    PopularityProfile profile_;
    std::vector<CacheContents> caches_;
    PowerAllocation alloc_;
    DecodeThresholds thresholds_;
};

/// Random draws of one trial; independent of the scheme.
struct TrialDraw {
    VehicleVec<FileIndex> requests;
    VehicleVec<ChannelGain> gains;
    CacheScenario scenario;
    UserOrdering ordering;
};

TrialDraw draw_trial(const PreparedModel& model, std::uint64_t seed, std::uint64_t trial);

Outcome decode_trial(const PreparedModel& model, const TrialDraw& draw, Scheme scheme);

/// Estimate for one scheme.
Estimate run_point(const TrialConfig& config);

/// run_point for several schemes off the same trial draws. Each entry is
/// bit-identical to run_point with that scheme.
std::vector<Estimate> run_point_schemes(const TrialConfig& config, std::span<const Scheme> schemes);

enum class SweepParameter { snr_db, cache_size, zeta, catalog_files };

std::string_view to_string(SweepParameter p) noexcept;  ///< CLI names: snr_db, cache, zeta, files
std::optional<SweepParameter> parse_sweep_parameter(std::string_view text) noexcept;

/// Copy of `base` with the swept parameter set to `value`. Throws
/// ParameterError naming the value if it is invalid for the parameter.
ModelParams with_parameter(const ModelParams& base, SweepParameter param, double value);

struct ResultRow {
    double value = 0.0;
    Scheme scheme = Scheme::canoma;
    Estimate estimate;
};

struct ResultTable {
    SweepParameter parameter = SweepParameter::snr_db;
    std::vector<double> grid;  ///< ascending
    std::vector<ResultRow> rows;  ///< by value, then scheme name
};

ResultTable sweep(const TrialConfig& config, SweepParameter parameter, std::vector<double> grid,
                  std::vector<Scheme> schemes);

}  // namespace canoma
