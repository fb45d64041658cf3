#pragma once

// Semi-analytic success probabilities for two vehicles: exact enumeration
// of the cache scenario classes, each reduced to per-vehicle gain thresholds,
// integrated against the cascaded fading law.
//
// The reduction here is derived case-by-case from the SINR inequalities
// p*X / (q*X + 1) >= theta  <=>  X >= theta / (p - theta*q)  (p > theta*q)
// and deliberately shares no code with decode_noma / decode_oma.

#include <array>
#include <limits>
#include <span>

#include "canoma/access.hpp"
#include "canoma/channel.hpp"
#include "canoma/content.hpp"
#include "canoma/model.hpp"

namespace canoma {

inline constexpr double kInfeasible = std::numeric_limits<double>::infinity();

/// P(G > x) for G ~ gamma(shape, scale).
double gamma_ccdf(double shape, double scale, double x);

/// P(|h|^2 > x) for a one- or two-stage cascade. Throws UnsupportedError
/// for longer cascades.
double product_gain_ccdf(const LinkSpec& spec, double x);

/// Minimum gains for each vehicle to succeed, conditional on which vehicle
/// occupies the strong position. 0 means unconditional success, kInfeasible
/// means success is impossible.
struct GainThresholdEvent {
    std::array<std::array<double, 2>, 2> threshold{};  ///< [strong vehicle][vehicle]

    double operator()(std::size_t strong, std::size_t vehicle) const { return threshold[strong][vehicle]; }
};

/// Two-vehicle reduction for a uniform threshold `theta`.
GainThresholdEvent reduce_to_gain_event(Scheme scheme, const PowerAllocation& alloc, double theta,
                                        const CacheScenario& scenario, const AccessOptions& options);

struct SuccessProbabilities {
    std::array<double, 2> marginal{};  ///< per vehicle
    double joint = 0.0;
    double strong = 0.0;  ///< success of whichever vehicle holds the strong position
    double weak = 0.0;
};

/// Probability of a reduced event. Fixed ordering factorizes over the two
/// independent links. By-gain ordering needs one shared LinkSpec (i.i.d.
/// gains) and uses two-sample order statistics; heterogeneous links throw
/// UnsupportedError.
SuccessProbabilities conditional_success_prob(const GainThresholdEvent& event,
                                              std::span<const LinkSpec> links, OrderingPolicy policy);

struct OracleResult {
    std::array<double, 2> marginal{};
    double joint = 0.0;
    double marg_product = 0.0;
    double strong = 0.0;
    double weak = 0.0;

    double value(Metric metric) const { return metric == Metric::joint ? joint : marg_product; }
};

/// Throws UnsupportedError outside the oracle's envelope (vehicles != 2,
/// cascades longer than two stages, by-gain ordering with distinct links).
void check_oracle_support(const ModelParams& params);

OracleResult success_prob(Scheme scheme, const ModelParams& params);

}  // namespace canoma
