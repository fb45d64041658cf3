#pragma once

// Per-trial decode outcomes for superposition-coded downlink with
// successive interference cancellation (SIC), with and without cache-aided
// interference removal, plus the orthogonal (time-division) baseline.
//
// Noise variance is fixed at 1, so the total power P equals the total
// transmit SNR. A message sent at power p and decoded at gain X, with
// residual superposed power q still present, has SINR p*X / (q*X + 1).

#include <cstddef>
#include <span>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "canoma/channel.hpp"
#include "canoma/content.hpp"
#include "canoma/model.hpp"

namespace canoma {

template <class T>
using VehicleVec = boost::container::small_vector<T, 4>;

template <class T>
std::span<const T> view(const VehicleVec<T>& v) noexcept {
    return {v.data(), v.size()};
}

/// Vehicles sorted strongest channel first.
struct UserOrdering {
    VehicleVec<std::size_t> order;      ///< order[k] = vehicle at position k
    VehicleVec<std::size_t> position;   ///< position[v] = k

    std::size_t strongest() const { return order.front(); }
    std::size_t weakest() const { return order.back(); }
};

/// by_gain: descending gain, ties broken by ascending vehicle index.
/// fixed: identity (vehicle 0 is treated as strongest).
UserOrdering order_users(std::span<const ChannelGain> gains, OrderingPolicy policy);

struct PowerAllocation {
    double total = 0.0;
    double alpha = 0.0;
    VehicleVec<double> position_power;  ///< index 0 = strongest position

    double strong() const { return position_power.front(); }
    double weak() const { return position_power.back(); }
};

/// N=2: (alpha*P, (1-alpha)*P). General N: the k-th strongest position gets
/// power proportional to q^(k-1), q = (1-alpha)/alpha, normalized to P.
/// Throws ParameterError unless total > 0 and 0 < alpha < 1.
PowerAllocation split_power(double total, double alpha, std::size_t n);

/// Rate-equivalent SINR on a fractional orthogonal resource:
/// (1 + theta)^(1/share) - 1.
double oma_effective_threshold(double theta, double share);

/// Per-file SINR thresholds (linear).
class DecodeThresholds {
public:
    explicit DecodeThresholds(double all_files = 1.0);
    explicit DecodeThresholds(std::vector<double> per_file);

    double operator()(FileIndex file) const;
    bool is_uniform() const noexcept { return per_file_.empty(); }

    /// Thresholds of each vehicle's requested file.
    VehicleVec<double> for_requests(std::span<const FileIndex> requests) const;

private:
    double uniform_ = 1.0;
    std::vector<double> per_file_;
};

struct AccessOptions {
    /// The BS skips self-hit requests and shares resources among the rest.
    bool cache_aware_transmission = true;
    /// Receivers subtract messages whose file they hold instead of SIC-decoding them.
    bool cache_aware_sic = true;
    PowerPolicy power_policy = PowerPolicy::reallocate;
    DuplicatePolicy duplicates = DuplicatePolicy::separate;

    static AccessOptions for_scheme(Scheme scheme, PowerPolicy power = PowerPolicy::reallocate,
                                    DuplicatePolicy duplicates = DuplicatePolicy::separate);
};

/// ok[v]: vehicle v obtained its own requested file.
struct Outcome {
    VehicleVec<char> ok;

    bool operator[](std::size_t v) const { return ok[v] != 0; }
    bool all() const;

    friend bool operator==(const Outcome&, const Outcome&) = default;
};

Outcome decode_noma(std::span<const ChannelGain> gains, const PowerAllocation& alloc,
                    std::span<const double> vehicle_theta, const CacheScenario& scenario,
                    const UserOrdering& ordering, const AccessOptions& options);

/// Time-division baseline: A served vehicles each get a 1/A slot at full power.
/// Cross-cache flags play no role.
Outcome decode_oma(std::span<const ChannelGain> gains, double total,
                   std::span<const double> vehicle_theta, const CacheScenario& scenario,
                   const AccessOptions& options);

}  // namespace canoma
