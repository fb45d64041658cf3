#include "canoma/access.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "canoma/error.hpp"

namespace canoma {

UserOrdering order_users(std::span<const ChannelGain> gains, OrderingPolicy policy) {
    if (gains.empty()) throw ParameterError("ordering needs at least one vehicle");
    UserOrdering u;
    u.order.resize(gains.size());
    std::iota(u.order.begin(), u.order.end(), std::size_t{0});
    if (policy == OrderingPolicy::by_gain) {
        std::stable_sort(u.order.begin(), u.order.end(),
                         [&](std::size_t a, std::size_t b) { return gains[a].value > gains[b].value; });
    }
    u.position.resize(gains.size());
    for (std::size_t k = 0; k < u.order.size(); ++k) u.position[u.order[k]] = k;
    return u;
}

PowerAllocation split_power(double total, double alpha, std::size_t n) {
    if (!(total > 0.0) || !std::isfinite(total)) throw ParameterError("total power must be positive and finite");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
    if (n < 1) throw ParameterError("power split needs at least one vehicle");

    PowerAllocation a{total, alpha, {}};
    a.position_power.resize(n);
    if (n == 1) {
        a.position_power[0] = total;
        return a;
    }
    if (n == 2) {
        // Larger share first; the other is then an exact (Sterbenz) difference,
        // so the two powers sum to `total` exactly.
        if (alpha < 0.5) {
            a.position_power[1] = (1.0 - alpha) * total;
            a.position_power[0] = total - a.position_power[1];
        } else {
            a.position_power[0] = alpha * total;
            a.position_power[1] = total - a.position_power[0];
        }
        return a;
    }
    const double ratio = (1.0 - alpha) / alpha;
    double norm = 0.0;
    double w = 1.0;
    for (std::size_t k = 0; k < n; ++k, w *= ratio) norm += w;
    w = 1.0;
    double assigned = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k, w *= ratio) {
        a.position_power[k] = total * w / norm;
        assigned += a.position_power[k];
    }
    a.position_power[n - 1] = total - assigned;
    return a;
}

double oma_effective_threshold(double theta, double share) {
    if (!(theta > 0.0)) throw ParameterError("threshold must be positive");
    if (!(share > 0.0 && share <= 1.0)) throw ParameterError("resource share must lie in (0, 1]");
    return std::pow(1.0 + theta, 1.0 / share) - 1.0;
}

DecodeThresholds::DecodeThresholds(double all_files) : uniform_(all_files) {
    if (!(all_files > 0.0) || !std::isfinite(all_files)) throw ParameterError("thresholds must be positive");
}

DecodeThresholds::DecodeThresholds(std::vector<double> per_file) : per_file_(std::move(per_file)) {
    if (per_file_.empty()) throw ParameterError("per-file thresholds are empty");
    for (double t : per_file_)
        if (!(t > 0.0) || !std::isfinite(t)) throw ParameterError("thresholds must be positive");
}

double DecodeThresholds::operator()(FileIndex file) const {
    if (per_file_.empty()) return uniform_;
    return per_file_.at(file - 1);
}

VehicleVec<double> DecodeThresholds::for_requests(std::span<const FileIndex> requests) const {
    VehicleVec<double> out;
    for (FileIndex f : requests) out.push_back((*this)(f));
    return out;
}

AccessOptions AccessOptions::for_scheme(Scheme scheme, PowerPolicy power, DuplicatePolicy duplicates) {
    const bool aware = is_cache_aware(scheme);
    return {aware, aware, power, duplicates};
}

bool Outcome::all() const {
    return std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
}

namespace {

struct Message {
    VehicleVec<std::size_t> members;
    double power = 0.0;
    double theta = 0.0;
    std::size_t weakest_position = 0;
};

bool served(const CacheScenario& scenario, const AccessOptions& options, std::size_t v) {
    return !(options.cache_aware_transmission && scenario.self_hit(v));
}

}  // namespace

Outcome decode_noma(std::span<const ChannelGain> gains, const PowerAllocation& alloc,
                    std::span<const double> vehicle_theta, const CacheScenario& scenario,
                    const UserOrdering& ordering, const AccessOptions& options) {
    const std::size_t n = gains.size();
    Outcome out;
    out.ok.assign(n, 0);

    VehicleVec<std::size_t> active;  // strongest first
    for (std::size_t v : ordering.order)
        if (served(scenario, options, v)) active.push_back(v);

    const bool renormalize = options.cache_aware_transmission &&
                             options.power_policy == PowerPolicy::reallocate && active.size() < n;
    PowerAllocation active_alloc;
    if (renormalize && !active.empty()) active_alloc = split_power(alloc.total, alloc.alpha, active.size());

    VehicleVec<Message> messages;
    VehicleVec<std::size_t> message_of(n, 0);
    for (std::size_t rank = 0; rank < active.size(); ++rank) {
        const std::size_t v = active[rank];
        const double power = renormalize ? active_alloc.position_power[rank]
                                         : alloc.position_power[ordering.position[v]];
        bool merged = false;
        if (options.duplicates == DuplicatePolicy::merge) {
            for (std::size_t m = 0; m < messages.size() && !merged; ++m) {
                if (scenario.same_file(messages[m].members.front(), v)) {
                    messages[m].members.push_back(v);
                    messages[m].power += power;
                    messages[m].weakest_position = std::max(messages[m].weakest_position, ordering.position[v]);
                    message_of[v] = m;
                    merged = true;
                }
            }
        }
        if (!merged) {
            message_of[v] = messages.size();
            messages.push_back({{v}, power, vehicle_theta[v], ordering.position[v]});
        }
    }

    // SIC order: highest power first; equal powers go weakest position first.
    VehicleVec<std::size_t> sic(messages.size());
    std::iota(sic.begin(), sic.end(), std::size_t{0});
    std::sort(sic.begin(), sic.end(), [&](std::size_t a, std::size_t b) {
        if (messages[a].power != messages[b].power) return messages[a].power > messages[b].power;
        return messages[a].weakest_position > messages[b].weakest_position;
    });

    VehicleVec<char> present(messages.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (scenario.self_hit(i)) {
            out.ok[i] = 1;
            continue;
        }
        const double x = gains[i].value;
        const std::size_t own = message_of[i];

        for (std::size_t m = 0; m < messages.size(); ++m) {
            bool known = false;
            if (options.cache_aware_sic && m != own) {
                const std::size_t holder_of = messages[m].members.front();
                known = scenario.cross_cached(i, holder_of);
            }
            present[m] = known ? 0 : 1;
        }
        auto residual_after = [&](std::size_t pos) {
            double q = 0.0;
            for (std::size_t k = pos + 1; k < sic.size(); ++k)
                if (present[sic[k]]) q += messages[sic[k]].power;
            return q;
        };

        bool ok = true;
        for (std::size_t pos = 0; pos < sic.size(); ++pos) {
            const std::size_t m = sic[pos];
            if (!present[m]) continue;
            const double sinr = messages[m].power * x / (residual_after(pos) * x + 1.0);
            if (!(sinr >= messages[m].theta)) {
                ok = false;
                break;
            }
            if (m == own) break;
            present[m] = 0;
        }
        out.ok[i] = ok ? 1 : 0;
    }
    return out;
}

Outcome decode_oma(std::span<const ChannelGain> gains, double total,
                   std::span<const double> vehicle_theta, const CacheScenario& scenario,
                   const AccessOptions& options) {
    const std::size_t n = gains.size();
    std::size_t slots = 0;
    for (std::size_t v = 0; v < n; ++v)
        if (served(scenario, options, v)) ++slots;

    Outcome out;
    out.ok.assign(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
        if (scenario.self_hit(v)) {
            out.ok[v] = 1;
            continue;
        }
        const double needed = oma_effective_threshold(vehicle_theta[v], 1.0 / static_cast<double>(slots));
        out.ok[v] = total * gains[v].value >= needed ? 1 : 0;
    }
    return out;
}

}  // namespace canoma
