#include "canoma/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "canoma/error.hpp"

namespace canoma {

double gamma_ccdf(double shape, double scale, double x) {
    if (!(shape > 0.0) || !std::isfinite(shape)) throw ParameterError("gamma shape must be positive");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw ParameterError("gamma scale must be positive");
    if (std::isnan(x) || x < 0.0) throw ParameterError("gamma ccdf argument must be >= 0");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    return boost::math::gamma_q(shape, x / scale);
}

double product_gain_ccdf(const LinkSpec& spec, double x) {
    if (std::isnan(x) || x < 0.0) throw ParameterError("ccdf argument must be >= 0");
    const auto stages = spec.stages();
    if (stages.size() > 2) throw UnsupportedError("product ccdf supports at most two cascaded stages");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (stages.size() == 1) return gamma_ccdf(stages[0].m, stages[0].gamma_scale(), x);

    // P(G1*G2 > x) = E[ Q1(x / G2) ]; integrate in u = g / scale2.
    const double m1 = stages[0].m;
    const double s1 = stages[0].gamma_scale();
    const double m2 = stages[1].m;
    const double s2 = stages[1].gamma_scale();
    const double z = x / (s1 * s2);
    auto integrand = [&](double u) {
        if (u <= 0.0) return 0.0;
        return boost::math::gamma_q(m1, z / u) * boost::math::gamma_p_derivative(m2, u);
    };
    // Split at the stage-2 mode region so both pieces are smooth and well scaled.
    const double split = std::max(m2, 1.0);
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double lower = GK::integrate(integrand, 0.0, split, 20, 1e-14);
    const double upper = GK::integrate(integrand, split, std::numeric_limits<double>::infinity(), 20, 1e-14);
    return std::clamp(lower + upper, 0.0, 1.0);
}

namespace {

// Minimum gain for p*X / (q*X + 1) >= theta.
double sinr_gate(double p, double q, double theta) {
    if (q == 0.0) return theta / p;
    return p > theta * q ? theta / (p - theta * q) : kInfeasible;
}

std::array<double, 2> noma_thresholds(std::size_t strong, const PowerAllocation& alloc, double theta,
                                      const CacheScenario& sc, const AccessOptions& opt) {
    const std::size_t weak = 1 - strong;
    const double total = alloc.total;
    std::array<double, 2> thr{0.0, 0.0};
    std::array<bool, 2> sent{};
    for (std::size_t v = 0; v < 2; ++v) sent[v] = !(opt.cache_aware_transmission && sc.self_hit(v));
    const auto role_power = [&](std::size_t v) { return v == strong ? alloc.strong() : alloc.weak(); };

    if (!sent[0] && !sent[1]) return thr;

    if (sent[0] != sent[1]) {
        const std::size_t v = sent[0] ? 0 : 1;
        const double p = opt.power_policy == PowerPolicy::reallocate ? total : role_power(v);
        thr[v] = theta / p;
        return thr;
    }

    if (opt.duplicates == DuplicatePolicy::merge && sc.same_file(0, 1)) {
        for (std::size_t v = 0; v < 2; ++v)
            if (!sc.self_hit(v)) thr[v] = theta / total;
        return thr;
    }

    // Two messages. The higher-power one is SIC-decoded first; on a tie the
    // weak position's message goes first.
    const double ps = alloc.strong();
    const double pw = alloc.weak();
    const std::size_t hi = pw >= ps ? weak : strong;
    const std::size_t lo = 1 - hi;
    const double p_hi = role_power(hi);
    const double p_lo = role_power(lo);

    if (!sc.self_hit(hi)) {
        const bool knows_lo = opt.cache_aware_sic && sc.cross_cached(hi, lo);
        thr[hi] = knows_lo ? theta / p_hi : sinr_gate(p_hi, p_lo, theta);
    }
    if (!sc.self_hit(lo)) {
        const bool knows_hi = opt.cache_aware_sic && sc.cross_cached(lo, hi);
        thr[lo] = knows_hi ? theta / p_lo : std::max(sinr_gate(p_hi, p_lo, theta), theta / p_lo);
    }
    return thr;
}

std::array<double, 2> oma_thresholds(double total, double theta, const CacheScenario& sc,
                                     const AccessOptions& opt) {
    std::size_t slots = 0;
    for (std::size_t v = 0; v < 2; ++v)
        if (!(opt.cache_aware_transmission && sc.self_hit(v))) ++slots;
    std::array<double, 2> thr{0.0, 0.0};
    for (std::size_t v = 0; v < 2; ++v) {
        if (sc.self_hit(v)) continue;
        thr[v] = (std::pow(1.0 + theta, static_cast<double>(slots)) - 1.0) / total;
    }
    return thr;
}

// Memoized ccdf of one link.
class CcdfCache {
public:
    explicit CcdfCache(const LinkSpec& link) : link_(link) {}

    double operator()(double x) {
        if (x == 0.0) return 1.0;
        if (std::isinf(x)) return 0.0;
        auto [it, inserted] = memo_.try_emplace(x, 0.0);
        if (inserted) it->second = product_gain_ccdf(link_, x);
        return it->second;
    }

private:
    const LinkSpec& link_;
    std::map<double, double> memo_;
};

SuccessProbabilities probabilities(const GainThresholdEvent& event, std::span<CcdfCache> ccdf,
                                   OrderingPolicy policy) {
    SuccessProbabilities out;
    if (policy == OrderingPolicy::fixed) {
        const double g0 = ccdf[0](event(0, 0));
        const double g1 = ccdf[1](event(0, 1));
        out.marginal = {g0, g1};
        out.joint = g0 * g1;
        out.strong = g0;
        out.weak = g1;
        return out;
    }

    // i.i.d. gains; each strong-vehicle assignment occurs with probability 1/2
    // and by exchangeability
    //   P(X_s >= X_w, X_s >= a, X_w >= b) = H(a, b) / 2,
    //   H(a, b) = P(max >= a, min >= b) = G(b)^2 - (G(b) - G(a))^2  for a > b,
    //                                   = G(b)^2                    otherwise.
    auto& G = ccdf[0];
    for (std::size_t s = 0; s < 2; ++s) {
        const std::size_t w = 1 - s;
        const double a = event(s, s);
        const double b = event(s, w);
        const double ga = G(a);
        const double gb = G(b);
        const double h = a > b ? gb * gb - (gb - ga) * (gb - ga) : gb * gb;
        out.joint += 0.5 * h;
        const double strong_ok = 0.5 * (1.0 - (1.0 - ga) * (1.0 - ga));
        const double weak_ok = 0.5 * gb * gb;
        out.marginal[s] += strong_ok;
        out.marginal[w] += weak_ok;
        out.strong += strong_ok;
        out.weak += weak_ok;
    }
    return out;
}

}  // namespace

GainThresholdEvent reduce_to_gain_event(Scheme scheme, const PowerAllocation& alloc, double theta,
                                        const CacheScenario& scenario, const AccessOptions& options) {
    if (scenario.vehicles() != 2 || alloc.position_power.size() != 2)
        throw UnsupportedError("gain threshold reduction covers two vehicles");
    GainThresholdEvent event;
    for (std::size_t s = 0; s < 2; ++s) {
        event.threshold[s] = is_noma(scheme) ? noma_thresholds(s, alloc, theta, scenario, options)
                                             : oma_thresholds(alloc.total, theta, scenario, options);
    }
    return event;
}

SuccessProbabilities conditional_success_prob(const GainThresholdEvent& event,
                                              std::span<const LinkSpec> links, OrderingPolicy policy) {
    if (links.size() != 2) throw UnsupportedError("conditional success probability covers two vehicles");
    if (policy == OrderingPolicy::by_gain && !(links[0] == links[1]))
        throw UnsupportedError("by-gain ordering needs identically distributed links");
    std::array<CcdfCache, 2> ccdf{CcdfCache(links[0]), CcdfCache(links[1])};
    return probabilities(event, ccdf, policy);
}

void check_oracle_support(const ModelParams& params) {
    if (params.vehicles != 2) throw UnsupportedError("oracle covers exactly two vehicles");
    for (const auto& link : params.links)
        if (link.size() > 2) throw UnsupportedError("oracle covers cascades of at most two stages");
    if (params.ordering == OrderingPolicy::by_gain && params.links.size() == 2 && !(params.links[0] == params.links[1]))
        throw UnsupportedError("oracle by-gain ordering needs identical link specs for both vehicles");
}

OracleResult success_prob(Scheme scheme, const ModelParams& params) {
    params.validate();
    check_oracle_support(params);

    const auto profile = zipf_profile(Catalog(params.files), params.zeta, params.convention);
    const std::array<CacheContents, 2> caches{place_cache(profile, params.capacities[0]),
                                              place_cache(profile, params.capacities[1])};
    const auto alloc = split_power(params.total_power(), params.alpha, 2);
    const auto options = AccessOptions::for_scheme(scheme, params.power_policy, params.duplicates);

    std::array<CcdfCache, 2> ccdf{CcdfCache(params.links[0]), CcdfCache(params.links[1])};
    OracleResult r;
    for (const auto& cls : scenario_distribution(profile, caches)) {
        const auto event = reduce_to_gain_event(scheme, alloc, params.theta, cls.scenario, options);
        const auto p = probabilities(event, ccdf, params.ordering);
        r.marginal[0] += cls.probability * p.marginal[0];
        r.marginal[1] += cls.probability * p.marginal[1];
        r.joint += cls.probability * p.joint;
        r.strong += cls.probability * p.strong;
        r.weak += cls.probability * p.weak;
    }
    r.marg_product = r.marginal[0] * r.marginal[1];
    return r;
}

}  // namespace canoma
