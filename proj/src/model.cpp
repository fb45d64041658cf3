#include "canoma/model.hpp"

#include <algorithm>
#include <cmath>

#include "canoma/error.hpp"

namespace canoma {

std::string_view to_string(Scheme s) noexcept {
    switch (s) {
        case Scheme::canoma: return "canoma";
        case Scheme::noma: return "noma";
        case Scheme::oma_cache: return "oma-cache";
        case Scheme::oma: return "oma";
    }
    return "?";
}

std::string_view to_string(Metric m) noexcept {
    return m == Metric::joint ? "joint" : "marg-product";
}

std::string_view to_string(OrderingPolicy p) noexcept {
    return p == OrderingPolicy::fixed ? "fixed" : "by-gain";
}

std::string_view to_string(PowerPolicy p) noexcept {
    return p == PowerPolicy::idle ? "idle" : "reallocate";
}

std::string_view to_string(DuplicatePolicy p) noexcept {
    return p == DuplicatePolicy::merge ? "merge" : "separate";
}

std::string_view to_string(ZipfConvention c) noexcept {
    return c == ZipfConvention::standard ? "standard" : "inverse";
}

std::optional<Scheme> parse_scheme(std::string_view text) noexcept {
    for (Scheme s : {Scheme::canoma, Scheme::noma, Scheme::oma_cache, Scheme::oma})
        if (text == to_string(s)) return s;
    return std::nullopt;
}

std::optional<Metric> parse_metric(std::string_view text) noexcept {
    if (text == "marg-product") return Metric::marg_product;
    if (text == "joint") return Metric::joint;
    return std::nullopt;
}

std::optional<OrderingPolicy> parse_ordering(std::string_view text) noexcept {
    if (text == "by-gain") return OrderingPolicy::by_gain;
    if (text == "fixed") return OrderingPolicy::fixed;
    return std::nullopt;
}

std::optional<PowerPolicy> parse_power_policy(std::string_view text) noexcept {
    if (text == "reallocate") return PowerPolicy::reallocate;
    if (text == "idle") return PowerPolicy::idle;
    return std::nullopt;
}

std::optional<DuplicatePolicy> parse_duplicate_policy(std::string_view text) noexcept {
    if (text == "separate") return DuplicatePolicy::separate;
    if (text == "merge") return DuplicatePolicy::merge;
    return std::nullopt;
}

std::optional<ZipfConvention> parse_zipf_convention(std::string_view text) noexcept {
    if (text == "inverse") return ZipfConvention::inverse;
    if (text == "standard") return ZipfConvention::standard;
    return std::nullopt;
}

double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }

void ModelParams::validate() const {
    if (vehicles < 1) throw ParameterError("vehicles: need at least one vehicle");
    if (files < 1) throw ParameterError("files: catalog needs at least one file");
    if (!(zeta > 0.0)) throw ParameterError("zeta: must be positive");
    if (capacities.size() != vehicles) throw ParameterError("cache: one capacity per vehicle is required");
    for (auto c : capacities)
        if (c > files) throw ParameterError("cache: capacity " + std::to_string(c) + " exceeds files " + std::to_string(files));
    if (!std::isfinite(snr_db)) throw ParameterError("snr-db: must be finite");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha: must lie in (0, 1)");
    if (!(theta > 0.0) || !std::isfinite(theta)) throw ParameterError("theta: must be positive and finite");
    if (links.size() != vehicles) throw ParameterError("link-spec: one link spec per vehicle is required");
}

void ModelParams::set_capacity(std::size_t c) { std::fill(capacities.begin(), capacities.end(), c); }

void ModelParams::set_vehicles(std::size_t n) {
    vehicles = n;
    const std::size_t cap = capacities.empty() ? 0 : capacities.front();
    const LinkSpec link = links.empty() ? LinkSpec::vehicular_default() : links.front();
    capacities.resize(n, cap);
    links.resize(n, link);
}

}  // namespace canoma
