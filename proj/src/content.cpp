#include "canoma/content.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "canoma/error.hpp"

namespace canoma {

Catalog::Catalog(std::size_t t) : files(t) {
    if (t < 1) throw ParameterError("catalog needs at least one file");
}

PopularityProfile::PopularityProfile(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw ParameterError("popularity profile is empty");
    double total = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        const double p = probs_[i];
        if (!std::isfinite(p) || p < 0.0) throw ParameterError("popularity entries must be finite and >= 0");
        if (i > 0 && p > probs_[i - 1]) throw ParameterError("popularity profile must be non-increasing");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ParameterError("popularity profile must sum to 1");

    cdf_.resize(probs_.size());
    std::partial_sum(probs_.begin(), probs_.end(), cdf_.begin());
    cdf_.back() = 1.0;
}

PopularityProfile zipf_profile(Catalog catalog, double zeta, ZipfConvention convention) {
    if (!(zeta > 0.0)) throw ParameterError("zipf parameter zeta must be positive");
    if (convention == ZipfConvention::standard && !std::isfinite(zeta))
        throw ParameterError("zipf parameter zeta must be finite under the standard convention");
    const double exponent = convention == ZipfConvention::inverse ? 1.0 / zeta : zeta;

    std::vector<double> weights(catalog.files);
    for (std::size_t i = 0; i < weights.size(); ++i)
        weights[i] = std::pow(static_cast<double>(i + 1), -exponent);
    // Sum smallest-first for accuracy.
    const double total = std::accumulate(weights.rbegin(), weights.rend(), 0.0);
    for (auto& w : weights) w /= total;
    for (std::size_t i = 1; i < weights.size(); ++i) weights[i] = std::min(weights[i], weights[i - 1]);
    return PopularityProfile(std::move(weights));
}

CacheContents::CacheContents(std::vector<FileIndex> files, std::size_t capacity)
    : files_(std::move(files)), capacity_(capacity) {
    std::sort(files_.begin(), files_.end());
    files_.erase(std::unique(files_.begin(), files_.end()), files_.end());
    if (files_.size() > capacity_) throw ParameterError("cache holds more files than its capacity");
    if (!files_.empty() && files_.front() == 0) throw ParameterError("file indices start at 1");
}

bool CacheContents::contains(FileIndex file) const noexcept {
    return std::binary_search(files_.begin(), files_.end(), file);
}

CacheContents place_cache(const PopularityProfile& profile, std::size_t capacity) {
    if (capacity > profile.files())
        throw ParameterError("cache capacity " + std::to_string(capacity) + " exceeds catalog size " +
                             std::to_string(profile.files()));
    std::vector<FileIndex> files(capacity);
    std::iota(files.begin(), files.end(), FileIndex{1});
    return CacheContents(std::move(files), capacity);
}

FileIndex request_from_uniform(const PopularityProfile& profile, double u) noexcept {
    const auto cdf = profile.cdf();
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) return cdf.size();
    return static_cast<FileIndex>(it - cdf.begin()) + 1;
}

FileIndex sample_request(const PopularityProfile& profile, Rng& rng) {
    return request_from_uniform(profile, uniform01(rng));
}

CacheScenario::CacheScenario(std::size_t vehicles)
    : n_(vehicles), self_(vehicles, 0), cross_(vehicles * vehicles, 0), same_(vehicles * vehicles, 0) {}

CacheScenario classify_scenario(std::span<const FileIndex> requests,
                                std::span<const CacheContents> caches) {
    if (requests.size() != caches.size())
        throw ParameterError("one cache per requesting vehicle is required");
    const std::size_t n = requests.size();
    CacheScenario scenario(n);
    for (std::size_t i = 0; i < n; ++i) {
        scenario.set_self_hit(i, caches[i].contains(requests[i]));
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            scenario.set_cross_cached(j, i, caches[j].contains(requests[i]));
            if (j > i) scenario.set_same_file(i, j, requests[i] == requests[j]);
        }
    }
    return scenario;
}

std::vector<ScenarioClass> scenario_distribution(const PopularityProfile& profile,
                                                 std::span<const CacheContents> caches) {
    if (caches.size() != 2) throw UnsupportedError("exact scenario enumeration covers two vehicles");

    // Bucket files by which caches hold them; a pair's class depends only on
    // the two buckets and on whether the files coincide.
    std::array<double, 4> mass{};
    std::array<double, 4> mass_sq{};
    for (FileIndex f = 1; f <= profile.files(); ++f) {
        const unsigned mask = (caches[0].contains(f) ? 1u : 0u) | (caches[1].contains(f) ? 2u : 0u);
        const double p = profile.prob(f);
        mass[mask] += p;
        mass_sq[mask] += p * p;
    }

    auto make = [](unsigned m1, unsigned m2, bool same) {
        CacheScenario s(2);
        s.set_self_hit(0, (m1 & 1u) != 0);
        s.set_cross_cached(1, 0, (m1 & 2u) != 0);
        s.set_self_hit(1, (m2 & 2u) != 0);
        s.set_cross_cached(0, 1, (m2 & 1u) != 0);
        s.set_same_file(0, 1, same);
        return s;
    };

    std::vector<ScenarioClass> classes;
    for (unsigned m1 = 0; m1 < 4; ++m1) {
        for (unsigned m2 = 0; m2 < 4; ++m2) {
            double distinct = mass[m1] * mass[m2];
            if (m1 == m2) distinct = std::max(0.0, distinct - mass_sq[m1]);
            if (distinct > 0.0) classes.push_back({make(m1, m2, false), distinct});
        }
        if (mass_sq[m1] > 0.0) classes.push_back({make(m1, m1, true), mass_sq[m1]});
    }
    return classes;
}

}  // namespace canoma
