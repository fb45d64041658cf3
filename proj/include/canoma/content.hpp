#pragma once

// Content placement and delivery-phase requests. Files are numbered from 1
// (most popular) to T; vehicles are numbered from 0 in code.

#include <cstddef>
#include <span>
#include <vector>

#include "canoma/rng.hpp"

namespace canoma {

using FileIndex = std::size_t;

struct Catalog {
    std::size_t files = 1;  ///< T >= 1

    explicit Catalog(std::size_t t);
};

/// How the Zipf parameter zeta maps to the power-law exponent.
enum class ZipfConvention {
    inverse,   ///< exponent 1/zeta: zeta -> 0 concentrates, zeta >> 1 flattens
    standard,  ///< exponent zeta
};

class PopularityProfile {
public:
    /// Validates: non-empty, entries >= 0, non-increasing, sum within 1e-12 of 1.
    explicit PopularityProfile(std::vector<double> probs);

    std::size_t files() const noexcept { return probs_.size(); }
    std::span<const double> probs() const noexcept { return probs_; }
    /// cdf()[k-1] = P(request <= k); the last entry is exactly 1.
    std::span<const double> cdf() const noexcept { return cdf_; }
    double prob(FileIndex file) const { return probs_.at(file - 1); }

private:
    std::vector<double> probs_;
    std::vector<double> cdf_;
};

/// p_i proportional to i^(-s), s = 1/zeta (inverse) or zeta (standard).
/// zeta = +inf is accepted under the inverse convention (uniform profile).
PopularityProfile zipf_profile(Catalog catalog, double zeta,
                               ZipfConvention convention = ZipfConvention::inverse);

class CacheContents {
public:
    CacheContents() = default;
    CacheContents(std::vector<FileIndex> files, std::size_t capacity);

    bool contains(FileIndex file) const noexcept;
    std::size_t size() const noexcept { return files_.size(); }
    std::size_t capacity() const noexcept { return capacity_; }
    std::span<const FileIndex> files() const noexcept { return files_; }

private:
    std::vector<FileIndex> files_;  // sorted
    std::size_t capacity_ = 0;
};

/// Top-`capacity` placement: {1, ..., capacity}.
CacheContents place_cache(const PopularityProfile& profile, std::size_t capacity);

/// Inverse-CDF lookup: the first file k with u <= cdf(k).
FileIndex request_from_uniform(const PopularityProfile& profile, double u) noexcept;

/// Consumes exactly one uniform from `rng`.
FileIndex sample_request(const PopularityProfile& profile, Rng& rng);

class CacheScenario {
public:
    CacheScenario() = default;
    explicit CacheScenario(std::size_t vehicles);

    std::size_t vehicles() const noexcept { return n_; }

    bool self_hit(std::size_t v) const { return self_[v] != 0; }
    /// Vehicle `holder` has cached the file requested by `requester`.
    bool cross_cached(std::size_t holder, std::size_t requester) const {
        return cross_[holder * n_ + requester] != 0;
    }
    bool same_file(std::size_t a, std::size_t b) const { return same_[a * n_ + b] != 0; }

    void set_self_hit(std::size_t v, bool value) { self_[v] = value; }
    void set_cross_cached(std::size_t holder, std::size_t requester, bool value) {
        cross_[holder * n_ + requester] = value;
    }
    void set_same_file(std::size_t a, std::size_t b, bool value) {
        same_[a * n_ + b] = value;
        same_[b * n_ + a] = value;
    }

    friend auto operator<=>(const CacheScenario&, const CacheScenario&) = default;

private:
    std::size_t n_ = 0;
    std::vector<char> self_;
    std::vector<char> cross_;
    std::vector<char> same_;
};

CacheScenario classify_scenario(std::span<const FileIndex> requests,
                                std::span<const CacheContents> caches);

struct ScenarioClass {
    CacheScenario scenario;
    double probability = 0.0;
};

/// Exact class probabilities for two vehicles with i.i.d. requests drawn
/// from `profile`. Classes with zero mass are omitted.
std::vector<ScenarioClass> scenario_distribution(const PopularityProfile& profile,
                                                 std::span<const CacheContents> caches);

}  // namespace canoma
