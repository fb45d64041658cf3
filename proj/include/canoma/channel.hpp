#pragma once

// Cascaded Nakagami-m fading. A link's amplitude is the product of
// independent Nakagami-m stage amplitudes, so its squared gain is the product
// of independent gamma(m_i, omega_i / m_i) variates. Only squared gains are
// ever materialized.

#include <span>
#include <string>
#include <vector>

#include "canoma/rng.hpp"

namespace canoma {

struct NakagamiStage {
    double m = 1.0;      ///< shape, > 0
    double omega = 1.0;  ///< spread (mean squared amplitude), > 0

    /// Scale of the squared-amplitude gamma law.
    double gamma_scale() const noexcept { return omega / m; }

    friend bool operator==(const NakagamiStage&, const NakagamiStage&) = default;
};

class LinkSpec {
public:
    /// Throws ParameterError on an empty list or a non-positive m / omega.
    explicit LinkSpec(std::vector<NakagamiStage> stages);

    /// Two-stage cascade (m=1, omega=1) x (m=2, omega=2).
    static LinkSpec vehicular_default();

    /// Parses "m1,omega1,m2,omega2,..." (parentheses are ignored).
    static LinkSpec parse(const std::string& text);

    std::span<const NakagamiStage> stages() const noexcept { return stages_; }
    std::size_t size() const noexcept { return stages_.size(); }

    std::string to_string() const;

    friend bool operator==(const LinkSpec&, const LinkSpec&) = default;

private:
    std::vector<NakagamiStage> stages_;
};

/// Squared channel gain |h|^2.
struct ChannelGain {
    double value = 0.0;

    friend auto operator<=>(const ChannelGain&, const ChannelGain&) = default;
};

/// Gamma(shape, 1) by Marsaglia-Tsang; shape < 1 uses the U^(1/shape) boost.
double sample_standard_gamma(double shape, Rng& rng);

/// Gamma(shape, scale). Throws ParameterError unless shape > 0 and scale > 0.
double sample_gamma(double shape, double scale, Rng& rng);

ChannelGain sample_link_gain(const LinkSpec& spec, Rng& rng);

/// Mean squared gain: product of the stage omegas.
double mean_link_gain(const LinkSpec& spec) noexcept;

}  // namespace canoma
