#include "canoma/channel.hpp"

#include <cmath>
#include <sstream>

#include "canoma/error.hpp"

namespace canoma {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

void validate(const NakagamiStage& stage) {
    if (!positive_finite(stage.m))
        throw ParameterError("Nakagami stage m must be positive and finite");
    if (!positive_finite(stage.omega))
        throw ParameterError("Nakagami stage omega must be positive and finite");
}

// Marsaglia polar method on our own uniforms; one normal per call, the second
// variate is discarded so the stream consumption per gamma draw stays local.
double standard_normal(Rng& rng) {
    for (;;) {
        const double u = 2.0 * uniform01(rng) - 1.0;
        const double v = 2.0 * uniform01(rng) - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
}

}  // namespace

LinkSpec::LinkSpec(std::vector<NakagamiStage> stages) : stages_(std::move(stages)) {
    if (stages_.empty()) throw ParameterError("link spec needs at least one stage");
    for (const auto& stage : stages_) validate(stage);
}

LinkSpec LinkSpec::vehicular_default() {
    return LinkSpec({{1.0, 1.0}, {2.0, 2.0}});
}

LinkSpec LinkSpec::parse(const std::string& text) {
    std::string cleaned;
    for (char c : text)
        if (c != '(' && c != ')' && c != ' ') cleaned += c;

    std::vector<double> values;
    std::stringstream ss(cleaned);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw ParameterError("link spec '" + text + "' has an empty field");
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw ParameterError("link spec '" + text + "' has a non-numeric field '" + item + "'");
        }
        if (used != item.size())
            throw ParameterError("link spec '" + text + "' has a non-numeric field '" + item + "'");
        values.push_back(v);
    }
    if (values.empty() || values.size() % 2 != 0)
        throw ParameterError("link spec '" + text + "' must list (m,omega) pairs");

    std::vector<NakagamiStage> stages;
    for (std::size_t i = 0; i < values.size(); i += 2) stages.push_back({values[i], values[i + 1]});
    return LinkSpec(std::move(stages));
}

std::string LinkSpec::to_string() const {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < stages_.size(); ++i) {
        if (i) os << ',';
        os << stages_[i].m << ',' << stages_[i].omega;
    }
    return os.str();
}

double sample_standard_gamma(double shape, Rng& rng) {
    if (shape < 1.0) {
        const double boosted = sample_standard_gamma(shape + 1.0, rng);
        return boosted * std::pow(uniform_open01(rng), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = 0.0;
        double v = 0.0;
        do {
            x = standard_normal(rng);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform_open01(rng);
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double sample_gamma(double shape, double scale, Rng& rng) {
    if (!positive_finite(shape)) throw ParameterError("gamma shape must be positive and finite");
    if (!positive_finite(scale)) throw ParameterError("gamma scale must be positive and finite");
    return sample_standard_gamma(shape, rng) * scale;
}

ChannelGain sample_link_gain(const LinkSpec& spec, Rng& rng) {
    double gain = 1.0;
    for (const auto& stage : spec.stages()) gain *= sample_gamma(stage.m, stage.gamma_scale(), rng);
    return {gain};
}

double mean_link_gain(const LinkSpec& spec) noexcept {
    double mean = 1.0;
    for (const auto& stage : spec.stages()) mean *= stage.omega;
    return mean;
}

}  // namespace canoma
