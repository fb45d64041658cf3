#include "canoma/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "canoma/error.hpp"

namespace canoma {

void TrialConfig::validate() const {
    model.validate();
    if (trials < 1) throw ParameterError("trials: must be at least 1");
}

Counts::Counts(std::size_t vehicles) : ok(vehicles, 0), pair(vehicles * vehicles, 0) {}

Counts& Counts::operator+=(const Counts& other) {
    n += other.n;
    for (std::size_t i = 0; i < ok.size(); ++i) ok[i] += other.ok[i];
    for (std::size_t i = 0; i < pair.size(); ++i) pair[i] += other.pair[i];
    joint += other.joint;
    strong += other.strong;
    weak += other.weak;
    return *this;
}

namespace {

constexpr double kZ95 = 1.959963984540054;

double binomial_stderr(double p, double n) { return std::sqrt(std::max(0.0, p * (1.0 - p)) / n); }

}  // namespace

Estimate summarize(const Counts& counts, Metric metric) {
    if (counts.n == 0) throw ParameterError("cannot summarize zero trials");
    const std::size_t vehicles = counts.ok.size();
    for (auto c : counts.ok)
        if (c > counts.n) throw ParameterError("success count exceeds trial count");
    if (counts.joint > counts.n || counts.strong > counts.n || counts.weak > counts.n)
        throw ParameterError("success count exceeds trial count");

    const double n = static_cast<double>(counts.n);
    Estimate e;
    e.metric = metric;
    e.n = counts.n;
    e.marginals.resize(vehicles);
    for (std::size_t i = 0; i < vehicles; ++i) e.marginals[i] = static_cast<double>(counts.ok[i]) / n;
    e.joint = static_cast<double>(counts.joint) / n;
    e.std_err_joint = binomial_stderr(e.joint, n);
    e.strong = static_cast<double>(counts.strong) / n;
    e.weak = static_cast<double>(counts.weak) / n;

    // Delta method for prod_i p_i with the empirical covariance of the
    // per-vehicle success indicators.
    e.marg_product = 1.0;
    for (double p : e.marginals) e.marg_product *= p;
    std::vector<double> grad(vehicles, 1.0);
    for (std::size_t i = 0; i < vehicles; ++i)
        for (std::size_t k = 0; k < vehicles; ++k)
            if (k != i) grad[i] *= e.marginals[k];
    double var = 0.0;
    for (std::size_t i = 0; i < vehicles; ++i) {
        for (std::size_t j = 0; j < vehicles; ++j) {
            const double pij = i == j ? e.marginals[i] : static_cast<double>(counts.pair[i * vehicles + j]) / n;
            var += grad[i] * grad[j] * (pij - e.marginals[i] * e.marginals[j]);
        }
    }
    e.std_err_marg_product = std::sqrt(std::max(0.0, var) / n);

    e.p_hat = e.value(metric);
    e.std_err = e.std_err_of(metric);
    e.ci_low = std::clamp(e.p_hat - kZ95 * e.std_err, 0.0, e.p_hat);
    e.ci_high = std::clamp(e.p_hat + kZ95 * e.std_err, e.p_hat, 1.0);
    return e;
}

namespace {
const ModelParams& validated(const ModelParams& params) {
    params.validate();
    return params;
}
}  // namespace

PreparedModel::PreparedModel(const ModelParams& params)
    : params_(validated(params)),
      profile_(zipf_profile(Catalog(params.files), params.zeta, params.convention)),
      alloc_(split_power(params.total_power(), params.alpha, params.vehicles)),
      thresholds_(params.theta) {
    for (auto c : params_.capacities) caches_.push_back(place_cache(profile_, c));
}

TrialDraw draw_trial(const PreparedModel& model, std::uint64_t seed, std::uint64_t trial) {
    const auto& p = model.params();
    TrialDraw d;
    d.requests.resize(p.vehicles);
    d.gains.resize(p.vehicles);
    for (std::size_t v = 0; v < p.vehicles; ++v) {
        Rng rng = trial_stream(seed, trial, kRequestStream + v);
        d.requests[v] = sample_request(model.profile(), rng);
    }
    for (std::size_t v = 0; v < p.vehicles; ++v) {
        Rng rng = trial_stream(seed, trial, kChannelStream + v);
        d.gains[v] = sample_link_gain(p.links[v], rng);
    }
    d.scenario = classify_scenario(view(d.requests), model.caches());
    d.ordering = order_users(view(d.gains), p.ordering);
    return d;
}

Outcome decode_trial(const PreparedModel& model, const TrialDraw& draw, Scheme scheme) {
    const auto& p = model.params();
    const auto options = AccessOptions::for_scheme(scheme, p.power_policy, p.duplicates);
    const auto theta = model.thresholds().for_requests(view(draw.requests));
    if (is_noma(scheme))
        return decode_noma(view(draw.gains), model.allocation(), view(theta), draw.scenario, draw.ordering, options);
    return decode_oma(view(draw.gains), model.allocation().total, view(theta), draw.scenario, options);
}

namespace {

void tally(Counts& c, const Outcome& o, const UserOrdering& ordering) {
    const std::size_t n = o.ok.size();
    ++c.n;
    bool all = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (!o[i]) {
            all = false;
            continue;
        }
        ++c.ok[i];
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && o[j]) ++c.pair[i * n + j];
    }
    if (all) ++c.joint;
    if (o[ordering.strongest()]) ++c.strong;
    if (o[ordering.weakest()]) ++c.weak;
}

unsigned resolve_workers(unsigned requested, std::uint64_t trials) {
    unsigned w = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::uint64_t>(w, trials));
}

}  // namespace

std::vector<Estimate> run_point_schemes(const TrialConfig& config, std::span<const Scheme> schemes) {
    config.validate();
    const PreparedModel model(config.model);
    const std::size_t vehicles = config.model.vehicles;
    const unsigned workers = resolve_workers(config.workers, config.trials);

    std::vector<std::vector<Counts>> partial(workers, std::vector<Counts>(schemes.size(), Counts(vehicles)));
    auto work = [&](unsigned w) {
        const std::uint64_t begin = config.trials * w / workers;
        const std::uint64_t end = config.trials * (w + 1) / workers;
        auto& counts = partial[w];
        for (std::uint64_t t = begin; t < end; ++t) {
            const TrialDraw draw = draw_trial(model, config.seed, t);
            for (std::size_t s = 0; s < schemes.size(); ++s)
                tally(counts[s], decode_trial(model, draw, schemes[s]), draw.ordering);
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }

    std::vector<Estimate> out;
    for (std::size_t s = 0; s < schemes.size(); ++s) {
        Counts total(vehicles);
        for (const auto& p : partial) total += p[s];
        out.push_back(summarize(total, config.metric));
    }
    return out;
}

Estimate run_point(const TrialConfig& config) {
    const Scheme scheme[] = {config.scheme};
    return run_point_schemes(config, scheme).front();
}

std::string_view to_string(SweepParameter p) noexcept {
    switch (p) {
        case SweepParameter::snr_db: return "snr_db";
        case SweepParameter::cache_size: return "cache";
        case SweepParameter::zeta: return "zeta";
        case SweepParameter::catalog_files: return "files";
    }
    return "?";
}

std::optional<SweepParameter> parse_sweep_parameter(std::string_view text) noexcept {
    for (auto p : {SweepParameter::snr_db, SweepParameter::cache_size, SweepParameter::zeta,
                   SweepParameter::catalog_files})
        if (text == to_string(p)) return p;
    return std::nullopt;
}

namespace {

std::string show(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::size_t as_count(SweepParameter param, double value) {
    if (!std::isfinite(value) || value < 0.0 || value != std::floor(value) || value > 1e15)
        throw ParameterError(std::string(to_string(param)) + ": grid value " + show(value) +
                             " is not a non-negative integer");
    return static_cast<std::size_t>(value);
}

}  // namespace

ModelParams with_parameter(const ModelParams& base, SweepParameter param, double value) {
    ModelParams m = base;
    const std::string prefix = std::string(to_string(param)) + ": grid value " + show(value);
    switch (param) {
        case SweepParameter::snr_db:
            if (!std::isfinite(value)) throw ParameterError(prefix + " is not finite");
            m.snr_db = value;
            break;
        case SweepParameter::cache_size: {
            const auto c = as_count(param, value);
            if (c > m.files) throw ParameterError(prefix + " exceeds files " + std::to_string(m.files));
            m.set_capacity(c);
            break;
        }
        case SweepParameter::zeta:
            if (!(value > 0.0)) throw ParameterError(prefix + " must be positive");
            m.zeta = value;
            break;
        case SweepParameter::catalog_files: {
            const auto t = as_count(param, value);
            if (t < 1) throw ParameterError(prefix + " must be at least 1");
            for (auto c : m.capacities)
                if (c > t) throw ParameterError(prefix + " is below cache capacity " + std::to_string(c));
            m.files = t;
            break;
        }
    }
    return m;
}

ResultTable sweep(const TrialConfig& config, SweepParameter parameter, std::vector<double> grid,
                  std::vector<Scheme> schemes) {
    if (grid.empty()) throw ParameterError(std::string(to_string(parameter)) + ": grid is empty");
    if (schemes.empty()) throw ParameterError("schemes: list is empty");
    std::sort(grid.begin(), grid.end());
    if (std::adjacent_find(grid.begin(), grid.end()) != grid.end())
        throw ParameterError(std::string(to_string(parameter)) + ": grid has duplicate values");
    std::sort(schemes.begin(), schemes.end(),
              [](Scheme a, Scheme b) { return to_string(a) < to_string(b); });
    schemes.erase(std::unique(schemes.begin(), schemes.end()), schemes.end());

    std::vector<ModelParams> points;
    for (double v : grid) points.push_back(with_parameter(config.model, parameter, v));

    ResultTable table;
    table.parameter = parameter;
    table.grid = grid;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        TrialConfig point = config;
        point.model = points[g];
        const auto estimates = run_point_schemes(point, schemes);
        for (std::size_t s = 0; s < schemes.size(); ++s) table.rows.push_back({grid[g], schemes[s], estimates[s]});
    }
    return table;
}

}  // namespace canoma
