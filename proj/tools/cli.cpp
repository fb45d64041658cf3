#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "canoma/engine.hpp"
#include "canoma/error.hpp"
#include "canoma/oracle.hpp"

#ifndef CANOMA_VERSION
#define CANOMA_VERSION "0.0.0"
#endif

namespace canoma::cli {

std::string format_number(double v) {
    if (v == 0.0) return "0";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string data_rows(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::string rows;
    while (std::getline(in, line))
        if (line.empty() || line.front() != '#') rows += line + '\n';
    return rows;
}

namespace {

constexpr double kOracleAbsTol = 1e-8;  // oracle's own numerical accuracy

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string scheme = "canoma";
    std::string schemes;
    double snr_db = 10.0;
    double zeta = 0.8;
    std::size_t files = 10;
    std::string cache = "2";
    double alpha = 0.2;
    double theta = 1.0;
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 1;
    std::string ordering = "by-gain";
    std::string metric = "marg-product";
    std::string link_spec = "1,1,2,2";
    std::string link_spec_1;
    std::string link_spec_2;
    std::size_t vehicles = 2;
    std::string power_policy = "reallocate";
    std::string duplicates = "separate";
    std::string zipf_convention = "inverse";
    unsigned workers = 0;
    std::string sweep;
    std::string grid;
    double oracle_alpha = std::nan("");
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(' ');
        const auto e = item.find_last_not_of(' ');
        items.push_back(b == std::string::npos ? std::string() : item.substr(b, e - b + 1));
    }
    return items;
}

double parse_double(const std::string& flag, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw UsageError(flag + ": '" + text + "' is not a number");
    }
    if (used != text.size()) throw UsageError(flag + ": '" + text + "' is not a number");
    return v;
}

template <class T>
T parse_enum(const std::string& flag, const std::string& text, std::optional<T> (*parse)(std::string_view)) {
    auto v = parse(text);
    if (!v) throw UsageError(flag + ": unknown value '" + text + "'");
    return *v;
}

std::vector<Scheme> parse_schemes(const std::string& flag, const std::string& text) {
    std::vector<Scheme> out;
    for (const auto& item : split_list(text)) out.push_back(parse_enum<Scheme>(flag, item, parse_scheme));
    if (out.empty()) throw UsageError(flag + ": no schemes given");
    return out;
}

LinkSpec parse_link(const std::string& flag, const std::string& text) {
    try {
        return LinkSpec::parse(text);
    } catch (const ParameterError& e) {
        throw UsageError(flag + ": " + e.what());
    }
}

TrialConfig build_config(const Options& o) {
    TrialConfig c;
    auto& m = c.model;
    if (o.vehicles < 1) throw UsageError("--vehicles: need at least one vehicle");
    m.vehicles = o.vehicles;
    m.files = o.files;
    m.zeta = o.zeta;
    m.convention = parse_enum<ZipfConvention>("--zipf-convention", o.zipf_convention, parse_zipf_convention);
    m.snr_db = o.snr_db;
    m.alpha = o.alpha;
    m.theta = o.theta;
    m.ordering = parse_enum<OrderingPolicy>("--ordering", o.ordering, parse_ordering);
    m.power_policy = parse_enum<PowerPolicy>("--power-policy", o.power_policy, parse_power_policy);
    m.duplicates = parse_enum<DuplicatePolicy>("--duplicates", o.duplicates, parse_duplicate_policy);

    const auto caches = split_list(o.cache);
    if (caches.size() != 1 && caches.size() != o.vehicles)
        throw UsageError("--cache: give one capacity or one per vehicle");
    m.capacities.clear();
    for (std::size_t v = 0; v < o.vehicles; ++v) {
        const double c = parse_double("--cache", caches[caches.size() == 1 ? 0 : v]);
        if (c < 0.0 || c != std::floor(c)) throw UsageError("--cache: capacity must be a non-negative integer");
        m.capacities.push_back(static_cast<std::size_t>(c));
    }

    const LinkSpec shared = parse_link("--link-spec", o.link_spec);
    m.links.assign(o.vehicles, shared);
    if (!o.link_spec_1.empty()) m.links[0] = parse_link("--link-spec-1", o.link_spec_1);
    if (!o.link_spec_2.empty()) {
        if (o.vehicles < 2) throw UsageError("--link-spec-2: needs at least two vehicles");
        m.links[1] = parse_link("--link-spec-2", o.link_spec_2);
    }

    c.scheme = parse_enum<Scheme>("--scheme", o.scheme, parse_scheme);
    c.metric = parse_enum<Metric>("--metric", o.metric, parse_metric);
    c.trials = o.trials;
    c.seed = o.seed;
    c.workers = o.workers;
    if (c.trials < 1) throw UsageError("--trials: must be at least 1");

    try {
        c.validate();
    } catch (const ParameterError& e) {
        throw UsageError(std::string("--") + e.what());
    }
    return c;
}

std::vector<double> parse_grid(const std::string& text) {
    if (text.empty()) throw UsageError("--grid: no values given");
    std::vector<double> grid;
    for (const auto& item : split_list(text)) {
        if (item.empty()) throw UsageError("--grid: empty value in '" + text + "'");
        grid.push_back(parse_double("--grid", item));
    }
    return grid;
}

std::string canonical_command(const std::string& command, const TrialConfig& c, const Options& o) {
    const auto& m = c.model;
    std::ostringstream os;
    os << command;
    if (command == "point") os << " --scheme " << to_string(c.scheme);
    if (command != "point" && !o.schemes.empty()) os << " --schemes " << o.schemes;
    if (!o.sweep.empty()) os << " --sweep " << o.sweep << " --grid " << o.grid;
    os << " --snr-db " << format_number(m.snr_db) << " --zeta " << format_number(m.zeta) << " --files " << m.files
       << " --cache ";
    for (std::size_t v = 0; v < m.capacities.size(); ++v) os << (v ? "," : "") << m.capacities[v];
    os << " --alpha " << format_number(m.alpha) << " --theta " << format_number(m.theta) << " --trials "
       << c.trials << " --seed " << c.seed << " --ordering " << to_string(m.ordering) << " --metric "
       << to_string(c.metric) << " --vehicles " << m.vehicles;
    const LinkSpec& shared = m.links.size() > 2 ? m.links.back() : m.links[0];
    os << " --link-spec " << shared.to_string();
    if (!(m.links[0] == shared)) os << " --link-spec-1 " << m.links[0].to_string();
    if (m.links.size() >= 2 && !(m.links[1] == shared)) os << " --link-spec-2 " << m.links[1].to_string();
    os << " --power-policy " << to_string(m.power_policy) << " --duplicates " << to_string(m.duplicates)
       << " --zipf-convention " << to_string(m.convention);
    return os.str();
}

std::string timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_manifest(std::ostream& out, const std::string& command, const TrialConfig& c, const Options& o) {
    out << "# tool: canoma-sim " << CANOMA_VERSION << '\n'
        << "# command: canoma-sim " << canonical_command(command, c, o) << '\n'
        << "# seed: " << c.seed << '\n'
        << "# snr: total transmit SNR P/sigma^2 in dB, noise variance 1\n"
        << "# timestamp: " << timestamp() << '\n';
}

constexpr const char* kTableHeader = "param,value,scheme,metric,p_joint,p_marg_product,p1,p2,stderr_joint,trials,seed";

void write_row(std::ostream& out, std::string_view param, double value, Scheme scheme, const TrialConfig& c,
               const Estimate& e) {
    out << param << ',' << format_number(value) << ',' << to_string(scheme) << ',' << to_string(c.metric) << ','
        << format_number(e.joint) << ',' << format_number(e.marg_product) << ','
        << format_number(e.marginals.at(0)) << ','
        << (e.marginals.size() > 1 ? format_number(e.marginals[1]) : std::string()) << ','
        << format_number(e.std_err_joint) << ',' << e.n << ',' << c.seed << '\n';
}

int cmd_point(const Options& o, std::ostream& out) {
    const TrialConfig c = build_config(o);
    const Estimate e = run_point(c);
    std::ostringstream buf;
    write_manifest(buf, "point", c, o);
    buf << kTableHeader << '\n';
    write_row(buf, to_string(SweepParameter::snr_db), c.model.snr_db, c.scheme, c, e);
    out << buf.str();
    return kOk;
}

SweepParameter sweep_parameter(const std::string& text) {
    if (text.empty()) throw UsageError("--sweep: required (snr_db|cache|zeta|files)");
    auto p = parse_sweep_parameter(text);
    if (!p) throw UsageError("--sweep: unknown parameter '" + text + "'");
    return *p;
}

std::vector<double> checked_grid(const TrialConfig& c, SweepParameter param, const std::string& text) {
    auto grid = parse_grid(text);
    for (double v : grid) {
        try {
            with_parameter(c.model, param, v).validate();
        } catch (const ParameterError& e) {
            throw UsageError(std::string("--grid: ") + e.what());
        }
    }
    return grid;
}

int cmd_sweep(const Options& o, std::ostream& out) {
    const TrialConfig c = build_config(o);
    const auto param = sweep_parameter(o.sweep);
    const auto grid = checked_grid(c, param, o.grid);
    const auto schemes = parse_schemes("--schemes", o.schemes.empty() ? o.scheme : o.schemes);

    ResultTable table;
    try {
        table = sweep(c, param, grid, schemes);
    } catch (const ParameterError& e) {
        throw UsageError(std::string("--grid: ") + e.what());
    }
    std::ostringstream buf;
    write_manifest(buf, "sweep", c, o);
    buf << kTableHeader << '\n';
    for (const auto& row : table.rows) write_row(buf, to_string(param), row.value, row.scheme, c, row.estimate);
    out << buf.str();
    return kOk;
}

struct CheckPoint {
    ModelParams model;
};

int cmd_oracle_check(const Options& o, std::ostream& out, std::ostream& err, bool metric_given) {
    const TrialConfig base = build_config(o);
    try {
        check_oracle_support(base.model);
    } catch (const UnsupportedError& e) {
        throw UsageError(std::string("oracle-check: unsupported configuration: ") + e.what());
    }
    const auto schemes =
        parse_schemes("--schemes", o.schemes.empty() ? std::string("canoma,noma,oma-cache,oma") : o.schemes);
    std::vector<Metric> metrics{Metric::joint, Metric::marg_product};
    if (metric_given) metrics = {base.metric};

    std::vector<ModelParams> points;
    if (!o.sweep.empty()) {
        const auto param = sweep_parameter(o.sweep);
        auto grid = checked_grid(base, param, o.grid);
        std::sort(grid.begin(), grid.end());
        for (double v : grid) points.push_back(with_parameter(base.model, param, v));
    } else {
        const std::pair<std::size_t, std::size_t> catalogs[] = {{10, 0}, {10, 2}, {10, 5}, {50, 2}};
        for (double zeta : {0.4, 0.8, 1.6})
            for (auto [t, cap] : catalogs)
                for (double snr : {0.0, 5.0, 10.0, 15.0, 20.0}) {
                    ModelParams m = base.model;
                    m.zeta = zeta;
                    m.files = t;
                    m.set_capacity(cap);
                    m.snr_db = snr;
                    points.push_back(m);
                }
    }

    std::ostringstream buf;
    write_manifest(buf, "oracle-check", base, o);
    buf << "snr_db,zeta,files,cache,scheme,metric,p_mc,p_oracle,stderr,abs_z,status,trials,seed\n";
    std::size_t failures = 0;
    for (const auto& point : points) {
        TrialConfig c = base;
        c.model = point;
        const auto estimates = run_point_schemes(c, schemes);
        ModelParams oracle_model = point;
        if (!std::isnan(o.oracle_alpha)) oracle_model.alpha = o.oracle_alpha;
        for (std::size_t s = 0; s < schemes.size(); ++s) {
            const OracleResult exact = success_prob(schemes[s], oracle_model);
            for (Metric metric : metrics) {
                const double p_mc = estimates[s].value(metric);
                const double p_or = exact.value(metric);
                const double se = estimates[s].std_err_of(metric);
                const double delta = std::abs(p_mc - p_or);
                const bool pass = delta <= 4.0 * se + kOracleAbsTol;
                const double z = se > 0.0 ? delta / se : (delta <= kOracleAbsTol ? 0.0 : INFINITY);
                if (!pass) ++failures;
                buf << format_number(point.snr_db) << ',' << format_number(point.zeta) << ',' << point.files << ','
                    << point.capacities.front() << ',' << to_string(schemes[s]) << ',' << to_string(metric) << ','
                    << format_number(p_mc) << ',' << format_number(p_or) << ',' << format_number(se) << ','
                    << (std::isinf(z) ? std::string("inf") : format_number(z)) << ',' << (pass ? "ok" : "FAIL")
                    << ',' << c.trials << ',' << c.seed << '\n';
            }
        }
    }
    out << buf.str();
    if (failures) {
        err << "oracle-check: " << failures << " row(s) outside 4 standard errors (status FAIL)\n";
        return kOracleMismatch;
    }
    return kOk;
}

void add_model_flags(CLI::App* app, Options& o) {
    app->add_option("--snr-db", o.snr_db, "total transmit SNR in dB");
    app->add_option("--zeta", o.zeta, "Zipf parameter");
    app->add_option("--files", o.files, "catalog size T");
    app->add_option("--cache", o.cache, "per-vehicle cache capacity C (one value or one per vehicle)");
    app->add_option("--alpha", o.alpha, "power fraction of the strongest vehicle, in (0,1)");
    app->add_option("--theta", o.theta, "SINR threshold (linear)");
    app->add_option("--trials", o.trials, "Monte Carlo trials per point");
    app->add_option("--seed", o.seed, "base seed");
    app->add_option("--ordering", o.ordering, "by-gain|fixed");
    app->add_option("--metric", o.metric, "marg-product|joint");
    app->add_option("--link-spec", o.link_spec, "cascade as m1,omega1,m2,omega2,...");
    app->add_option("--link-spec-1", o.link_spec_1, "override for vehicle 1");
    app->add_option("--link-spec-2", o.link_spec_2, "override for vehicle 2");
    app->add_option("--vehicles", o.vehicles, "number of vehicles");
    app->add_option("--power-policy", o.power_policy, "reallocate|idle");
    app->add_option("--duplicates", o.duplicates, "separate|merge");
    app->add_option("--zipf-convention", o.zipf_convention, "inverse|standard");
    app->add_option("--workers", o.workers, "worker threads (0 = all cores)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cache-aided NOMA downlink Monte Carlo simulator", "canoma-sim"};
    app.require_subcommand(1);
    Options o;

    auto* point = app.add_subcommand("point", "estimate one operating point");
    add_model_flags(point, o);
    point->add_option("--scheme", o.scheme, "canoma|noma|oma-cache|oma");

    auto* sweep_cmd = app.add_subcommand("sweep", "sweep one parameter over a grid");
    add_model_flags(sweep_cmd, o);
    sweep_cmd->add_option("--scheme", o.scheme, "single scheme");
    sweep_cmd->add_option("--schemes", o.schemes, "comma-separated schemes");
    sweep_cmd->add_option("--sweep", o.sweep, "snr_db|cache|zeta|files");
    sweep_cmd->add_option("--grid", o.grid, "comma-separated grid values");

    auto* check = app.add_subcommand("oracle-check", "compare Monte Carlo against the semi-analytic oracle");
    add_model_flags(check, o);
    check->add_option("--schemes", o.schemes, "comma-separated schemes (default: all)");
    check->add_option("--sweep", o.sweep, "snr_db|cache|zeta|files (default: acceptance grid)");
    check->add_option("--grid", o.grid, "comma-separated grid values");
    check->add_option("--oracle-alpha", o.oracle_alpha, "alpha fed to the oracle only")->group("");

    auto* version = app.add_subcommand("version", "print the tool version");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (version->parsed()) {
            out << "canoma-sim " << CANOMA_VERSION << '\n';
            return kOk;
        }
        if (point->parsed()) return cmd_point(o, out);
        if (sweep_cmd->parsed()) return cmd_sweep(o, out);
        if (check->parsed()) return cmd_oracle_check(o, out, err, check->count("--metric") > 0);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kUsage;
}

}  // namespace canoma::cli
