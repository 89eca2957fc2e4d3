#include "gmdhp/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#ifndef GMDHP_BUILD_ID
#define GMDHP_BUILD_ID "unknown"
#endif

namespace gmdhp {

namespace {

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

double to_double(const std::string& key, const std::string& value)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != value.size() || !std::isfinite(v))
        throw ConfigError("key '" + key + "': '" + value + "' is not a number");
    return v;
}

long long to_integer(const std::string& key, const std::string& value)
{
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != value.size())
        throw ConfigError("key '" + key + "': '" + value + "' is not an integer");
    return v;
}

int to_int(const std::string& key, const std::string& value)
{
    const long long v = to_integer(key, value);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        throw ConfigError("key '" + key + "': value out of range");
    return static_cast<int>(v);
}

std::uint64_t to_u64(const std::string& key, const std::string& value)
{
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        if (!value.empty() && value.front() != '-')
            v = std::stoull(value, &used, 0);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != value.size())
        throw ConfigError("key '" + key + "': '" + value + "' is not an unsigned integer");
    return v;
}

const std::set<std::string>& known_keys()
{
    static const std::set<std::string> keys = {
        "name", "output_path", "ci_target", "n_t", "n_r", "n_rf", "n_s", "L",
        "spacing_over_wavelength", "carrier_ghz", "snr_db_grid", "schemes",
        "channels_per_point", "symbols_per_channel", "master_seed"};
    return keys;
}

std::string format_double(double v, const char* fmt)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

std::filesystem::path sidecar(const std::string& output_path, const char* suffix)
{
    std::filesystem::path p(output_path);
    p.replace_extension();
    p += suffix;
    return p;
}

std::ofstream open_for_write(const std::filesystem::path& path)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return os;
}

void close_checked(std::ofstream& os, const std::filesystem::path& path)
{
    os.flush();
    if (!os)
        throw std::runtime_error("write to '" + path.string() + "' failed");
}

}  // namespace

void ExperimentSpec::validate() const
{
    if (name.empty())
        throw ConfigError("name must be nonempty");
    if (output_path.empty())
        throw ConfigError("output_path must be nonempty");
    if (ci_target && !(*ci_target > 0.0))
        throw ConfigError("ci_target must be positive");
    config.validate();
    if (config.schemes.empty())
        throw ConfigError("schemes must list at least one scheme");
    if (config.snr_db_grid.empty())
        throw ConfigError("snr_db_grid must contain at least one value");
}

ExperimentSpec default_spec()
{
    ExperimentSpec spec;
    spec.config.schemes = {Scheme::svd_digital, Scheme::svd_hybrid, Scheme::gmd_digital, Scheme::gmd_hybrid};
    spec.config.snr_db_grid = parse_snr_grid("-10:2:4");
    return spec;
}

ExperimentSpec fig3_spec()
{
    ExperimentSpec spec = default_spec();
    spec.name = "fig3_128x16";
    spec.output_path = "fig3.csv";
    // Two streams: with four, sigma_4 of a 4-path channel seen by a 16-element
    // receive array is often tiny and every scheme floors well above 1e-3.
    spec.config.n_s = 2;
    spec.config.channels_per_point = 1000;
    return spec;
}

ExperimentSpec fig4_spec()
{
    ExperimentSpec spec = default_spec();
    spec.name = "fig4_256x16";
    spec.output_path = "fig4.csv";
    spec.config.n_t = 256;
    spec.config.n_s = 2;
    spec.config.channels_per_point = 1000;
    spec.config.snr_db_grid = parse_snr_grid("-14:1:4");
    return spec;
}

std::vector<double> parse_snr_grid(std::string_view text)
{
    const std::string t = trim(text);
    std::vector<double> grid;
    if (t.find(':') != std::string::npos) {
        const auto parts = split(t, ':');
        if (parts.size() != 3)
            throw ConfigError("snr_db_grid range must be start:step:stop");
        const double start = to_double("snr_db_grid", parts[0]);
        const double step = to_double("snr_db_grid", parts[1]);
        const double stop = to_double("snr_db_grid", parts[2]);
        if (!(step > 0.0) || stop < start)
            throw ConfigError("snr_db_grid range needs step > 0 and stop >= start");
        const auto n = static_cast<long long>(std::floor((stop - start) / step + 1e-9));
        for (long long i = 0; i <= n; ++i)
            grid.push_back(start + static_cast<double>(i) * step);
        return grid;
    }
    for (const auto& item : split(t, ',')) {
        if (!item.empty())
            grid.push_back(to_double("snr_db_grid", item));
    }
    return grid;
}

void apply_setting(ExperimentSpec& spec, const std::string& key, const std::string& raw)
{
    const std::string value = trim(raw);
    SimConfig& c = spec.config;
    if (key == "name") spec.name = value;
    else if (key == "output_path") spec.output_path = value;
    else if (key == "ci_target") spec.ci_target = to_double(key, value);
    else if (key == "n_t") c.n_t = to_int(key, value);
    else if (key == "n_r") c.n_r = to_int(key, value);
    else if (key == "n_rf") c.n_rf = to_int(key, value);
    else if (key == "n_s") c.n_s = to_int(key, value);
    else if (key == "L") c.n_paths = to_int(key, value);
    else if (key == "spacing_over_wavelength") c.spacing_over_wavelength = to_double(key, value);
    else if (key == "carrier_ghz") c.carrier_ghz = to_double(key, value);
    else if (key == "snr_db_grid") c.snr_db_grid = parse_snr_grid(value);
    else if (key == "channels_per_point") c.channels_per_point = to_int(key, value);
    else if (key == "symbols_per_channel") c.symbols_per_channel = to_int(key, value);
    else if (key == "master_seed") c.master_seed = to_u64(key, value);
    else if (key == "schemes") {
        c.schemes.clear();
        for (const auto& name : split(value, ',')) {
            if (name.empty())
                continue;
            try {
                c.schemes.push_back(parse_scheme(name));
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
        }
    } else {
        throw ConfigError("unknown key: " + key);
    }
}

ExperimentSpec parse_config(std::string_view text)
{
    ExperimentSpec spec = default_spec();
    std::vector<std::string> unknown;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string body = trim(line);
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(std::string_view(body).substr(0, eq));
        if (!known_keys().contains(key)) {
            unknown.push_back(key);
            continue;
        }
        apply_setting(spec, key, body.substr(eq + 1));
    }
    if (!unknown.empty()) {
        std::string msg = "unknown keys:";
        for (const auto& k : unknown)
            msg += " " + k;
        throw ConfigError(msg);
    }
    spec.validate();
    return spec;
}

std::vector<BerPoint> run_sweep(const ExperimentSpec& spec, const RunOptions& opts)
{
    spec.validate();
    RunOptions run_opts = opts;
    if (spec.ci_target)
        run_opts.ci_target = spec.ci_target;

    std::vector<Scheme> schemes = spec.config.schemes;
    std::sort(schemes.begin(), schemes.end(),
              [](Scheme a, Scheme b) { return scheme_name(a) < scheme_name(b); });
    schemes.erase(std::unique(schemes.begin(), schemes.end()), schemes.end());
    std::vector<double> grid = spec.config.snr_db_grid;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<BerPoint> points;
    points.reserve(schemes.size() * grid.size());
    for (Scheme s : schemes) {
        for (double snr : grid) {
            if (opts.progress)
                std::fprintf(stderr, "[%s] %s @ %+.2f dB\n", spec.name.c_str(),
                             std::string(scheme_name(s)).c_str(), snr);
            points.push_back(run_ber_point(spec.config, s, snr, run_opts));
        }
    }
    return points;
}

void write_csv(std::ostream& os, const std::vector<BerPoint>& points)
{
    os << "scheme,snr_db,ber,bits,errors,trials,seed\n";
    for (const auto& p : points) {
        os << scheme_name(p.scheme) << ',' << format_double(p.snr_db, "%.6g") << ','
           << format_double(p.ber(), "%.9e") << ',' << p.bits << ',' << p.errors << ','
           << p.trials << ',' << p.seed << '\n';
    }
}

void write_plot_data(std::ostream& os, const std::vector<BerPoint>& points)
{
    std::vector<Scheme> schemes;
    std::vector<double> grid;
    for (const auto& p : points) {
        if (std::find(schemes.begin(), schemes.end(), p.scheme) == schemes.end())
            schemes.push_back(p.scheme);
        if (std::find(grid.begin(), grid.end(), p.snr_db) == grid.end())
            grid.push_back(p.snr_db);
    }
    std::sort(grid.begin(), grid.end());

    os << "snr_db";
    for (Scheme s : schemes)
        os << ',' << scheme_name(s);
    os << '\n';
    for (double snr : grid) {
        os << format_double(snr, "%.6g");
        for (Scheme s : schemes) {
            auto it = std::find_if(points.begin(), points.end(),
                                   [&](const BerPoint& p) { return p.scheme == s && p.snr_db == snr; });
            os << ',';
            if (it != points.end())
                os << format_double(it->ber(), "%.9e");
        }
        os << '\n';
    }
}

void write_metadata(std::ostream& os, const ExperimentSpec& spec, const RunOptions& opts)
{
    const SimConfig& c = spec.config;
    nlohmann::ordered_json j;
    j["name"] = spec.name;
    j["build"] = build_identity();
    j["output_path"] = spec.output_path;
    j["config"] = {
        {"n_t", c.n_t},
        {"n_r", c.n_r},
        {"n_rf", c.n_rf},
        {"n_s", c.n_s},
        {"L", c.n_paths},
        {"spacing_over_wavelength", c.spacing_over_wavelength},
        {"carrier_ghz", c.carrier_ghz},
        {"modulation", "16qam_gray"},
        {"snr_db_grid", c.snr_db_grid},
        {"channels_per_point", c.channels_per_point},
        {"symbols_per_channel", c.symbols_per_channel},
        {"master_seed", c.master_seed},
    };
    std::vector<std::string> names;
    for (Scheme s : c.schemes)
        names.emplace_back(scheme_name(s));
    j["config"]["schemes"] = names;
    if (spec.ci_target)
        j["ci_target"] = *spec.ci_target;
    else
        j["ci_target"] = nullptr;
    j["chunk_trials"] = opts.chunk_trials;
    os << j.dump(2) << '\n';
}

std::vector<BerPoint> run_sweep_to_files(const ExperimentSpec& spec, const RunOptions& opts)
{
    spec.validate();
    const std::filesystem::path csv_path(spec.output_path);
    const auto plot_path = sidecar(spec.output_path, ".plot.csv");
    const auto meta_path = sidecar(spec.output_path, ".meta.json");

    // Open everything up front so a bad path fails before the sweep runs.
    auto csv = open_for_write(csv_path);
    auto plot = open_for_write(plot_path);
    auto meta = open_for_write(meta_path);

    const std::vector<BerPoint> points = run_sweep(spec, opts);
    write_csv(csv, points);
    close_checked(csv, csv_path);
    write_plot_data(plot, points);
    close_checked(plot, plot_path);
    write_metadata(meta, spec, opts);
    close_checked(meta, meta_path);
    return points;
}

std::string build_identity() { return GMDHP_BUILD_ID; }

}  // namespace gmdhp
