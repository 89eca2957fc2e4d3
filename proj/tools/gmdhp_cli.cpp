// gmdhp: BER sweeps for SVD- and GMD-based hybrid precoding.

#include "gmdhp/experiment.hpp"
#include "gmdhp/gmd_check.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr const char* kThreadsEnv = "GMDHP_THREADS";

struct CommonFlags {
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<std::string> out;
    std::optional<double> ci_target;
    std::vector<std::string> overrides;
    bool to_stdout = false;
};

void add_common(CLI::App* cmd, CommonFlags& f)
{
    cmd->add_option("--seed", f.seed, "Master RNG seed");
    cmd->add_option("--threads", f.threads, "Worker threads (default: $GMDHP_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", f.out, "Output CSV path");
    cmd->add_option("--ci-target", f.ci_target, "Relative 95% CI half-width for early stopping");
    cmd->add_option("--set", f.overrides, "Override a config key: --set key=value (repeatable)");
    cmd->add_flag("--stdout", f.to_stdout, "Write the CSV to standard output instead of files");
}

gmdhp::RunOptions run_options(const CommonFlags& f)
{
    gmdhp::RunOptions opts;
    if (f.threads) {
        opts.threads = *f.threads;
    } else if (const char* env = std::getenv(kThreadsEnv); env && *env) {
        opts.threads = std::max(0, std::atoi(env));
    }
    return opts;
}

void apply_flags(gmdhp::ExperimentSpec& spec, const CommonFlags& f)
{
    for (const auto& kv : f.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw gmdhp::ConfigError("--set expects key=value, got '" + kv + "'");
        gmdhp::apply_setting(spec, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (f.seed)
        spec.config.master_seed = *f.seed;
    if (f.out)
        spec.output_path = *f.out;
    if (f.ci_target)
        spec.ci_target = *f.ci_target;
    spec.validate();
}

int execute(gmdhp::ExperimentSpec spec, const CommonFlags& f)
{
    apply_flags(spec, f);
    const auto opts = run_options(f);
    if (f.to_stdout) {
        const auto points = gmdhp::run_sweep(spec, opts);
        gmdhp::write_csv(std::cout, points);
    } else {
        gmdhp::run_sweep_to_files(spec, opts);
        std::fprintf(stderr, "wrote %s\n", spec.output_path.c_str());
    }
    return 0;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"GMD-based hybrid precoding BER simulator"};
    app.require_subcommand(1);

    CommonFlags run_flags;
    std::string config_path;
    auto* run = app.add_subcommand("run", "Sweep schemes and SNRs from a config file");
    run->add_option("config", config_path, "key = value config file (omit for defaults)");
    add_common(run, run_flags);

    CommonFlags fig3_flags;
    auto* fig3 = app.add_subcommand("fig3", "128x16 system, all schemes, -10..4 dB");
    add_common(fig3, fig3_flags);

    CommonFlags fig4_flags;
    auto* fig4 = app.add_subcommand("fig4", "256x16 system, all schemes, -14..4 dB");
    add_common(fig4, fig4_flags);

    int check_instances = 1000;
    std::uint64_t check_seed = 1;
    auto* check = app.add_subcommand("gmd-check", "Check decomposition invariants on random channels");
    check->add_option("--instances", check_instances, "Number of random channels")->check(CLI::PositiveNumber);
    check->add_option("--seed", check_seed, "RNG seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            gmdhp::ExperimentSpec spec =
                config_path.empty() ? gmdhp::default_spec() : gmdhp::parse_config(read_file(config_path));
            return execute(std::move(spec), run_flags);
        }
        if (*fig3)
            return execute(gmdhp::fig3_spec(), fig3_flags);
        if (*fig4)
            return execute(gmdhp::fig4_spec(), fig4_flags);
        if (*check) {
            const auto rep = gmdhp::run_gmd_check(check_instances, check_seed);
            std::cout << rep.summary() << '\n';
            std::cout << (rep.passed() ? "PASS" : "FAIL") << '\n';
            return rep.passed() ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
