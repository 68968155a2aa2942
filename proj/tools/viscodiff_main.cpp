// viscodiff command-line driver: simulate | hysteresis | sweep.
#include "viscodiff/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

int load_config(const std::string& path, viscodiff::ParsedConfig& out) {
    std::ifstream is(path);
    if (!is) {
        std::cerr << "i/o error: cannot read config file '" << path << "'\n";
        return viscodiff::kExitIo;
    }
    std::ostringstream buffer;
    buffer << is.rdbuf();
    try {
        out = viscodiff::parse_config(buffer.str());
    } catch (const viscodiff::ConfigError& err) {
        std::cerr << "config error in '" << path << "': " << err.what() << "\n";
        return viscodiff::kExitConfig;
    }
    return viscodiff::kExitOk;
}

template <class Config>
int expect_config(const viscodiff::ParsedConfig& parsed, const char* wanted, Config& out) {
    if (const Config* cfg = std::get_if<Config>(&parsed)) {
        out = *cfg;
        return viscodiff::kExitOk;
    }
    std::cerr << "config error: this command needs a [" << wanted << "] config\n";
    return viscodiff::kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "viscodiff: spectral Galerkin solver for viscously regularized diffusion,\n"
        "with a threshold (play-operator) hysteresis variant."};
    app.require_subcommand(1);

    // every run is deterministic; the flag is reserved and always rejected so
    // scripts relying on it fail loudly rather than silently
    bool seedless = false;
    app.add_flag("--seedless", seedless,
                 "reserved: outputs are deterministic by construction (no RNG anywhere); "
                 "passing this flag is an error");

    std::string config_path;
    std::string out_dir = ".";
    std::string param;
    std::vector<double> values;

    CLI::App* simulate = app.add_subcommand("simulate", "run a diffusion experiment");
    simulate->add_option("config", config_path, "config file")->required();
    simulate->add_option("--out", out_dir, "output directory");

    CLI::App* hysteresis = app.add_subcommand("hysteresis", "run a hysteresis experiment");
    hysteresis->add_option("config", config_path, "config file")->required();
    hysteresis->add_option("--out", out_dir, "output directory");

    CLI::App* sweep = app.add_subcommand("sweep", "run one experiment per parameter value");
    sweep->add_option("config", config_path, "base config file")->required();
    sweep->add_option("--param", param, "one of beta, n, dt, tau, A, gamma, epsilon")
        ->required();
    sweep->add_option("--values", values, "comma-separated list of values")
        ->required()
        ->delimiter(',');
    sweep->add_option("--out", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    if (seedless) {
        std::cerr << "config error: --seedless is reserved; viscodiff uses no randomness and "
                     "every output is already deterministic\n";
        return viscodiff::kExitConfig;
    }

    viscodiff::ParsedConfig parsed;
    if (const int rc = load_config(config_path, parsed); rc != viscodiff::kExitOk) return rc;

    if (simulate->parsed()) {
        viscodiff::SimulationConfig cfg;
        if (const int rc = expect_config(parsed, "simulate", cfg); rc != viscodiff::kExitOk)
            return rc;
        return viscodiff::cmd_simulate(cfg, out_dir, std::cout);
    }
    if (hysteresis->parsed()) {
        viscodiff::HysteresisConfig cfg;
        if (const int rc = expect_config(parsed, "hysteresis", cfg); rc != viscodiff::kExitOk)
            return rc;
        return viscodiff::cmd_hysteresis(cfg, out_dir, std::cout);
    }
    return viscodiff::cmd_sweep(parsed, param, values, out_dir, std::cout);
}
