#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "aniso/experiment.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Anisotropic surface measures and convolution-power decay"};
    std::string command, config, e_text;
    aniso::ExperimentConfig flags;
    std::uint64_t seed = 0;

    auto* o_command = app.add_option("command", command, "sigma | integrate | classify | decay | checks (or [run] command)");
    app.add_option("--config", config, "INI file with [run] [function] [region] [lattice] sections");
    auto* o_fixture = app.add_option("--fixture", flags.fixture, "lattice fixture name or .lat path");
    auto* o_p = app.add_option("--P", flags.function, "built-in function: euclid<d>, euclidsq<d>, p1, p2, weierstrass");
    auto* o_e = app.add_option("--E", e_text, "exponent, row-major entries separated by commas");
    auto* o_region = app.add_option("--region", flags.region, "all | none | quadrant | half:<axis>[+-] | arc:<lo>:<hi>");
    auto* o_k = app.add_option("--K", flags.k_half, "half-width of the box K = [-K, K]^d");
    auto* o_nmin = app.add_option("--nmin", flags.n_min, "smallest n of the decay schedule");
    auto* o_nmax = app.add_option("--nmax", flags.n_max, "largest n of the decay schedule");
    auto* o_samples = app.add_option("--samples", flags.samples, "Monte Carlo sample count");
    auto* o_seed = app.add_option("--seed", seed, "random seed");
    auto* o_out = app.add_option("--out", flags.out_dir, "output directory (default $ANISO_OUT_DIR/<command>)");
    auto* o_method = app.add_option("--method", flags.method, "fft | direct");
    auto* o_suite = app.add_option("--suite", flags.suite, "group_laws | properties | vdc | all");
    auto* o_timing = app.add_flag("--timing", flags.timing, "record runtime_ms in the decay CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        aniso::ExperimentConfig cfg = config.empty() ? aniso::ExperimentConfig{} : aniso::load_config(config);
        if (o_command->count())
            cfg.command = command;
        if (cfg.command.empty())
            throw aniso::ConfigError("no command given");
        if (o_fixture->count())
            cfg.fixture = flags.fixture;
        if (o_p->count())
            cfg.function = flags.function;
        if (o_e->count()) {
            cfg.exponent.clear();
            std::string tok;
            for (char ch : e_text + ",") {
                if (ch == ',' || ch == ' ') {
                    if (!tok.empty())
                        cfg.exponent.push_back(std::stod(tok));
                    tok.clear();
                } else {
                    tok += ch;
                }
            }
        }
        if (o_region->count())
            cfg.region = flags.region;
        if (o_k->count())
            cfg.k_half = flags.k_half;
        if (o_nmin->count())
            cfg.n_min = flags.n_min;
        if (o_nmax->count())
            cfg.n_max = flags.n_max;
        if (o_samples->count())
            cfg.samples = flags.samples;
        if (o_seed->count())
            cfg.seed = seed;
        if (o_out->count())
            cfg.out_dir = flags.out_dir;
        if (o_method->count())
            cfg.method = flags.method;
        if (o_suite->count())
            cfg.suite = flags.suite;
        if (o_timing->count())
            cfg.timing = true;

        aniso::RunResult res = aniso::run(cfg, std::cout);
        for (const auto& f : res.failures)
            std::cerr << "FAILED: " << f << '\n';
        return res.exit_code;
    } catch (const aniso::ConfigError& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
