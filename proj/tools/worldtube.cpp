// worldtube verify|compare|sweep --config <path> [--out <dir>] [--threads N] [--seed S]

#include "worldtube/config.hpp"
#include "worldtube/experiments.hpp"
#include "worldtube/quadrature.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>

namespace {

struct Options
{
    std::string config;
    std::optional<std::string> out;
    std::optional<int> threads;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Options& o)
{
    cmd->add_option("--config", o.config, "JSON experiment configuration")->required();
    cmd->add_option("--out", o.out, "output directory (default: output.dir of the config, ./out)");
    cmd->add_option("--threads", o.threads, "worker threads (default: WORLDTUBE_THREADS, else all cores)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", o.seed, "RNG seed (overrides the config)");
}

int thread_setting(const Options& o)
{
    if (o.threads) return *o.threads;
    if (const char* env = std::getenv("WORLDTUBE_THREADS"))
    {
        try
        {
            const int n = std::stoi(env);
            if (n >= 0) return n;
        }
        catch (const std::exception&)
        {
        }
        std::cerr << "worldtube: ignoring invalid WORLDTUBE_THREADS=" << env << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Retarded potentials of an accelerated charged shell against a point charge"};
    app.require_subcommand(1);
    Options opts;
    CLI::App* verify = app.add_subcommand("verify", "run the invariant suites");
    CLI::App* compare = app.add_subcommand("compare", "shell against point charge for each test function");
    CLI::App* sweep = app.add_subcommand("sweep", "eps sweep and log-log slope");
    for (CLI::App* cmd : {verify, compare, sweep}) add_common(cmd, opts);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    worldtube::ExperimentConfig config;
    try
    {
        config = worldtube::load_config(opts.config);
        if (opts.seed) config.seed = *opts.seed;
        if (opts.out) config.output_dir = *opts.out;
    }
    catch (const worldtube::ConfigError& e)
    {
        std::cerr << "worldtube: config error: " << e.what() << '\n';
        return 2;
    }
    worldtube::set_thread_count(thread_setting(opts));

    try
    {
        worldtube::RunResult result;
        if (verify->parsed())
            result = worldtube::run_verify(config, config.output_dir);
        else if (compare->parsed())
            result = worldtube::run_compare(config, config.output_dir);
        else
            result = worldtube::run_sweep(config, config.output_dir);

        if (verify->parsed())
            std::cout << "verify: " << (result.exit_code == 0 ? "all checks passed" : "some checks FAILED") << '\n';
        else if (result.report.contains("verdict"))
            std::cout << "verdict: " << result.report["verdict"].get<std::string>() << '\n';
        else
            for (const auto& t : result.report["test_functions"])
                std::cout << "test function " << t["index"] << ": slope " << t["slope"] << ", smallest-eps ratio "
                          << t["smallest_eps_ratio"] << '\n';
        std::cout << "wrote " << config.output_dir << "/report.json and results.csv\n";
        return result.exit_code;
    }
    catch (const worldtube::ConfigError& e)
    {
        std::cerr << "worldtube: config error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception& e)
    {
        std::cerr << "worldtube: " << e.what() << '\n';
        return 1;
    }
}
