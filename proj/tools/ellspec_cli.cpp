#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <ellspec/cli/commands.hpp>

namespace
{

bool write_file(const std::string &path, const std::string &content)
{
    std::ofstream f(path, std::ios::binary);
    f << content;
    return static_cast<bool>(f);
}

}

int main(int argc, char **argv)
{
    CLI::App app{"ellspec: spectral curves of the d-bar problem on punctured elliptic curves"};
    app.require_subcommand(1);

    std::string config_path;
    unsigned threads = 1;
    std::string out;
    std::optional<std::int64_t> seed;

    const char *names[][2] = {
        {"eval", "Tabulate sigma, zeta, p or phi"},
        {"curve", "Sample the spectral curve over a grid"},
        {"beta", "Degenerate multipliers and their beta polynomial"},
        {"monodromy", "Sheet monodromy and alpha -> 0 classification"},
        {"verify", "Run the invariant suite (exit 1 on failure)"},
        {"surface", "Weierstrass surface mesh and planar-end report"},
    };
    for (const auto &n : names) {
        auto *sub = app.add_subcommand(n[0], n[1]);
        sub->add_option("--config", config_path, "JSON job configuration")->required();
        sub->add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 256u));
        sub->add_option("--out", out, "primary output path (default: config output.path, else stdout)");
        sub->add_option("--seed", seed, "seed overriding the config");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : ellspec::cli::ExitConfig;
    }
    const std::string cmd = app.get_subcommands().front()->get_name();

    ellspec::cli::RunOptions opts;
    opts.threads = threads;
    opts.out = out;
    if (seed) {
        opts.seed = static_cast<std::uint64_t>(*seed);
    }

    ellspec::cli::CommandResult res;
    std::string primary;
    try {
        const auto cfg = ellspec::cli::load_config(config_path);
        primary = opts.out.empty() ? cfg.output_path : opts.out;
        res = ellspec::cli::run_command(cmd, cfg, opts);
    } catch (const ellspec::cli::ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return ellspec::cli::ExitConfig;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return ellspec::cli::ExitPartial;
    }

    if (primary.empty()) {
        std::cout << res.text;
    } else if (!write_file(primary, res.text)) {
        std::cerr << "cannot write '" << primary << "'\n";
        return ellspec::cli::ExitConfig;
    }
    for (const auto &[path, content] : res.files) {
        if (!write_file(path, content)) {
            std::cerr << "cannot write '" << path << "'\n";
            return ellspec::cli::ExitConfig;
        }
    }
    return res.exit_code;
}
