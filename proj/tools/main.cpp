#include "ipm1d/cli.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
    using namespace ipm1d::cli;
    CLI::App app{"ipm1d: nonlocal transport lab (transforms, inequality suites, simulations, diagnostics)"};
    app.require_subcommand(1);

    Options opt;
    std::uint64_t seed = 1;
    const auto add_common = [&](CLI::App* sub, bool with_config) {
        if (with_config) {
            sub->add_option("--config", opt.config_path, "INI config file")->check(CLI::ExistingFile);
        }
        sub->add_option("--out", opt.out_dir, "output directory (IPM1D_OUT overrides)");
        sub->add_option("--seed", seed, "random seed (overrides the config)");
        sub->add_option("--jobs", opt.jobs, "worker threads for independent rows")->check(CLI::PositiveNumber);
    };

    CLI::App* transform = app.add_subcommand("transform", "evaluate H_a by every route and cross-check");
    add_common(transform, true);
    CLI::App* verify = app.add_subcommand("verify", "run the inequality suites");
    add_common(verify, true);
    CLI::App* simulate = app.add_subcommand("simulate", "run the transport solver with diagnostics");
    add_common(simulate, true);
    CLI::App* reproduce = app.add_subcommand("reproduce", "run a canned scenario into a bundle directory");
    add_common(reproduce, false);
    std::string id;
    reproduce->add_option("id", id, "scenario id (an unknown id lists the known ones)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : BadConfig;
    }
    for (CLI::App* sub : {transform, verify, simulate, reproduce}) {
        if (sub->parsed() && sub->count("--seed") > 0) {
            opt.seed = seed;
        }
    }

    try {
        if (transform->parsed()) {
            return cmd_transform(opt, std::cerr);
        }
        if (verify->parsed()) {
            return cmd_verify(opt, std::cerr);
        }
        if (simulate->parsed()) {
            return cmd_simulate(opt, std::cerr);
        }
        return cmd_reproduce(id, opt, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Failed;
    }
}
