#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "gp/errors.hpp"
#include "runner/commands.hpp"
#include "runner/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Gurtin-Pipkin heat equation laboratory"};
    app.set_version_flag("--version", std::string(runner::kToolVersion));

    std::string config_path;
    std::string out_override;
    int threads_override = -1;
    app.add_option("config", config_path, "JSON run configuration")->required();
    app.add_option("--out", out_override, "output directory, overrides the config");
    app.add_option("--threads", threads_override, "worker threads, 0 means all cores");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        runner::RunConfig cfg = runner::parse_config(config_path);
        if (!out_override.empty()) {
            cfg.out = out_override;
            cfg.echo["out"] = out_override;
        }
        if (threads_override >= 0) {
            cfg.threads = threads_override;
            cfg.echo["threads"] = threads_override;
        }
        const runner::RunManifest man = runner::run(cfg);
        std::printf("%s: wrote %zu file(s) to %s\n", cfg.command.c_str(), man.files.size() + 1,
                    man.out_dir.c_str());
        return 0;
    } catch (const runner::ParseError& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return 2;
    } catch (const gp::Error& e) {
        const bool validation = e.fault() == gp::Fault::validation;
        std::fprintf(stderr, "%s error: %s\n", validation ? "validation" : "numerical", e.what());
        return validation ? 3 : 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
