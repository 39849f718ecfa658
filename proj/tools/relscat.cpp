#include <CLI11.hpp>

#include <iostream>

#include "relscat/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"relscat - relativistic long-range scattering toolkit"};

    std::string task;
    std::string config_path;
    std::string out_path;
    int threads = -1;
    std::string mode;

    app.add_option("task", task,
                   "fields-check | free-solve | scatter | scatter-mod | "
                   "verify-asymptotics | xray | reconstruct")
        ->required();
    app.add_option("--config", config_path, "run configuration file")->required();
    app.add_option("--out", out_path, "output path (overrides config)");
    app.add_option("--threads", threads, "worker threads (overrides config)");
    app.add_option("--mode", mode, "strict | empirical (overrides config)");

    CLI11_PARSE(app, argc, argv);

    try {
        relscat::RunConfig cfg = relscat::parse_config_file(config_path);
        cfg.task = relscat::task_from_string(task);
        if (!out_path.empty()) cfg.out = out_path;
        if (threads >= 0) cfg.threads = threads;
        if (!mode.empty()) {
            if (mode == "strict")
                cfg.mode = relscat::Mode::strict;
            else if (mode == "empirical")
                cfg.mode = relscat::Mode::empirical;
            else
                throw relscat::ConfigError("mode must be strict or empirical");
        }
        return relscat::run_task(cfg, std::cout);
    } catch (const relscat::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
