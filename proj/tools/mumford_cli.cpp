#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "mumford/parallel.hpp"
#include "mumford/report.hpp"

int main(int argc, char** argv) {
    using namespace mumford;
    CLI::App app{"Cyclic Mumford curves: theta functions, periods and branch cross ratios"};
    std::string config_path, tasks, format = "text", output;
    std::optional<int> precision, max_length, theta_box;
    std::optional<std::uint64_t> seed;
    int threads = 1;
    app.add_option("--config", config_path, "JSON run configuration")->required();
    auto* tasks_opt = app.add_option("--tasks", tasks, "comma-separated task list, overrides the config");
    app.add_option("--precision", precision, "p-adic digits N");
    app.add_option("--max-word-length", max_length, "word length bound L");
    app.add_option("--theta-box", theta_box, "Riemann theta box bound M");
    app.add_option("--format", format, "report format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--seed", seed, "probe generator seed");
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--output", output, "write the report here instead of stdout");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    RunResult result;
    try {
        RunConfig cfg = load_config(config_path);
        if (tasks_opt->count() > 0) cfg.tasks = parse_task_list(tasks);
        if (precision) cfg.field.precision = *precision;
        if (max_length) cfg.policy.max_length = *max_length;
        if (theta_box) cfg.theta_box = *theta_box;
        if (seed) cfg.seed = *seed;
        set_worker_threads(threads);
        result = run(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    const std::string text = format == "json" ? render_json(result) : render_text(result);
    if (output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(output, std::ios::binary);
        if (!out) {
            std::cerr << "cannot write " << output << "\n";
            return 2;
        }
        out << text;
    }
    return result.pass ? 0 : 1;
}
