// firesim: command-line front end for the fire-alert system simulator.

#include <csignal>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "firesim/api_server.hpp"
#include "firesim/config.hpp"
#include "firesim/scenario.hpp"
#include "firesim/system.hpp"

namespace {

firesim::ApiServer* g_server = nullptr;

void on_signal(int) {
    if (g_server) g_server->stop();
}

firesim::SystemConfig config_or_default(const std::string& path) {
    return path.empty() ? firesim::default_config() : firesim::load_config(path);
}

int cmd_run(const std::string& scenario_path, firesim::LogicalMs duration, const std::string& trace_path,
            const std::string& config_path) {
    const auto config = config_or_default(config_path);
    const auto scenario = firesim::load_scenario(scenario_path);
    const auto result = firesim::run(scenario, duration, config);

    if (trace_path.empty() || trace_path == "-") {
        std::cout << result.trace_jsonl;
    } else {
        std::ofstream out(trace_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + trace_path);
        out << result.trace_jsonl;
    }
    if (!result.ok()) {
        std::cerr << "expectation failed at t=" << result.failure->t << ": " << result.failure->message << "\n";
        return 1;
    }
    std::cerr << scenario.name << ": " << result.expectations_checked << " expectation(s) met over "
              << duration << " ms\n";
    return 0;
}

int cmd_serve(const std::string& host, int port, const std::string& config_path, double pace,
              const std::string& static_dir) {
    firesim::ApiServer server(config_or_default(config_path), {pace, static_dir});
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "serving on http://" << host << ":" << port << (pace > 0 ? "" : " (manual stepping)") << "\n";
    server.serve_forever(host, port);
    g_server = nullptr;
    return 0;
}

int cmd_compare(const std::string& a_path, const std::string& b_path) {
    const auto a = firesim::parse_jsonl(firesim::read_file(a_path));
    const auto b = firesim::parse_jsonl(firesim::read_file(b_path));
    if (auto d = firesim::compare_traces(a, b)) {
        std::cout << "traces diverge at seq " << d->seq << " (" << d->field << ")\n";
        return 1;
    }
    std::cout << "traces equal (" << a.size() << " events)\n";
    return 0;
}

int cmd_transcript(const std::string& path) {
    std::cout << firesim::at_transcript(firesim::parse_jsonl(firesim::read_file(path)));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fire-alert system simulator"};
    app.require_subcommand(1);

    std::string scenario_path, trace_path, config_path, static_dir, host = "127.0.0.1";
    std::string a_path, b_path;
    firesim::LogicalMs duration = 0;
    int port = 8080;
    double pace = 0.0;

    auto* run = app.add_subcommand("run", "Run a scenario and write its canonical trace");
    run->add_option("--scenario", scenario_path, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    run->add_option("--duration", duration, "Logical milliseconds to simulate")->required()->check(CLI::NonNegativeNumber);
    run->add_option("--trace", trace_path, "Output JSONL trace ('-' for stdout)");
    run->add_option("--config", config_path, "System config JSON")->check(CLI::ExistingFile);

    auto* serve = app.add_subcommand("serve", "Serve the HTTP/SSE control API");
    serve->add_option("--port", port, "TCP port")->check(CLI::Range(1, 65535));
    serve->add_option("--host", host, "Bind address");
    serve->add_option("--config", config_path, "System config JSON")->check(CLI::ExistingFile);
    serve->add_option("--pace", pace, "Logical ticks per wall-clock second (0 = step via API)")
        ->check(CLI::NonNegativeNumber);
    serve->add_option("--static", static_dir, "Directory with console assets")->check(CLI::ExistingDirectory);

    auto* compare = app.add_subcommand("compare", "Compare two canonical traces");
    compare->add_option("a", a_path)->required()->check(CLI::ExistingFile);
    compare->add_option("b", b_path)->required()->check(CLI::ExistingFile);

    auto* transcript = app.add_subcommand("transcript", "Print the AT transcript of a trace");
    transcript->add_option("trace", a_path)->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(scenario_path, duration, trace_path, config_path);
        if (*serve) return cmd_serve(host, port, config_path, pace, static_dir);
        if (*compare) return cmd_compare(a_path, b_path);
        if (*transcript) return cmd_transcript(a_path);
    } catch (const std::exception& e) {
        std::cerr << "firesim: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
