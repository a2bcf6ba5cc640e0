// Command-line driver: pipeline stages and the HTTP API.
#include <httplib.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <fmt/format.h>
#include <iostream>

#include "vfmga/error.hpp"
#include "vfmga/orchestrator/api.hpp"
#include "vfmga/orchestrator/pipeline.hpp"

namespace {

using namespace vfmga;
using namespace vfmga::orchestrator;

struct Options {
    std::string config;
    std::string out_dir = "run";
    bool seed_independent = false;
    bool serial = false;
    std::string host = "127.0.0.1";
    int port = 0;
    std::string static_dir;
};

void log_line(const std::string& msg) { std::cerr << "vfmga: " << msg << '\n'; }

int run_stages(const Options& o, Stage last) {
    const RunConfig config = load_run_config(o.config);
    PipelineOptions options;
    options.last = last;
    options.exec = o.serial ? Execution::kSerial : Execution::kParallel;
    options.log = log_line;
    const auto result = run_pipeline(config, o.out_dir, options);
    const auto& m = result.manifest;
    log_line(fmt::format("run {} written to {}", m.run_id, o.out_dir));
    if (m.counts.contains("runs"))
        log_line(fmt::format("{} runs, {} alternatives, {} failures", m.counts["runs"].get<std::size_t>(),
                             m.counts["alternatives"].get<std::size_t>(), m.counts["failures"].get<std::size_t>()));
    return 0;
}

int serve(Options o) {
    if (const char* dir = std::getenv("VFMGA_RUN_DIR"); dir && *dir) o.out_dir = dir;
    if (o.port == 0) {
        const char* env = std::getenv("VFMGA_PORT");
        o.port = env && *env ? std::atoi(env) : 8080;
    }
    const RunConfig config = load_run_config(o.config);
    ApiService api(load_run(config, o.out_dir), o.out_dir, o.serial ? Execution::kSerial : Execution::kParallel);

    httplib::Server server;
    if (!o.static_dir.empty() && !server.set_mount_point("/ui", o.static_dir))
        throw Error("cannot serve static files from " + o.static_dir);
    auto handler = [&api](const httplib::Request& req, httplib::Response& res) {
        std::map<std::string, std::string> query;
        for (const auto& [key, value] : req.params) query[key] = value;
        const ApiResponse r = api.handle(req.method, req.path, query, req.body);
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json");
    };
    server.Get(".*", handler);
    server.Post(".*", handler);
    server.Put(".*", handler);
    server.Delete(".*", handler);
    log_line(fmt::format("serving {} on http://{}:{}", o.out_dir, o.host, o.port));
    if (!server.listen(o.host, o.port)) throw Error(fmt::format("cannot listen on {}:{}", o.host, o.port));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Value-focused modelling to generate alternatives"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--config", o.config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
    app.add_option("--out-dir", o.out_dir, "run directory")->capture_default_str();
    app.add_flag("--seed-independent", o.seed_independent,
                 "assert that results do not depend on a random seed (nothing in the pipeline draws random numbers)");
    app.add_flag("--serial", o.serial, "use the serial reference kernels instead of OpenMP");

    const std::pair<const char*, Stage> stages[] = {
        {"optimize", Stage::kOptimize}, {"groups", Stage::kGroups}, {"generate", Stage::kGenerate},
        {"evaluate", Stage::kEvaluate}, {"rank", Stage::kRank},     {"analyse", Stage::kAnalyse},
    };
    std::vector<std::pair<CLI::App*, Stage>> stage_commands;
    for (const auto& [name, stage] : stages)
        stage_commands.emplace_back(app.add_subcommand(name, fmt::format("run the stages up to and including {}", name)), stage);
    CLI::App* all = app.add_subcommand("all", "run every stage");
    CLI::App* srv = app.add_subcommand("serve", "serve the HTTP API for a finished run (VFMGA_PORT, VFMGA_RUN_DIR)");
    srv->add_option("--host", o.host, "bind address")->capture_default_str();
    srv->add_option("--port", o.port, "port; defaults to VFMGA_PORT or 8080");
    srv->add_option("--static-dir", o.static_dir, "directory served under /ui")->check(CLI::ExistingDirectory);

    CLI11_PARSE(app, argc, argv);
    if (o.seed_independent) log_line("no random number generation is used; results are seed independent");
    try {
        if (srv->parsed()) return serve(o);
        if (all->parsed()) return run_stages(o, Stage::kAnalyse);
        for (const auto& [cmd, stage] : stage_commands)
            if (cmd->parsed()) return run_stages(o, stage);
    } catch (const vfmga::ValidationError& e) {
        log_line(std::string("invalid input: ") + e.what());
        return 2;
    } catch (const std::exception& e) {
        log_line(std::string("error: ") + e.what());
        return 1;
    }
    return 1;
}
