// mareach: forward reachable-set overapproximation for multi-agent systems
// with distributed saturated ReLU network controllers.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mareach/baseline.hpp"
#include "mareach/config.hpp"
#include "mareach/sim.hpp"

using namespace mareach;

namespace {

int default_workers() {
    if (const char* env = std::getenv("MAREACH_WORKERS")) {
        const int w = std::atoi(env);
        if (w >= 1) return w;
    }
    return 1;
}

void fail(const std::string& kind, const std::string& message) {
    nlohmann::json err{{"error", kind}, {"message", message}};
    std::cerr << err.dump() << "\n";
    std::exit(1);
}

ReachResult run_mode(const RunConfig& cfg, const std::string& mode, int steps, int workers) {
    ReachSettings settings;
    settings.sdp = cfg.sdp;
    settings.workers = workers;
    if (mode == "monolithic") return monolithic_multi_step(cfg.scenario, steps, settings);
    return multi_step(cfg.scenario, steps, settings);
}

double max_bound_diff(const ReachResult& a, const ReachResult& b) {
    double diff = 0.0;
    for (const auto& [id, boxes] : a.boxes) {
        const auto& other = b.boxes.at(id);
        for (size_t k = 0; k < boxes.size(); ++k) {
            diff = std::max(diff, (boxes[k].lower - other[k].lower).cwiseAbs().maxCoeff());
            diff = std::max(diff, (boxes[k].upper - other[k].upper).cwiseAbs().maxCoeff());
        }
    }
    return diff;
}

struct CommonOpts {
    std::string config_path;
    int steps = -1;
    std::string mode;
    int workers = default_workers();
    std::string out;
    std::string csv;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& opt, bool with_mode = true) {
    cmd->add_option("--config", opt.config_path, "scenario config (JSON)")->required();
    cmd->add_option("--steps", opt.steps, "horizon override");
    if (with_mode)
        cmd->add_option("--mode", opt.mode, "per-agent|monolithic")
            ->check(CLI::IsMember({"per-agent", "monolithic"}));
    cmd->add_option("--workers", opt.workers, "parallel facet solves");
    cmd->add_option("--out", opt.out, "output file");
    cmd->add_option("--csv", opt.csv, "CSV export directory");
    auto* s = cmd->add_option("--seed", opt.seed, "RNG seed override");
    s->each([&opt](const std::string&) { opt.seed_set = true; });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sound reachable-set overapproximation for distributed NN-controlled systems"};
    app.require_subcommand(1);

    CommonOpts vopt, copt, kopt, bopt, sopt;

    auto* verify = app.add_subcommand("verify", "compute per-step reachable boxes");
    add_common(verify, vopt);

    auto* compare = app.add_subcommand("compare", "run per-agent and monolithic modes, "
                                                  "report timings and bound differences");
    add_common(compare, copt, false);

    auto* check = app.add_subcommand("check", "containment-check a result file");
    std::string result_path;
    long samples = 10000;
    double eps = 1e-6;
    check->add_option("--config", kopt.config_path, "scenario config (JSON)")->required();
    check->add_option("--result", result_path, "result file from verify")->required();
    check->add_option("--samples", samples, "trajectory samples");
    check->add_option("--eps", eps, "containment slack");
    check->add_option("--seed", kopt.seed, "sampling seed");

    auto* bench = app.add_subcommand("bench", "agent-count sweep of both modes");
    std::vector<int> bench_sizes{1, 2, 3};
    add_common(bench, bopt, false);
    bench->add_option("--agents", bench_sizes, "verified-agent counts to sweep");

    auto* synth = app.add_subcommand("synth-weights",
                                     "generate seeded random weight files for a config");
    std::vector<int> hidden{15, 15};
    double scale = 0.1;
    synth->add_option("--config", sopt.config_path, "scenario config (JSON)")->required();
    synth->add_option("--hidden", hidden, "hidden layer widths");
    synth->add_option("--scale", scale, "weight standard deviation");
    synth->add_option("--seed", sopt.seed, "RNG seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*verify) {
            RunConfig cfg = load_config(vopt.config_path);
            if (vopt.steps >= 0) cfg.horizon = vopt.steps;
            if (vopt.seed_set) cfg.seed = vopt.seed;
            if (!vopt.mode.empty()) cfg.mode = vopt.mode;
            cfg.workers = vopt.workers;
            ReachResult res = run_mode(cfg, cfg.mode, cfg.horizon, cfg.workers);
            for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
            std::cout << "mode " << res.mode << ": " << res.solves.size() << " solves, sdp "
                      << res.sdp_seconds << " s, total " << res.total_seconds << " s\n";
            if (!vopt.out.empty()) save_result(res, cfg, vopt.out);
            if (!vopt.csv.empty()) export_csv(res, cfg.scenario, vopt.csv, 50, cfg.seed);
        } else if (*compare) {
            RunConfig cfg = load_config(copt.config_path);
            if (copt.steps >= 0) cfg.horizon = copt.steps;
            ReachResult pa1 = run_mode(cfg, "per-agent", cfg.horizon, 1);
            ReachResult mono1 = run_mode(cfg, "monolithic", cfg.horizon, 1);
            std::cout << "mode        workers  solves  sdp_seconds  total_seconds\n";
            auto row = [](const std::string& name, int w, const ReachResult& r) {
                std::printf("%-11s %7d %7zu %12.3f %14.3f\n", name.c_str(), w, r.solves.size(),
                            r.sdp_seconds, r.total_seconds);
            };
            row("per-agent", 1, pa1);
            row("monolithic", 1, mono1);
            if (copt.workers > 1) {
                ReachResult pak = run_mode(cfg, "per-agent", cfg.horizon, copt.workers);
                ReachResult monok = run_mode(cfg, "monolithic", cfg.horizon, copt.workers);
                row("per-agent", copt.workers, pak);
                row("monolithic", copt.workers, monok);
            }
            const double diff = max_bound_diff(pa1, mono1);
            std::printf("max per-coordinate bound difference: %.3e\n", diff);
            std::printf("monolithic/per-agent sdp time ratio: %.2f\n",
                        mono1.sdp_seconds / std::max(1e-12, pa1.sdp_seconds));
            if (!copt.out.empty()) {
                nlohmann::json j{{"per_agent_sdp_seconds", pa1.sdp_seconds},
                                 {"monolithic_sdp_seconds", mono1.sdp_seconds},
                                 {"max_bound_diff", diff},
                                 {"solves_per_agent", pa1.solves.size()},
                                 {"solves_monolithic", mono1.solves.size()}};
                std::ofstream out(copt.out);
                out << j.dump(1) << "\n";
            }
            if (!copt.csv.empty()) export_csv(pa1, cfg.scenario, copt.csv, 50, cfg.seed);
        } else if (*check) {
            RunConfig cfg = load_config(kopt.config_path);
            LoadedResult res = load_result(result_path);
            if (!res.config_hash.empty() && res.config_hash != cfg.config_hash)
                fail("ConfigMismatch", "result file was produced from a different config");
            auto report = containment_check(res.boxes, cfg.scenario, samples, eps, kopt.seed,
                                            cfg.scenario.uncertainty.has_value());
            std::cout << report.samples << " trajectories checked, " << report.violations.size()
                      << " violation(s)\n";
            for (size_t i = 0; i < report.violations.size() && i < 20; ++i) {
                const auto& v = report.violations[i];
                std::cout << "  agent " << v.agent << " step " << v.step << " coord " << v.coord
                          << " escapes by " << v.amount << "\n";
            }
            if (!report.ok()) fail("ContainmentViolation", "sampled trajectory left a box");
        } else if (*bench) {
            RunConfig cfg = load_config(bopt.config_path);
            const int steps = bopt.steps >= 0 ? bopt.steps : 1;
            std::cout << "M  per_agent_sdp_s  monolithic_sdp_s  ratio\n";
            std::vector<std::array<double, 3>> rows;
            for (int M : bench_sizes) {
                Scenario sub = prefix_scenario(cfg.scenario, M);
                RunConfig sub_cfg = cfg;
                sub_cfg.scenario = sub;
                ReachResult pa = run_mode(sub_cfg, "per-agent", steps, bopt.workers);
                ReachResult mono = run_mode(sub_cfg, "monolithic", steps, bopt.workers);
                const double ratio = mono.sdp_seconds / std::max(1e-12, pa.sdp_seconds);
                std::printf("%-2d %15.3f %17.3f %6.2f\n", M, pa.sdp_seconds, mono.sdp_seconds,
                            ratio);
                rows.push_back({pa.sdp_seconds, mono.sdp_seconds, ratio});
            }
            if (!bopt.out.empty()) {
                nlohmann::json j = nlohmann::json::array();
                for (size_t i = 0; i < rows.size(); ++i)
                    j.push_back({{"agents", bench_sizes[i]},
                                 {"per_agent_sdp_seconds", rows[i][0]},
                                 {"monolithic_sdp_seconds", rows[i][1]},
                                 {"ratio", rows[i][2]}});
                std::ofstream out(bopt.out);
                out << j.dump(1) << "\n";
            }
        } else if (*synth) {
            auto stubs = scan_weight_refs(sopt.config_path);
            std::uint64_t seed = sopt.seed;
            for (const auto& stub : stubs) {
                // Stable per-pair seeds: independent of enumeration order.
                const std::uint64_t pair_seed =
                    seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(stub.i * 1000 + stub.j));
                Mlp net = synth_weights(stub.n_x, stub.n_u, hidden, pair_seed, scale);
                std::filesystem::create_directories(stub.path.parent_path());
                save_weights(net, stub.path);
                std::cout << "wrote " << stub.path.string() << "\n";
            }
        }
    } catch (const ParseError& e) {
        fail("ParseError", e.what());
    } catch (const ScenarioError& e) {
        fail("ValidationError", e.what());
    } catch (const ShapeError& e) {
        fail("ShapeError", e.what());
    } catch (const SolverFailure& e) {
        fail("SolverFailure", e.what());
    } catch (const std::exception& e) {
        fail("Error", e.what());
    }
    return 0;
}
