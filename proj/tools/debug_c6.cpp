// Scratch driver: locate loose solves in the uncertainty sweep (not installed).
#include <cstdio>

#include "../tests/unit/helpers.hpp"
#include "mareach/config.hpp"

using namespace mareach;
namespace fs = std::filesystem;

int main() {
    const fs::path src = fs::path(MAREACH_SOURCE_DIR) / "configs" / "platoon.json";
    const fs::path dir = fs::temp_directory_path() / "mareach_c6";
    fs::create_directories(dir);
    fs::copy_file(src, dir / "platoon.json", fs::copy_options::overwrite_existing);
    for (const auto& stub : scan_weight_refs(dir / "platoon.json")) {
        fs::create_directories(stub.path.parent_path());
        save_weights(synth_weights(stub.n_x, stub.n_u, {15, 15},
                                   5005 ^ static_cast<std::uint64_t>(stub.i * 1000 + stub.j), 0.1),
                     stub.path);
    }
    RunConfig cfg = load_config(dir / "platoon.json");
    Scenario base = prefix_scenario(cfg.scenario, 3);

    std::map<double, ReachResult> runs;
    for (double delta : {0.005, 0.01}) {
        Scenario s = base;
        UncertaintySpec u;
        for (int id : s.verified_ids()) {
            const AgentModel& a = s.graph.agent(id);
            u.A_vertices[id] = {(1.0 - delta) * a.A_self, (1.0 + delta) * a.A_self};
            u.B_vertices[id] = {(1.0 - delta) * a.B, (1.0 + delta) * a.B};
        }
        s.uncertainty = u;
        ReachSettings settings;
        ReachResult res = multi_step(s, 5, settings);
        for (const auto& rec : res.solves)
            if (!rec.report.note.empty() || rec.report.iterations >= 150)
                std::printf("delta=%g agent %d step %d facet %d: %d iters, %s\n", delta,
                            rec.agent, rec.step, rec.facet, rec.report.iterations,
                            rec.report.note.c_str());
        runs[delta] = std::move(res);
    }

    for (const auto& [id, boxes] : runs[0.005].boxes) {
        const auto& lb = runs[0.01].boxes.at(id);
        for (size_t k = 0; k < boxes.size(); ++k)
            for (int t = 0; t < boxes[k].dim(); ++t) {
                const double lo = lb[k].lower[t] - boxes[k].lower[t];
                const double hi = boxes[k].upper[t] - lb[k].upper[t];
                if (lo > 1e-7 || hi > 1e-7)
                    std::printf("monotonicity slack agent %d step %zu coord %d: lo %.2e hi %.2e\n",
                                id, k, t, lo, hi);
            }
    }

    // Re-solve the worst facet with a verbose trace: agent 2, step 2 box,
    // facet 5 (lower bound on coordinate 2), both deltas.
    for (double delta : {0.005, 0.01}) {
        Scenario s = base;
        UncertaintySpec u;
        for (int id : s.verified_ids()) {
            const AgentModel& a = s.graph.agent(id);
            u.A_vertices[id] = {(1.0 - delta) * a.A_self, (1.0 + delta) * a.A_self};
            u.B_vertices[id] = {(1.0 - delta) * a.B, (1.0 + delta) * a.B};
        }
        s.uncertainty = u;
        auto reformed = reform_all(s);
        const auto& ra = reformed.front();  // agent 2
        Vec H = Vec::Zero(3);
        H[2] = -1.0;
        SdpSettings settings;
        settings.verbose = std::getenv("VERBOSE") != nullptr;
        // Same facet solved on each run's own step-1 box AND on the other
        // run's box, to separate recursion effects from per-solve accuracy.
        for (double box_from : {0.005, 0.01}) {
            Box in_box = runs[box_from].boxes.at(2)[1].product(
                Box::point(s.graph.agent(1).static_state_at(1)));
            FacetSdp sdp = assemble_facet_sdp(ra, in_box, H, Vec::Zero(3),
                                              uncertainty_vertices(*ra.agent, s.uncertainty),
                                              settings);
            SolveReport rep = solve_facet(sdp, settings);
            std::printf(
                "delta=%g box-from=%g: %s %d iters lower=%.9f resid=%.2e note=%s\n", delta,
                box_from, to_string(rep.status).c_str(), rep.iterations,
                rep.h_value ? -*rep.h_value : 0.0, rep.max_residual_eig, rep.note.c_str());
        }
    }
    return 0;
}
