// Scratch driver for solver debugging (not installed).
#include <cstdio>
#include <random>

#include "../tests/unit/helpers.hpp"
#include "mareach/sdp.hpp"

using namespace mareach;

int main(int argc, char** argv) {
    const int which = argc > 1 ? std::atoi(argv[1]) : 0;

    SdpSettings settings;
    settings.verbose = true;

    if (which < 4) {
        // The MC-domination test case.
        Scenario s = testutil::random_chain_scenario(1, 2, 1, {4}, 321, 0.4);
        require_valid(s);
        auto ra = reform_agent(s.graph.agent(2), s.graph, s.nets, s.reference);
        Box in_box = s.init.at(2).product(Box::point(s.graph.agent(1).static_state_at(0)));
        if (const char* inf = std::getenv("INFLATE")) {
            const double eps = std::atof(inf);
            in_box.lower.array() -= eps;
            in_box.upper.array() += eps;
        }
        Vec H = Vec::Zero(2);
        if (which % 4 < 2)
            H[which % 2] = 1.0;
        else
            H[which % 2] = -1.0;
        FacetSdp sdp = assemble_facet_sdp(ra, in_box, H, Vec::Zero(2), {}, settings);
        std::printf("dim=%d vars=%d\n", sdp.layout.dim(), sdp.num_vars());
        SolveReport rep = solve_facet(sdp, settings);
        std::printf("status=%s iters=%d h=%s resid=%.3e note=%s\n", to_string(rep.status).c_str(),
                    rep.iterations, rep.h_value ? std::to_string(*rep.h_value).c_str() : "none",
                    rep.max_residual_eig, rep.note.c_str());
    } else {
        // The prescale test case.
        std::mt19937_64 rng(61);
        Scenario s = testutil::random_chain_scenario(1, 2, 1, {3}, 88, 0.3);
        auto ra = reform_agent(s.graph.agent(2), s.graph, s.nets, s.reference);
        Box in_box(Vec{{-1e-4, -1e-7, -1e-3, -1e-3}}, Vec{{1e-4, 1e-7, 1e-3, 1e-3}});
        Vec H = Vec::Zero(2);
        H[0] = 1.0;
        settings.prescale = (which == 5);
        FacetSdp sdp = assemble_facet_sdp(ra, in_box, H, Vec::Zero(2), {}, settings);
        SolveReport rep = solve_facet(sdp, settings);
        std::printf("status=%s iters=%d h=%s resid=%.3e note=%s\n", to_string(rep.status).c_str(),
                    rep.iterations, rep.h_value ? std::to_string(*rep.h_value).c_str() : "none",
                    rep.max_residual_eig, rep.note.c_str());
    }
    return 0;
}
