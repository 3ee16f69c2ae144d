// Scratch driver: accuracy of vertex-program solves (not installed).
#include <cstdio>
#include <cstdlib>

#include "../tests/unit/helpers.hpp"
#include "mareach/sdp.hpp"

using namespace mareach;

int main(int argc, char** argv) {
    const double delta = argc > 1 ? std::atof(argv[1]) : 0.01;
    Scenario s = testutil::platoon_scenario(3, 5005 ^ 2048, {15, 15});
    require_valid(s);
    auto reformed = reform_all(s);
    std::map<int, Box> at0;
    for (const auto& a : s.graph.agents)
        at0[a.id] = a.is_static ? Box::point(a.static_state_at(0)) : s.init.at(a.id);

    SdpSettings settings;
    settings.verbose = std::getenv("VERBOSE") != nullptr;
    const auto& ra = reformed[1];  // agent 3: non-static neighbor
    Box in_box = neighborhood_box(s, *ra.agent, at0);
    std::vector<std::pair<Mat, Mat>> verts;
    for (double da : {1.0 - delta, 1.0 + delta})
        for (double db : {1.0 - delta, 1.0 + delta})
            verts.emplace_back(da * ra.agent->A_self, db * ra.agent->B);

    for (int p = 0; p < 6; ++p) {
        Vec H = Vec::Zero(3);
        H[p % 3] = p < 3 ? 1.0 : -1.0;
        FacetSdp sdp = assemble_facet_sdp(ra, in_box, H, Vec::Zero(3), verts, settings);
        SolveReport rep = solve_facet(sdp, settings);
        std::printf("facet %d: %s %d iters h=%.9f resid=%.2e note=%s\n", p,
                    to_string(rep.status).c_str(), rep.iterations,
                    rep.h_value ? *rep.h_value : 0.0, rep.max_residual_eig, rep.note.c_str());
    }
    return 0;
}
