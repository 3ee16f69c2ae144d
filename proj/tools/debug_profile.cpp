// Scratch profiling driver (not installed).
#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "../tests/unit/helpers.hpp"
#include "mareach/sdp.hpp"

using namespace mareach;

int main() {
    Scenario s = testutil::platoon_scenario(3, 5, {15, 15});
    require_valid(s);
    auto reformed = reform_all(s);
    std::map<int, Box> at0;
    for (const auto& a : s.graph.agents)
        at0[a.id] = a.is_static ? Box::point(a.static_state_at(0)) : s.init.at(a.id);

    SdpSettings settings;
    if (std::getenv("PRESCALE")) settings.prescale = true;
    for (const auto& ra : reformed) {
        Box in_box = neighborhood_box(s, *ra.agent, at0);
        for (int p = 0; p < 2; ++p) {
            Vec H = Vec::Zero(3);
            H[p % 3] = p < 3 ? 1.0 : -1.0;
            auto t0 = std::chrono::steady_clock::now();
            FacetSdp sdp = assemble_facet_sdp(ra, in_box, H, Vec::Zero(3), {}, settings);
            auto t1 = std::chrono::steady_clock::now();
            LmiProblem prob = sdp.to_lmi();
            auto t2 = std::chrono::steady_clock::now();
            SolveReport rep = solve_facet(sdp, settings);
            auto t3 = std::chrono::steady_clock::now();
            std::printf(
                "agent %d facet %d: assemble %.1f ms, to_lmi %.1f ms, solve %.1f ms, "
                "%d iters, status %s, h=%g\n",
                ra.agent->id, p,
                std::chrono::duration<double, std::milli>(t1 - t0).count(),
                std::chrono::duration<double, std::milli>(t2 - t1).count(),
                std::chrono::duration<double, std::milli>(t3 - t2).count(), rep.iterations,
                to_string(rep.status).c_str(), rep.h_value ? *rep.h_value : 0.0);
        }
    }
    return 0;
}
