#include "mareach/reach.hpp"

#include <chrono>
#include <cmath>

#include "parallel.hpp"

namespace mareach {

using detail::run_parallel;

std::vector<ReformedAgent> reform_all(const Scenario& s) {
    std::vector<ReformedAgent> out;
    for (const auto& a : s.graph.agents)
        if (!a.is_static) out.push_back(reform_agent(a, s.graph, s.nets, s.reference));
    return out;
}

Box neighborhood_box(const Scenario& s, const AgentModel& agent,
                     const std::map<int, Box>& at_k) {
    Box prod = at_k.at(agent.id);
    for (const auto& [jid, Aij] : agent.A_neighbors) prod = prod.product(at_k.at(jid));
    (void)s;
    return prod;
}

namespace {

SolveReport solve_with_retry(const FacetSdp& sdp, const ReachSettings& settings) {
    SolveReport rep = solve_facet(sdp, settings.sdp);
    SdpSettings relaxed = settings.sdp;
    for (int r = 0; r < settings.retries && rep.status != SolveReport::Status::optimal; ++r) {
        relaxed.tol *= settings.retry_tol_factor;
        relaxed.max_iters += 100;
        SolveReport again = solve_facet(sdp, relaxed);
        again.note += (again.note.empty() ? "" : "; ") + std::string("retry ") +
                      std::to_string(r + 1);
        again.wall_seconds += rep.wall_seconds;
        rep = again;
    }
    return rep;
}

}  // namespace

std::map<int, Box> one_step(const Scenario& s, const std::vector<ReformedAgent>& reformed,
                            const std::map<int, Box>& at_k, int k,
                            const ReachSettings& settings, std::vector<SolveRecord>* log,
                            std::vector<std::string>* warnings) {
    const int n_x = s.nx();
    struct Job {
        const ReformedAgent* ra;
        Box in_box;
        Vec H;
        Vec w;
        int facet;
        std::vector<std::pair<Mat, Mat>> vertices;
    };
    std::vector<Job> jobs;
    for (const auto& ra : reformed) {
        const AgentModel& a = *ra.agent;
        Box in_box = neighborhood_box(s, a, at_k);
        const double wmin = in_box.width().minCoeff();
        const double wmax = in_box.width().maxCoeff();
        if (warnings && wmin > 0 && wmax / wmin > 1e6)
            warnings->push_back("agent " + std::to_string(a.id) + " step " + std::to_string(k) +
                                ": input box widths span a dynamic range > 1e6; consider "
                                "settings.sdp.prescale");
        auto vertices = uncertainty_vertices(a, s.uncertainty);
        for (int p = 0; p < 2 * n_x; ++p) {
            Vec H = Vec::Zero(n_x);
            if (p < n_x)
                H[p] = 1.0;  // upper bound on coordinate p
            else
                H[p - n_x] = -1.0;  // h bounds -x_{p-n_x}, giving the lower bound
            jobs.push_back({&ra, in_box, H, a.w_at(k), p, vertices});
        }
    }

    std::vector<SolveReport> reports(jobs.size());
    run_parallel(static_cast<int>(jobs.size()), settings.workers, [&](int i) {
        const Job& job = jobs[static_cast<size_t>(i)];
        FacetSdp sdp = assemble_facet_sdp(*job.ra, job.in_box, job.H, job.w, job.vertices,
                                          settings.sdp);
        reports[static_cast<size_t>(i)] = solve_with_retry(sdp, settings);
    });

    std::map<int, Box> next;
    for (const auto& a : s.graph.agents)
        if (a.is_static) next[a.id] = Box::point(a.static_state_at(k + 1));

    size_t at = 0;
    for (const auto& ra : reformed) {
        const int id = ra.agent->id;
        Box out;
        out.lower = Vec::Zero(n_x);
        out.upper = Vec::Zero(n_x);
        for (int p = 0; p < 2 * n_x; ++p, ++at) {
            const SolveReport& rep = reports[at];
            if (log) log->push_back({id, k, p, rep});
            if (rep.status != SolveReport::Status::optimal || !rep.h_value)
                throw SolverFailure("facet solve failed (agent " + std::to_string(id) +
                                    ", step " + std::to_string(k) + ", facet " +
                                    std::to_string(p) + "): " + to_string(rep.status) +
                                    (rep.note.empty() ? "" : " - " + rep.note));
            if (p < n_x)
                out.upper[p] = *rep.h_value;
            else
                out.lower[p - n_x] = -*rep.h_value;
        }
        if ((out.lower.array() > out.upper.array()).any())
            throw SolverFailure("facet bounds crossed for agent " + std::to_string(id) +
                                " at step " + std::to_string(k));
        next[id] = out;
    }
    return next;
}

ReachResult multi_step(const Scenario& s, int steps, const ReachSettings& settings) {
    const auto t0 = std::chrono::steady_clock::now();
    require_valid(s);

    // The known-input sequences and static trajectories must cover the horizon.
    for (const auto& a : s.graph.agents) {
        if (!a.is_static && !a.w_seq.empty() && static_cast<int>(a.w_seq.size()) < steps)
            throw InvalidDimension("agent " + std::to_string(a.id) + ": w sequence shorter than horizon");
        if (a.is_static && a.static_states.size() != 1 &&
            static_cast<int>(a.static_states.size()) < steps + 1)
            throw InvalidDimension("agent " + std::to_string(a.id) +
                                   ": static state sequence shorter than horizon");
    }

    ReachResult res;
    res.mode = "per-agent";
    auto reformed = reform_all(s);

    std::map<int, Box> current;
    for (const auto& a : s.graph.agents) {
        current[a.id] = a.is_static ? Box::point(a.static_state_at(0)) : s.init.at(a.id);
        res.boxes[a.id] = {current[a.id]};
    }

    for (int k = 0; k < steps; ++k) {
        current = one_step(s, reformed, current, k, settings, &res.solves, &res.warnings);
        for (const auto& [id, box] : current) res.boxes[id].push_back(box);
    }

    for (const auto& rec : res.solves) res.sdp_seconds += rec.report.wall_seconds;
    res.total_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

Polytope custom_polytope_step(const ReformedAgent& ra, const Scenario& s, const Box& in_box,
                              const std::vector<Vec>& normals, int k,
                              const ReachSettings& settings, std::vector<SolveRecord>* log,
                              std::vector<std::string>* warnings) {
    // Deduplicate facet normals before solving.
    std::vector<Vec> unique;
    for (const Vec& h : normals) {
        bool dup = false;
        for (const Vec& u : unique)
            if ((u - h).lpNorm<Eigen::Infinity>() == 0.0) dup = true;
        if (!dup) unique.push_back(h);
    }
    if (warnings && static_cast<int>(unique.size()) < ra.nx() + 1)
        warnings->push_back("custom polytope with " + std::to_string(unique.size()) +
                            " facet(s) in dimension " + std::to_string(ra.nx()) +
                            " is unbounded");

    auto vertices = uncertainty_vertices(*ra.agent, s.uncertainty);
    std::vector<SolveReport> reports(unique.size());
    run_parallel(static_cast<int>(unique.size()), settings.workers, [&](int i) {
        FacetSdp sdp = assemble_facet_sdp(ra, in_box, unique[static_cast<size_t>(i)],
                                          ra.agent->w_at(k), vertices, settings.sdp);
        reports[static_cast<size_t>(i)] = solve_with_retry(sdp, settings);
    });

    Polytope poly;
    for (size_t i = 0; i < unique.size(); ++i) {
        if (log) log->push_back({ra.agent->id, k, static_cast<int>(i), reports[i]});
        if (reports[i].status != SolveReport::Status::optimal || !reports[i].h_value)
            throw SolverFailure("polytope facet solve failed (agent " +
                                std::to_string(ra.agent->id) + ", facet " + std::to_string(i) +
                                "): " + to_string(reports[i].status));
        poly.facets.push_back({unique[i], *reports[i].h_value});
    }
    return poly;
}

}  // namespace mareach
