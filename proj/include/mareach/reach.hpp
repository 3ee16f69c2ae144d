#pragma once

#include "mareach/sdp.hpp"

namespace mareach {

struct ReachSettings {
    SdpSettings sdp;
    int workers = 1;
    int retries = 1;               // re-solves with relaxed tolerance before aborting
    double retry_tol_factor = 10.0;
};

struct SolveRecord {
    int agent = 0;
    int step = 0;   // step being computed (bound applies at step+1)
    int facet = 0;
    SolveReport report;
};

struct ReachResult {
    std::map<int, std::vector<Box>> boxes;        // per agent, steps 0..N
    std::map<int, std::vector<Polytope>> polys;   // only for custom facet runs
    std::vector<SolveRecord> solves;
    double total_seconds = 0.0;
    double sdp_seconds = 0.0;   // sum of per-solve wall times
    std::string mode;           // "per-agent" or "monolithic"
    std::vector<std::string> warnings;
};

/// One step of the hyper-rectangular reachability recursion: for every
/// non-static agent, the 2*n_x facet programs +-e_p over the Cartesian product
/// of its neighborhood boxes. Static agents advance along their known
/// trajectory.
std::map<int, Box> one_step(const Scenario& s, const std::vector<ReformedAgent>& reformed,
                            const std::map<int, Box>& at_k, int k,
                            const ReachSettings& settings, std::vector<SolveRecord>* log,
                            std::vector<std::string>* warnings);

/// Runs the recursion for `steps` steps from the scenario's initial boxes.
ReachResult multi_step(const Scenario& s, int steps, const ReachSettings& settings = {});

/// One-step polytopic overapproximation with user-specified facet normals.
/// Duplicate normals are solved once. Fewer than n_x+1 facets gives an
/// unbounded polytope (warning).
Polytope custom_polytope_step(const ReformedAgent& ra, const Scenario& s, const Box& in_box,
                              const std::vector<Vec>& normals, int k,
                              const ReachSettings& settings,
                              std::vector<SolveRecord>* log = nullptr,
                              std::vector<std::string>* warnings = nullptr);

/// Reformulates every non-static agent of a validated scenario.
std::vector<ReformedAgent> reform_all(const Scenario& s);

/// Cartesian product X_i x X_{g(i,1)} x ... in g-order.
Box neighborhood_box(const Scenario& s, const AgentModel& agent,
                     const std::map<int, Box>& at_k);

}  // namespace mareach
