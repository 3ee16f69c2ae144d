#pragma once

#include <cstdint>
#include <random>

#include "mareach/reformulate.hpp"

namespace mareach {

/// Continuous-time agent model, discretized by zero-order hold.
struct CtModel {
    Mat A_self;
    std::vector<std::pair<int, Mat>> A_neighbors;
    Mat B;
    Mat L;      // exogenous-input columns (may be 0 x 0)
    double period = 0.0;
};

struct DiscretizedModel {
    Mat A_self;
    std::vector<std::pair<int, Mat>> A_neighbors;
    Mat B;
    Mat L;  // discretized exogenous-input map
};

/// Exact ZOH discretization: A = exp(A_self T); every exogenous column block
/// (neighbors, control, loads) maps through int_0^T exp(A_self s) ds, computed
/// with the block-augmented matrix exponential.
DiscretizedModel zoh_discretize(const CtModel& ct);

/// Per-agent state trajectories, x[agent id][step].
using Trajectory = std::map<int, std::vector<Vec>>;

/// Exact closed-loop recursion of the original dynamics: per-pair networks
/// evaluated and summed, then clamped. When the scenario carries uncertainty
/// and draw_uncertain is set, each step uses a random convex combination of
/// the vertex matrices.
Trajectory simulate(const Scenario& s, const std::map<int, Vec>& initial, int steps,
                    bool draw_uncertain = false, std::uint64_t seed = 0);

/// Exact interval hull of one reformulated step when the controller is affine
/// over the box: either constant (all hidden weights zero) or an unsaturated
/// affine network. Throws NotAffine otherwise.
Box interval_oracle(const ReformedAgent& ra, const Box& box, const Vec& w);

struct ContainmentViolation {
    int agent = 0;
    int step = 0;
    int coord = 0;
    double amount = 0.0;  // distance outside the box
};

struct ContainmentReport {
    long samples = 0;
    std::vector<ContainmentViolation> violations;
    bool ok() const { return violations.empty(); }
};

/// Samples initial states (uniform over the initial boxes plus corner
/// enumeration, corners capped), simulates, and reports every coordinate that
/// escapes its computed box by more than eps.
ContainmentReport containment_check(const std::map<int, std::vector<Box>>& boxes,
                                    const Scenario& s, long samples, double eps,
                                    std::uint64_t seed = 0, bool draw_uncertain = false);

}  // namespace mareach
