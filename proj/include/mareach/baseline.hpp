#pragma once

#include "mareach/reach.hpp"

namespace mareach {

/// All agents stacked into one state, with one block-merged network over the
/// full state. The monolithic comparison baseline.
struct AugmentedSystem {
    Mat A_aug;             // block (i,j) = A_ij if j in N_i or j == i, else 0
    Mat B_aug;             // columns grouped by verified agent, zero rows for static blocks
    MergedMlp net_aug;     // input width = total state dim, output = stacked controls
    std::vector<int> agent_ids;     // all agents, ascending id (block order)
    std::vector<int> verified_ids;  // agents with controls, ascending id
    int nx_each = 0;

    int total_dim() const { return static_cast<int>(A_aug.rows()); }
    /// Offset of agent `id`'s block in the stacked state.
    int block_offset(int id) const;
    /// Known-input vector for the stacked system at step k (static blocks carry
    /// the state increment of their known trajectory).
    Vec w_at(const Scenario& s, int k) const;
    Box stacked_box(const std::map<int, Box>& per_agent) const;
    std::map<int, Box> split_box(const Box& stacked) const;
};

AugmentedSystem augment(const Scenario& s);

/// One monolithic step: 2*M*n_x facet programs over the stacked basis.
Box monolithic_step(const AugmentedSystem& aug, const Scenario& s, const Box& stacked_at_k,
                    int k, const ReachSettings& settings, std::vector<SolveRecord>* log,
                    std::vector<std::string>* warnings);

/// Full monolithic recursion; result boxes are split back per agent.
ReachResult monolithic_multi_step(const Scenario& s, int steps,
                                  const ReachSettings& settings = {});

}  // namespace mareach
