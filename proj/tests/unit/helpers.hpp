#pragma once

#include <random>

#include "mareach/baseline.hpp"
#include "mareach/config.hpp"
#include "mareach/sim.hpp"

namespace testutil {

using namespace mareach;

inline Mat random_mat(int rows, int cols, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> nd(0.0, scale);
    Mat m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = nd(rng);
    return m;
}

inline Vec random_vec(int n, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> nd(0.0, scale);
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = nd(rng);
    return v;
}

inline Mlp random_mlp(int n_x, int n_u, const std::vector<int>& hidden, std::mt19937_64& rng,
                      double scale = 0.5) {
    Mlp net;
    int in = 2 * n_x;
    for (size_t l = 0; l <= hidden.size(); ++l) {
        const int out = l < hidden.size() ? hidden[l] : n_u;
        net.layers.push_back({random_mat(out, in, rng, scale), random_vec(out, rng, scale)});
        in = out;
    }
    return net;
}

/// Random chain scenario: agents 1..M+1, agent 1 static, agent i depends on
/// i-1. Mild dynamics and small-weight controllers keep trajectories bounded.
inline Scenario random_chain_scenario(int vehicles, int n_x, int n_u,
                                      const std::vector<int>& hidden, std::uint64_t seed,
                                      double net_scale = 0.1) {
    std::mt19937_64 rng(seed);
    Scenario s;

    AgentModel lead;
    lead.id = 1;
    lead.is_static = true;
    lead.static_states = {random_vec(n_x, rng, 0.5)};
    s.graph.agents.push_back(lead);

    for (int i = 0; i < vehicles; ++i) {
        AgentModel a;
        a.id = i + 2;
        a.A_self = 0.8 * Mat::Identity(n_x, n_x) + random_mat(n_x, n_x, rng, 0.05);
        a.A_neighbors.emplace_back(a.id - 1,
                                   0.1 * Mat::Identity(n_x, n_x) + random_mat(n_x, n_x, rng, 0.02));
        a.B = random_mat(n_x, n_u, rng, 0.3);
        a.u_lower = Vec::Constant(n_u, -2.0);
        a.u_upper = Vec::Constant(n_u, 2.0);
        s.graph.agents.push_back(a);
        s.nets[{a.id, a.id - 1}] = random_mlp(n_x, n_u, hidden, rng, net_scale);
        Vec c = random_vec(n_x, rng, 0.3);
        s.init[a.id] = Box(c - Vec::Constant(n_x, 0.2), c + Vec::Constant(n_x, 0.2));
    }
    return s;
}

/// Platoon of `vehicles` ACC vehicles behind one static virtual lead, built
/// from the continuous-time longitudinal model with ZOH at 0.1 s.
inline Scenario platoon_scenario(int vehicles, std::uint64_t net_seed,
                                 const std::vector<int>& hidden = {15, 15},
                                 double tau = 0.5, double net_scale = 0.1) {
    Scenario s;
    const double T = 0.1;

    CtModel ct;
    ct.A_self = Mat{{0, -1, 0}, {0, 0, 1}, {0, 0, -1.0 / tau}};
    ct.A_neighbors.emplace_back(0, Mat{{0, 1, 0}, {0, 0, 0}, {0, 0, 0}});
    ct.B = Mat{{0}, {0}, {1.0 / tau}};
    ct.L = Mat::Zero(3, 0);
    ct.period = T;
    DiscretizedModel dm = zoh_discretize(ct);

    AgentModel lead;
    lead.id = 1;
    lead.is_static = true;
    lead.static_states = {Vec{{0.0, 18.0, 0.0}}};
    s.graph.agents.push_back(lead);

    std::mt19937_64 rng(net_seed);
    for (int i = 0; i < vehicles; ++i) {
        AgentModel a;
        a.id = i + 2;
        a.A_self = dm.A_self;
        a.A_neighbors.emplace_back(a.id - 1, dm.A_neighbors.front().second);
        a.B = dm.B;
        a.u_lower = Vec::Constant(1, -5.0);
        a.u_upper = Vec::Constant(1, 5.0);
        s.graph.agents.push_back(a);
        s.nets[{a.id, a.id - 1}] = random_mlp(3, 1, hidden, rng, net_scale);
        s.init[a.id] = Box(Vec{{-0.1, 19.95, -0.01}}, Vec{{0.1, 20.05, 0.01}});
    }
    return s;
}

/// Scenario with constant-output controllers: first-layer weights arbitrary,
/// all later weights zero, so the control is a clamped constant.
inline void zero_hidden_weights(Scenario& s, std::mt19937_64& rng, double bias_scale = 0.5) {
    std::normal_distribution<double> nd(0.0, bias_scale);
    for (auto& [key, net] : s.nets) {
        for (size_t l = 1; l < net.layers.size(); ++l) net.layers[l].W.setZero();
        for (auto& layer : net.layers)
            for (int r = 0; r < layer.b.size(); ++r) layer.b[r] = nd(rng);
    }
}

}  // namespace testutil
