#pragma once

#include <vector>

#include "mareach/model.hpp"

namespace mareach {

/// Input replication matrix: stacks [x_i; x_{g(i,1)}; x_i; x_{g(i,2)}; ...]
/// out of [x_i; x_{g(i,1)}; ...; x_{g(i,q)}]. Shape 2q*n_x x (1+q)*n_x.
Mat build_lambda(int q, int n_x);

/// Output summation matrix [I ... I], shape n_u x q*n_u.
Mat build_omega(int q, int n_u);

/// Merged per-agent network: the per-neighbor MLPs fused into one network via
/// Lambda/Omega, with the two saturation layers appended. Evaluating it end to
/// end yields the saturated control input.
struct MergedMlp {
    Mlp base;     // W^0..W^L with merged first/last layers
    Vec u_lower;  // control limits encoded by the saturation layers
    Vec u_upper;

    int input_width() const { return base.input_width(); }
    int nu() const { return static_cast<int>(u_lower.size()); }
    std::vector<int> hidden_widths() const { return base.hidden_widths(); }
    /// Total hidden neuron count, excluding the two saturation layers.
    int n_hidden() const {
        int n = 0;
        for (int w : hidden_widths()) n += w;
        return n;
    }
    /// Neuron count covered by the ReLU QC: hidden plus both saturation layers.
    int n_mid() const { return n_hidden() + 2 * nu(); }

    /// Weight/bias of the two appended saturation layers and the final affine
    /// readout, per the extended-network construction:
    ///   z^{L+1} = relu(W^L z^L + b^L - u_lower)
    ///   z^{L+2} = relu(-z^{L+1} + u_upper - u_lower)
    ///   u       = -z^{L+2} + u_upper
    Mat sat1_W() const { return base.layers.back().W; }
    Vec sat1_b() const { return base.layers.back().b - u_lower; }
    Mat sat2_W() const { return -Mat::Identity(nu(), nu()); }
    Vec sat2_b() const { return u_upper - u_lower; }
};

/// Full forward trace of the extended network: z[0] = input, z[1..L] hidden
/// activations, z[L+1], z[L+2] the saturation activations, u the control.
struct EvalTrace {
    std::vector<Vec> z;
    Vec u;
};

/// Plain MLP forward pass (ReLU between layers, affine output).
Vec evaluate(const Mlp& net, const Vec& x);

/// Extended forward pass returning all activations; u is the saturated input.
EvalTrace evaluate(const MergedMlp& net, const Vec& x);

/// Pre-saturation output of the merged base network.
Vec evaluate_base(const MergedMlp& net, const Vec& x);

/// Fuses the per-neighbor networks (in g-order) into one MergedMlp.
/// pair_refs, when nonempty, holds one reference vector of length 2*n_x per
/// pair; it is absorbed into the first-layer bias (b0 <- b0 - W0_raw * r)
/// before merging.
MergedMlp merge_networks(const AgentModel& agent, const std::vector<const Mlp*>& nets,
                         const std::vector<Vec>& pair_refs = {});

/// Agent in reformulated coordinates: x_{k+1} = A_tilde * xt + B u + w with
/// xt = [x_i; x_{g(i,1)}; ...; x_{g(i,q)}].
struct ReformedAgent {
    const AgentModel* agent = nullptr;
    Mat A_tilde;
    MergedMlp net;

    int nx() const { return static_cast<int>(A_tilde.rows()); }
    int stacked_dim() const { return static_cast<int>(A_tilde.cols()); }
};

ReformedAgent reform_agent(const AgentModel& agent, const NeighborGraph& graph,
                           const std::map<std::pair<int, int>, Mlp>& nets,
                           const std::map<int, Vec>& reference = {});

/// Builds a ReformedAgent with A_tilde taken from explicit vertex matrices
/// (A_self replaced by `a_vertex`, B by `b_vertex`); neighbor blocks stay
/// nominal. Used by the model-uncertainty path.
Mat build_a_tilde(const Mat& a_self, const AgentModel& agent);

}  // namespace mareach
