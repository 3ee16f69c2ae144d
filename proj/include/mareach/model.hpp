#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "mareach/types.hpp"

namespace mareach {

/// Hyper-rectangle [lower, upper]. A degenerate box (lower == upper) encodes a
/// known point, used for static agents.
struct Box {
    Vec lower;
    Vec upper;

    Box() = default;
    Box(Vec lo, Vec hi) : lower(std::move(lo)), upper(std::move(hi)) {}

    static Box point(const Vec& x) { return Box(x, x); }

    int dim() const { return static_cast<int>(lower.size()); }
    Vec center() const { return 0.5 * (lower + upper); }
    Vec width() const { return upper - lower; }

    bool contains(const Vec& x, double tol = 0.0) const {
        return (x.array() >= lower.array() - tol).all() &&
               (x.array() <= upper.array() + tol).all();
    }

    /// Cartesian product [this; other].
    Box product(const Box& other) const {
        Box out;
        out.lower.resize(dim() + other.dim());
        out.upper.resize(dim() + other.dim());
        out.lower << lower, other.lower;
        out.upper << upper, other.upper;
        return out;
    }
};

/// Halfspace collection { x : H_p^T x <= h_p, p = 1..m }.
struct Polytope {
    struct Facet {
        Vec normal;
        double offset;
    };
    std::vector<Facet> facets;
};

/// Layered ReLU perceptron. layers[0..L] are the weight/bias pairs; ReLU is
/// applied after layers 0..L-1, the final layer is affine.
struct Mlp {
    struct Layer {
        Mat W;
        Vec b;
    };
    std::vector<Layer> layers;

    int input_width() const { return static_cast<int>(layers.front().W.cols()); }
    int output_width() const { return static_cast<int>(layers.back().W.rows()); }
    /// Number of hidden (activated) layers.
    int depth() const { return static_cast<int>(layers.size()) - 1; }

    std::vector<int> hidden_widths() const {
        std::vector<int> w;
        for (int l = 0; l + 1 < static_cast<int>(layers.size()); ++l)
            w.push_back(static_cast<int>(layers[l].W.rows()));
        return w;
    }
};

/// One agent of the discrete-time multi-agent system
///   x_{k+1} = A_self x + sum_j A_neighbors[j] x_j + B u + w_k.
/// Static agents have a known state trajectory and are excluded from
/// verification; their dynamics fields are ignored.
struct AgentModel {
    int id = 0;
    Mat A_self;
    std::vector<std::pair<int, Mat>> A_neighbors;  // ordered ascending by id
    Mat B;
    Vec u_lower;
    Vec u_upper;
    std::vector<Vec> w_seq;  // empty means identically zero
    bool is_static = false;
    std::vector<Vec> static_states;  // step-indexed; a single entry means constant

    int nx() const { return is_static ? static_cast<int>(static_states.front().size()) : static_cast<int>(A_self.rows()); }
    int nu() const { return is_static ? 0 : static_cast<int>(B.cols()); }
    int degree() const { return static_cast<int>(A_neighbors.size()); }

    Vec w_at(int k) const {
        if (w_seq.empty()) return Vec::Zero(nx());
        return w_seq.at(static_cast<size_t>(k));
    }
    Vec static_state_at(int k) const {
        if (static_states.size() == 1) return static_states.front();
        return static_states.at(static_cast<size_t>(k));
    }
};

/// Agents plus the neighbor lookup g(i, j) of the reformulation. Neighbor
/// order is ascending id, fixed at construction.
struct NeighborGraph {
    std::vector<AgentModel> agents;

    const AgentModel* find(int id) const {
        for (const auto& a : agents)
            if (a.id == id) return &a;
        return nullptr;
    }
    const AgentModel& agent(int id) const;

    /// g(i, j): id of the j-th neighbor (j is 1-based, matching the paper).
    int g(int id, int j) const;
    /// q_i = |N_i|.
    int q(int id) const { return agent(id).degree(); }
};

/// Polytopic model uncertainty: per-agent vertex lists for A_ii and B_i.
struct UncertaintySpec {
    std::map<int, std::vector<Mat>> A_vertices;
    std::map<int, std::vector<Mat>> B_vertices;

    std::vector<Mat> a_vertices_for(const AgentModel& a) const {
        auto it = A_vertices.find(a.id);
        if (it != A_vertices.end()) return it->second;
        return {a.A_self};
    }
    std::vector<Mat> b_vertices_for(const AgentModel& a) const {
        auto it = B_vertices.find(a.id);
        if (it != B_vertices.end()) return it->second;
        return {a.B};
    }
};

struct Scenario {
    NeighborGraph graph;
    std::map<std::pair<int, int>, Mlp> nets;  // (i, j) -> pi_ij
    std::map<int, Box> init;                  // per agent id
    std::map<int, Vec> reference;             // optional per-agent reference state
    std::optional<UncertaintySpec> uncertainty;

    int nx() const;
    int nu() const;
    const Mlp& net(int i, int j) const;
    std::vector<int> verified_ids() const;  // non-static agents, ascending id
};

struct ValidationIssue {
    enum class Kind {
        DimensionMismatch,
        MissingNetwork,
        EmptyNeighborSet,
        InvertedBounds,
        UnknownNeighbor,
        SelfLoop,
        BadUncertainty,
        BadInitialSet,
    };
    Kind kind;
    int agent = 0;
    int neighbor = 0;  // 0 when not applicable
    std::string message;
};

/// Checks every structural invariant of the scenario and returns the complete
/// list of violations (empty = valid). Side-effect free and idempotent.
std::vector<ValidationIssue> validate_scenario(const Scenario& s);

/// Throwing wrapper around validate_scenario.
struct ScenarioError : Error {
    std::vector<ValidationIssue> issues;
    explicit ScenarioError(std::vector<ValidationIssue> iss);
};
void require_valid(const Scenario& s);

std::string to_string(ValidationIssue::Kind k);

}  // namespace mareach
