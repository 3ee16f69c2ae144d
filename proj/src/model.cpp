#include "mareach/model.hpp"

#include <algorithm>
#include <sstream>

namespace mareach {

const AgentModel& NeighborGraph::agent(int id) const {
    const AgentModel* a = find(id);
    if (!a) throw Error("unknown agent id " + std::to_string(id));
    return *a;
}

int NeighborGraph::g(int id, int j) const {
    const AgentModel& a = agent(id);
    if (j < 1 || j > a.degree())
        throw InvalidDimension("neighbor index " + std::to_string(j) + " out of range for agent " +
                               std::to_string(id));
    return a.A_neighbors[static_cast<size_t>(j - 1)].first;
}

int Scenario::nx() const {
    for (const auto& a : graph.agents)
        if (!a.is_static) return a.nx();
    return graph.agents.empty() ? 0 : graph.agents.front().nx();
}

int Scenario::nu() const {
    for (const auto& a : graph.agents)
        if (!a.is_static) return a.nu();
    return 0;
}

const Mlp& Scenario::net(int i, int j) const {
    auto it = nets.find({i, j});
    if (it == nets.end())
        throw Error("no network for pair (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    return it->second;
}

std::vector<int> Scenario::verified_ids() const {
    std::vector<int> ids;
    for (const auto& a : graph.agents)
        if (!a.is_static) ids.push_back(a.id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::string to_string(ValidationIssue::Kind k) {
    switch (k) {
        case ValidationIssue::Kind::DimensionMismatch: return "DimensionMismatch";
        case ValidationIssue::Kind::MissingNetwork: return "MissingNetwork";
        case ValidationIssue::Kind::EmptyNeighborSet: return "EmptyNeighborSet";
        case ValidationIssue::Kind::InvertedBounds: return "InvertedBounds";
        case ValidationIssue::Kind::UnknownNeighbor: return "UnknownNeighbor";
        case ValidationIssue::Kind::SelfLoop: return "SelfLoop";
        case ValidationIssue::Kind::BadUncertainty: return "BadUncertainty";
        case ValidationIssue::Kind::BadInitialSet: return "BadInitialSet";
    }
    return "?";
}

namespace {

void add_issue(std::vector<ValidationIssue>& out, ValidationIssue::Kind kind, int agent,
               int neighbor, const std::string& msg) {
    out.push_back({kind, agent, neighbor, msg});
}

bool mlp_chained(const Mlp& m) {
    for (size_t l = 0; l + 1 < m.layers.size(); ++l) {
        if (m.layers[l + 1].W.cols() != m.layers[l].W.rows()) return false;
    }
    for (const auto& layer : m.layers) {
        if (layer.b.size() != layer.W.rows()) return false;
    }
    return true;
}

}  // namespace

std::vector<ValidationIssue> validate_scenario(const Scenario& s) {
    std::vector<ValidationIssue> issues;
    using K = ValidationIssue::Kind;

    // Shared dimensions come from the first non-static agent.
    int nx = -1, nu = -1;
    for (const auto& a : s.graph.agents) {
        if (!a.is_static) {
            nx = static_cast<int>(a.A_self.rows());
            nu = static_cast<int>(a.B.cols());
            break;
        }
    }

    for (const auto& a : s.graph.agents) {
        if (a.is_static) {
            if (a.static_states.empty()) {
                add_issue(issues, K::DimensionMismatch, a.id, 0,
                          "static agent " + std::to_string(a.id) + " has no known states");
            } else if (nx > 0) {
                for (const auto& st : a.static_states) {
                    if (st.size() != nx) {
                        add_issue(issues, K::DimensionMismatch, a.id, 0,
                                  "static agent " + std::to_string(a.id) +
                                      " state width != n_x");
                        break;
                    }
                }
            }
            continue;
        }

        if (a.A_self.rows() != a.A_self.cols()) {
            add_issue(issues, K::DimensionMismatch, a.id, 0,
                      "agent " + std::to_string(a.id) + ": A_self not square");
            continue;
        }
        if (static_cast<int>(a.A_self.rows()) != nx || static_cast<int>(a.B.cols()) != nu ||
            static_cast<int>(a.B.rows()) != nx) {
            add_issue(issues, K::DimensionMismatch, a.id, 0,
                      "agent " + std::to_string(a.id) +
                          ": dimensions differ from the shared (n_x, n_u)");
        }
        if (a.u_lower.size() != nu || a.u_upper.size() != nu) {
            add_issue(issues, K::DimensionMismatch, a.id, 0,
                      "agent " + std::to_string(a.id) + ": control limit width != n_u");
        } else if ((a.u_lower.array() > a.u_upper.array()).any()) {
            add_issue(issues, K::InvertedBounds, a.id, 0,
                      "agent " + std::to_string(a.id) + ": u_lower > u_upper");
        }
        for (const auto& w : a.w_seq) {
            if (w.size() != nx) {
                add_issue(issues, K::DimensionMismatch, a.id, 0,
                          "agent " + std::to_string(a.id) + ": w entry width != n_x");
                break;
            }
        }

        if (a.A_neighbors.empty()) {
            add_issue(issues, K::EmptyNeighborSet, a.id, 0,
                      "agent " + std::to_string(a.id) + " has no neighbors");
        }
        int prev_id = -1;
        for (const auto& [jid, Aij] : a.A_neighbors) {
            if (jid == a.id)
                add_issue(issues, K::SelfLoop, a.id, jid,
                          "agent " + std::to_string(a.id) + " lists itself as neighbor");
            if (!s.graph.find(jid))
                add_issue(issues, K::UnknownNeighbor, a.id, jid,
                          "agent " + std::to_string(a.id) + ": unknown neighbor " +
                              std::to_string(jid));
            if (jid <= prev_id)
                add_issue(issues, K::DimensionMismatch, a.id, jid,
                          "agent " + std::to_string(a.id) + ": neighbors not in ascending order");
            prev_id = jid;
            if (Aij.rows() != nx || Aij.cols() != nx)
                add_issue(issues, K::DimensionMismatch, a.id, jid,
                          "agent " + std::to_string(a.id) + ": A_" + std::to_string(a.id) +
                              std::to_string(jid) + " is not n_x x n_x");

            auto it = s.nets.find({a.id, jid});
            if (it == s.nets.end()) {
                add_issue(issues, K::MissingNetwork, a.id, jid,
                          "missing network pi_(" + std::to_string(a.id) + "," +
                              std::to_string(jid) + ")");
            } else {
                const Mlp& net = it->second;
                if (net.layers.empty() || !mlp_chained(net)) {
                    add_issue(issues, K::DimensionMismatch, a.id, jid,
                              "network pi_(" + std::to_string(a.id) + "," + std::to_string(jid) +
                                  ") has inconsistent layer dimensions");
                } else {
                    if (net.input_width() != 2 * nx)
                        add_issue(issues, K::DimensionMismatch, a.id, jid,
                                  "network pi_(" + std::to_string(a.id) + "," +
                                      std::to_string(jid) + ") input width " +
                                      std::to_string(net.input_width()) + " != 2*n_x = " +
                                      std::to_string(2 * nx));
                    if (net.output_width() != nu)
                        add_issue(issues, K::DimensionMismatch, a.id, jid,
                                  "network pi_(" + std::to_string(a.id) + "," +
                                      std::to_string(jid) + ") output width != n_u");
                }
            }
        }

        auto ref = s.reference.find(a.id);
        if (ref != s.reference.end() && ref->second.size() != nx)
            add_issue(issues, K::DimensionMismatch, a.id, 0,
                      "agent " + std::to_string(a.id) + ": reference width != n_x");
    }

    for (const auto& [id, box] : s.init) {
        if (!s.graph.find(id)) {
            add_issue(issues, K::BadInitialSet, id, 0,
                      "initial box for unknown agent " + std::to_string(id));
            continue;
        }
        if (box.lower.size() != box.upper.size() ||
            (nx > 0 && !s.graph.agent(id).is_static && box.dim() != nx)) {
            add_issue(issues, K::BadInitialSet, id, 0,
                      "initial box for agent " + std::to_string(id) + " has wrong width");
        } else if ((box.lower.array() > box.upper.array()).any()) {
            add_issue(issues, K::InvertedBounds, id, 0,
                      "initial box for agent " + std::to_string(id) + " has lower > upper");
        }
    }
    for (const auto& a : s.graph.agents) {
        if (!a.is_static && !s.init.count(a.id))
            add_issue(issues, K::BadInitialSet, a.id, 0,
                      "no initial box for agent " + std::to_string(a.id));
    }

    if (s.uncertainty) {
        for (const auto& [id, verts] : s.uncertainty->A_vertices) {
            const AgentModel* a = s.graph.find(id);
            if (!a || a->is_static) {
                add_issue(issues, K::BadUncertainty, id, 0,
                          "A vertices given for unknown or static agent " + std::to_string(id));
                continue;
            }
            if (verts.empty())
                add_issue(issues, K::BadUncertainty, id, 0,
                          "agent " + std::to_string(id) + ": empty A vertex list");
            for (const auto& v : verts)
                if (v.rows() != a->A_self.rows() || v.cols() != a->A_self.cols())
                    add_issue(issues, K::BadUncertainty, id, 0,
                              "agent " + std::to_string(id) + ": A vertex shape mismatch");
        }
        for (const auto& [id, verts] : s.uncertainty->B_vertices) {
            const AgentModel* a = s.graph.find(id);
            if (!a || a->is_static) {
                add_issue(issues, K::BadUncertainty, id, 0,
                          "B vertices given for unknown or static agent " + std::to_string(id));
                continue;
            }
            if (verts.empty())
                add_issue(issues, K::BadUncertainty, id, 0,
                          "agent " + std::to_string(id) + ": empty B vertex list");
            for (const auto& v : verts)
                if (v.rows() != a->B.rows() || v.cols() != a->B.cols())
                    add_issue(issues, K::BadUncertainty, id, 0,
                              "agent " + std::to_string(id) + ": B vertex shape mismatch");
        }
    }

    return issues;
}

ScenarioError::ScenarioError(std::vector<ValidationIssue> iss)
    : Error([&iss] {
          std::ostringstream os;
          os << "invalid scenario (" << iss.size() << " issue(s)):";
          for (const auto& i : iss) os << "\n  [" << to_string(i.kind) << "] " << i.message;
          return os.str();
      }()),
      issues(std::move(iss)) {}

void require_valid(const Scenario& s) {
    auto issues = validate_scenario(s);
    if (!issues.empty()) throw ScenarioError(std::move(issues));
}

}  // namespace mareach
