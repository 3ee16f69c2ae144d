#include "mareach/baseline.hpp"

#include <algorithm>
#include <chrono>

#include "parallel.hpp"

namespace mareach {

int AugmentedSystem::block_offset(int id) const {
    int off = 0;
    for (int aid : agent_ids) {
        if (aid == id) return off;
        off += nx_each;
    }
    throw Error("block_offset: unknown agent id " + std::to_string(id));
}

Vec AugmentedSystem::w_at(const Scenario& s, int k) const {
    Vec w = Vec::Zero(total_dim());
    for (int id : agent_ids) {
        const AgentModel& a = s.graph.agent(id);
        if (a.is_static)
            w.segment(block_offset(id), nx_each) = a.static_state_at(k + 1) - a.static_state_at(k);
        else
            w.segment(block_offset(id), nx_each) = a.w_at(k);
    }
    return w;
}

Box AugmentedSystem::stacked_box(const std::map<int, Box>& per_agent) const {
    Box out;
    out.lower = Vec::Zero(total_dim());
    out.upper = Vec::Zero(total_dim());
    for (int id : agent_ids) {
        const Box& b = per_agent.at(id);
        out.lower.segment(block_offset(id), nx_each) = b.lower;
        out.upper.segment(block_offset(id), nx_each) = b.upper;
    }
    return out;
}

std::map<int, Box> AugmentedSystem::split_box(const Box& stacked) const {
    std::map<int, Box> out;
    for (int id : agent_ids)
        out[id] = Box(stacked.lower.segment(block_offset(id), nx_each),
                      stacked.upper.segment(block_offset(id), nx_each));
    return out;
}

AugmentedSystem augment(const Scenario& s) {
    require_valid(s);
    AugmentedSystem aug;
    aug.nx_each = s.nx();
    for (const auto& a : s.graph.agents) aug.agent_ids.push_back(a.id);
    std::sort(aug.agent_ids.begin(), aug.agent_ids.end());
    aug.verified_ids = s.verified_ids();

    const int n_x = aug.nx_each;
    const int n_u = s.nu();
    const int total = n_x * static_cast<int>(aug.agent_ids.size());

    aug.A_aug = Mat::Zero(total, total);
    aug.B_aug = Mat::Zero(total, n_u * static_cast<int>(aug.verified_ids.size()));
    for (int id : aug.agent_ids) {
        const AgentModel& a = s.graph.agent(id);
        const int r = aug.block_offset(id);
        if (a.is_static) {
            // Known trajectory: x_{k+1} = x_k + (known increment in w_aug).
            aug.A_aug.block(r, r, n_x, n_x).setIdentity();
            continue;
        }
        aug.A_aug.block(r, r, n_x, n_x) = a.A_self;
        for (const auto& [jid, Aij] : a.A_neighbors)
            aug.A_aug.block(r, aug.block_offset(jid), n_x, n_x) = Aij;
    }

    // Block-merged network over the stacked state: each verified agent's merged
    // network is lifted by the selector that extracts [x_i; x_{g(i,1)}; ...].
    std::vector<MergedMlp> nets;
    for (size_t vi = 0; vi < aug.verified_ids.size(); ++vi) {
        const int id = aug.verified_ids[vi];
        const AgentModel& a = s.graph.agent(id);
        nets.push_back(reform_agent(a, s.graph, s.nets, s.reference).net);
        aug.B_aug.block(aug.block_offset(id), static_cast<int>(vi) * n_u, n_x, n_u) = a.B;
    }

    const int L = nets.front().base.depth();
    for (const auto& n : nets)
        if (n.base.depth() != L)
            throw StructureMismatch("augment: agents have networks of different depth");

    MergedMlp net;
    net.base.layers.resize(static_cast<size_t>(L) + 1);
    for (int l = 0; l <= L; ++l) {
        int rows = 0, cols = 0;
        for (const auto& n : nets) {
            rows += static_cast<int>(n.base.layers[static_cast<size_t>(l)].W.rows());
            cols += static_cast<int>(n.base.layers[static_cast<size_t>(l)].W.cols());
        }
        Mat W;
        Vec b(rows);
        if (l == 0) {
            W = Mat::Zero(rows, total);
            int r = 0;
            for (size_t vi = 0; vi < nets.size(); ++vi) {
                const AgentModel& a = s.graph.agent(aug.verified_ids[vi]);
                const Mat& W0 = nets[vi].base.layers[0].W;
                // Column blocks of the per-agent first layer follow g-order.
                W.block(r, aug.block_offset(a.id), W0.rows(), n_x) = W0.middleCols(0, n_x);
                int seg = 1;
                for (const auto& [jid, Aij] : a.A_neighbors) {
                    W.block(r, aug.block_offset(jid), W0.rows(), n_x) =
                        W0.middleCols(seg * n_x, n_x);
                    ++seg;
                }
                b.segment(r, W0.rows()) = nets[vi].base.layers[0].b;
                r += static_cast<int>(W0.rows());
            }
        } else {
            W = Mat::Zero(rows, cols);
            int r = 0, c = 0;
            for (const auto& n : nets) {
                const auto& layer = n.base.layers[static_cast<size_t>(l)];
                W.block(r, c, layer.W.rows(), layer.W.cols()) = layer.W;
                b.segment(r, layer.W.rows()) = layer.b;
                r += static_cast<int>(layer.W.rows());
                c += static_cast<int>(layer.W.cols());
            }
        }
        net.base.layers[static_cast<size_t>(l)] = {std::move(W), std::move(b)};
    }
    net.u_lower.resize(static_cast<int>(nets.size()) * n_u);
    net.u_upper.resize(static_cast<int>(nets.size()) * n_u);
    for (size_t vi = 0; vi < nets.size(); ++vi) {
        net.u_lower.segment(static_cast<int>(vi) * n_u, n_u) = nets[vi].u_lower;
        net.u_upper.segment(static_cast<int>(vi) * n_u, n_u) = nets[vi].u_upper;
    }
    aug.net_aug = std::move(net);
    return aug;
}

Box monolithic_step(const AugmentedSystem& aug, const Scenario& s, const Box& stacked_at_k,
                    int k, const ReachSettings& settings, std::vector<SolveRecord>* log,
                    std::vector<std::string>* warnings) {
    if (s.uncertainty && !s.uncertainty->A_vertices.empty())
        throw Error("monolithic mode does not support model uncertainty");

    const int total = aug.total_dim();
    AgentModel shell;  // carries the augmented matrices through the facet assembly
    shell.id = 0;
    shell.A_self = aug.A_aug;
    shell.B = aug.B_aug;
    shell.u_lower = aug.net_aug.u_lower;
    shell.u_upper = aug.net_aug.u_upper;

    ReformedAgent ra;
    ra.agent = &shell;
    ra.A_tilde = aug.A_aug;
    ra.net = aug.net_aug;

    const Vec w = aug.w_at(s, k);
    const double wmin = stacked_at_k.width().minCoeff();
    const double wmax = stacked_at_k.width().maxCoeff();
    if (warnings && wmin > 0 && wmax / wmin > 1e6)
        warnings->push_back("monolithic step " + std::to_string(k) +
                            ": box widths span a dynamic range > 1e6");

    // Facets only for verified coordinates; static blocks have known states
    // and advance analytically (in both modes they are not verified).
    std::vector<int> coords;
    for (int id : aug.verified_ids)
        for (int t = 0; t < aug.nx_each; ++t) coords.push_back(aug.block_offset(id) + t);
    const int nf = static_cast<int>(coords.size());

    std::vector<SolveReport> reports(static_cast<size_t>(2 * nf));
    detail::run_parallel(2 * nf, settings.workers, [&](int p) {
        Vec H = Vec::Zero(total);
        if (p < nf)
            H[coords[static_cast<size_t>(p)]] = 1.0;
        else
            H[coords[static_cast<size_t>(p - nf)]] = -1.0;
        FacetSdp sdp = assemble_facet_sdp(ra, stacked_at_k, H, w, {}, settings.sdp);
        SolveReport rep = solve_facet(sdp, settings.sdp);
        SdpSettings relaxed = settings.sdp;
        for (int r = 0; r < settings.retries && rep.status != SolveReport::Status::optimal;
             ++r) {
            relaxed.tol *= settings.retry_tol_factor;
            relaxed.max_iters += 100;
            SolveReport again = solve_facet(sdp, relaxed);
            again.wall_seconds += rep.wall_seconds;
            rep = again;
        }
        reports[static_cast<size_t>(p)] = rep;
    });

    Box out;
    out.lower = Vec::Zero(total);
    out.upper = Vec::Zero(total);
    for (int id : aug.agent_ids) {
        const AgentModel& a = s.graph.agent(id);
        if (!a.is_static) continue;
        const Vec next = a.static_state_at(k + 1);
        out.lower.segment(aug.block_offset(id), aug.nx_each) = next;
        out.upper.segment(aug.block_offset(id), aug.nx_each) = next;
    }
    for (int p = 0; p < 2 * nf; ++p) {
        const SolveReport& rep = reports[static_cast<size_t>(p)];
        if (log) log->push_back({0, k, p, rep});
        if (rep.status != SolveReport::Status::optimal || !rep.h_value)
            throw SolverFailure("monolithic facet solve failed (step " + std::to_string(k) +
                                ", facet " + std::to_string(p) + "): " + to_string(rep.status));
        if (p < nf)
            out.upper[coords[static_cast<size_t>(p)]] = *rep.h_value;
        else
            out.lower[coords[static_cast<size_t>(p - nf)]] = -*rep.h_value;
    }
    return out;
}

ReachResult monolithic_multi_step(const Scenario& s, int steps, const ReachSettings& settings) {
    const auto t0 = std::chrono::steady_clock::now();
    AugmentedSystem aug = augment(s);

    ReachResult res;
    res.mode = "monolithic";

    std::map<int, Box> per_agent;
    for (const auto& a : s.graph.agents)
        per_agent[a.id] = a.is_static ? Box::point(a.static_state_at(0)) : s.init.at(a.id);
    for (const auto& [id, b] : per_agent) res.boxes[id] = {b};

    Box current = aug.stacked_box(per_agent);
    for (int k = 0; k < steps; ++k) {
        current = monolithic_step(aug, s, current, k, settings, &res.solves, &res.warnings);
        for (const auto& [id, b] : aug.split_box(current)) res.boxes[id].push_back(b);
    }

    for (const auto& rec : res.solves) res.sdp_seconds += rec.report.wall_seconds;
    res.total_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace mareach
