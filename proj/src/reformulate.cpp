#include "mareach/reformulate.hpp"

namespace mareach {

Mat build_lambda(int q, int n_x) {
    if (q < 1 || n_x < 1)
        throw InvalidDimension("build_lambda: q and n_x must be positive");
    Mat lambda = Mat::Zero(2 * q * n_x, (1 + q) * n_x);
    for (int r = 0; r < q; ++r) {
        // row-block 2r selects x_i, row-block 2r+1 the r-th neighbor block
        lambda.block(2 * r * n_x, 0, n_x, n_x).setIdentity();
        lambda.block((2 * r + 1) * n_x, (1 + r) * n_x, n_x, n_x).setIdentity();
    }
    return lambda;
}

Mat build_omega(int q, int n_u) {
    if (q < 1 || n_u < 1)
        throw InvalidDimension("build_omega: q and n_u must be positive");
    Mat omega(n_u, q * n_u);
    for (int r = 0; r < q; ++r) omega.block(0, r * n_u, n_u, n_u).setIdentity();
    return omega;
}

namespace {

Mat blkdiag(const std::vector<const Mat*>& blocks) {
    int rows = 0, cols = 0;
    for (const Mat* b : blocks) {
        rows += static_cast<int>(b->rows());
        cols += static_cast<int>(b->cols());
    }
    Mat out = Mat::Zero(rows, cols);
    int r = 0, c = 0;
    for (const Mat* b : blocks) {
        out.block(r, c, b->rows(), b->cols()) = *b;
        r += static_cast<int>(b->rows());
        c += static_cast<int>(b->cols());
    }
    return out;
}

Vec vstack(const std::vector<const Vec*>& parts) {
    int n = 0;
    for (const Vec* p : parts) n += static_cast<int>(p->size());
    Vec out(n);
    int at = 0;
    for (const Vec* p : parts) {
        out.segment(at, p->size()) = *p;
        at += static_cast<int>(p->size());
    }
    return out;
}

}  // namespace

Vec evaluate(const Mlp& net, const Vec& x) {
    if (x.size() != net.input_width())
        throw DimensionMismatch("evaluate: input width " + std::to_string(x.size()) +
                                " != " + std::to_string(net.input_width()));
    Vec z = x;
    for (size_t l = 0; l + 1 < net.layers.size(); ++l)
        z = (net.layers[l].W * z + net.layers[l].b).cwiseMax(0.0);
    return net.layers.back().W * z + net.layers.back().b;
}

EvalTrace evaluate(const MergedMlp& net, const Vec& x) {
    if (x.size() != net.input_width())
        throw DimensionMismatch("evaluate: input width " + std::to_string(x.size()) +
                                " != " + std::to_string(net.input_width()));
    EvalTrace t;
    t.z.push_back(x);
    Vec z = x;
    for (size_t l = 0; l + 1 < net.base.layers.size(); ++l) {
        z = (net.base.layers[l].W * z + net.base.layers[l].b).cwiseMax(0.0);
        t.z.push_back(z);
    }
    Vec z1 = (net.sat1_W() * z + net.sat1_b()).cwiseMax(0.0);
    t.z.push_back(z1);
    Vec z2 = (net.sat2_W() * z1 + net.sat2_b()).cwiseMax(0.0);
    t.z.push_back(z2);
    t.u = -z2 + net.u_upper;
    return t;
}

Vec evaluate_base(const MergedMlp& net, const Vec& x) { return evaluate(net.base, x); }

MergedMlp merge_networks(const AgentModel& agent, const std::vector<const Mlp*>& nets,
                         const std::vector<Vec>& pair_refs) {
    const int q = static_cast<int>(nets.size());
    if (q < 1) throw InvalidDimension("merge_networks: need at least one network");
    const Mlp& first = *nets.front();
    const int depth = first.depth();
    for (const Mlp* n : nets) {
        if (n->depth() != depth)
            throw StructureMismatch("merge_networks: networks differ in depth");
        for (size_t l = 0; l < n->layers.size(); ++l) {
            if (n->layers[l].W.rows() != first.layers[l].W.rows() ||
                n->layers[l].W.cols() != first.layers[l].W.cols())
                throw StructureMismatch("merge_networks: networks differ in layer widths");
        }
    }
    if (!pair_refs.empty() && static_cast<int>(pair_refs.size()) != q)
        throw DimensionMismatch("merge_networks: pair_refs size != neighbor count");

    const int n_x = first.input_width() / 2;
    const int n_u = first.output_width();

    // First-layer biases, optionally shifted by the per-pair reference offsets.
    std::vector<Vec> b0(static_cast<size_t>(q));
    for (int r = 0; r < q; ++r) {
        b0[static_cast<size_t>(r)] = nets[static_cast<size_t>(r)]->layers.front().b;
        if (!pair_refs.empty()) {
            const Vec& ref = pair_refs[static_cast<size_t>(r)];
            if (ref.size() != 2 * n_x)
                throw DimensionMismatch("merge_networks: pair reference width != 2*n_x");
            b0[static_cast<size_t>(r)] -= nets[static_cast<size_t>(r)]->layers.front().W * ref;
        }
    }

    MergedMlp merged;
    merged.u_lower = agent.u_lower;
    merged.u_upper = agent.u_upper;
    merged.base.layers.resize(first.layers.size());

    for (size_t l = 0; l < first.layers.size(); ++l) {
        std::vector<const Mat*> ws;
        std::vector<const Vec*> bs;
        for (const Mlp* n : nets) {
            ws.push_back(&n->layers[l].W);
            bs.push_back(&n->layers[l].b);
        }
        Mat W = blkdiag(ws);
        Vec b;
        if (l == 0) {
            std::vector<const Vec*> b0p;
            for (const auto& v : b0) b0p.push_back(&v);
            W = W * build_lambda(q, n_x);
            b = vstack(b0p);
        } else {
            b = vstack(bs);
        }
        if (l + 1 == first.layers.size()) {
            Mat omega = build_omega(q, n_u);
            W = omega * W;
            b = omega * b;
        }
        merged.base.layers[l] = {std::move(W), std::move(b)};
    }
    return merged;
}

Mat build_a_tilde(const Mat& a_self, const AgentModel& agent) {
    const int n_x = static_cast<int>(a_self.rows());
    Mat at(n_x, (1 + agent.degree()) * n_x);
    at.leftCols(n_x) = a_self;
    int c = n_x;
    for (const auto& [jid, Aij] : agent.A_neighbors) {
        at.middleCols(c, n_x) = Aij;
        c += n_x;
    }
    return at;
}

ReformedAgent reform_agent(const AgentModel& agent, const NeighborGraph& graph,
                           const std::map<std::pair<int, int>, Mlp>& nets,
                           const std::map<int, Vec>& reference) {
    if (agent.is_static) throw Error("reform_agent: static agents are not reformulated");
    std::vector<const Mlp*> pair_nets;
    std::vector<Vec> pair_refs;
    bool any_ref = false;
    for (const auto& [jid, Aij] : agent.A_neighbors) {
        auto it = nets.find({agent.id, jid});
        if (it == nets.end())
            throw Error("reform_agent: missing network for pair (" + std::to_string(agent.id) +
                        ", " + std::to_string(jid) + ")");
        pair_nets.push_back(&it->second);

        const int n_x = static_cast<int>(agent.A_self.rows());
        Vec r = Vec::Zero(2 * n_x);
        auto ri = reference.find(agent.id);
        if (ri != reference.end()) {
            r.head(n_x) = ri->second;
            any_ref = true;
        }
        auto rj = reference.find(jid);
        if (rj != reference.end()) {
            r.tail(n_x) = rj->second;
            any_ref = true;
        }
        pair_refs.push_back(std::move(r));
    }
    (void)graph;

    ReformedAgent ra;
    ra.agent = &agent;
    ra.A_tilde = build_a_tilde(agent.A_self, agent);
    ra.net = merge_networks(agent, pair_nets, any_ref ? pair_refs : std::vector<Vec>{});
    return ra;
}

}  // namespace mareach
