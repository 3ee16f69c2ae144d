#include "mareach/sim.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace mareach {

DiscretizedModel zoh_discretize(const CtModel& ct) {
    if (ct.period <= 0.0) throw InvalidDimension("zoh_discretize: sample period must be > 0");
    const int n = static_cast<int>(ct.A_self.rows());
    if (ct.A_self.cols() != n) throw DimensionMismatch("zoh_discretize: A_self not square");

    // Stack every exogenous column block: [neighbors | B | L]. The augmented
    // exponential exp([[A, U],[0, 0]] T) has int_0^T exp(A s) ds * U top right.
    int m = 0;
    for (const auto& [jid, Aj] : ct.A_neighbors) {
        if (Aj.rows() != n) throw DimensionMismatch("zoh_discretize: neighbor block rows != n");
        m += static_cast<int>(Aj.cols());
    }
    m += static_cast<int>(ct.B.cols()) + static_cast<int>(ct.L.cols());

    Mat aug = Mat::Zero(n + m, n + m);
    aug.topLeftCorner(n, n) = ct.A_self;
    int c = n;
    for (const auto& [jid, Aj] : ct.A_neighbors) {
        aug.block(0, c, n, Aj.cols()) = Aj;
        c += static_cast<int>(Aj.cols());
    }
    if (ct.B.size()) {
        aug.block(0, c, n, ct.B.cols()) = ct.B;
        c += static_cast<int>(ct.B.cols());
    }
    if (ct.L.size()) aug.block(0, c, n, ct.L.cols()) = ct.L;

    Mat phi = (aug * ct.period).exp();
    if (!phi.allFinite()) throw NonFiniteEntries("zoh_discretize: exponential not finite");

    DiscretizedModel out;
    out.A_self = phi.topLeftCorner(n, n);
    c = n;
    for (const auto& [jid, Aj] : ct.A_neighbors) {
        out.A_neighbors.emplace_back(jid, phi.block(0, c, n, Aj.cols()));
        c += static_cast<int>(Aj.cols());
    }
    if (ct.B.size()) {
        out.B = phi.block(0, c, n, ct.B.cols());
        c += static_cast<int>(ct.B.cols());
    } else {
        out.B = Mat::Zero(n, 0);
    }
    out.L = ct.L.size() ? Mat(phi.block(0, c, n, ct.L.cols())) : Mat::Zero(n, 0);
    return out;
}

namespace {

Vec control_input(const Scenario& s, const AgentModel& a, const std::map<int, Vec>& states) {
    const int n_x = a.nx();
    Vec pre = Vec::Zero(a.nu());
    for (const auto& [jid, Aij] : a.A_neighbors) {
        Vec pair(2 * n_x);
        pair << states.at(a.id), states.at(jid);
        auto ri = s.reference.find(a.id);
        if (ri != s.reference.end()) pair.head(n_x) -= ri->second;
        auto rj = s.reference.find(jid);
        if (rj != s.reference.end()) pair.tail(n_x) -= rj->second;
        pre += evaluate(s.net(a.id, jid), pair);
    }
    return pre.cwiseMax(a.u_lower).cwiseMin(a.u_upper);
}

// Uniform point in the simplex of the given size (vertex weights).
Vec simplex_draw(int size, std::mt19937_64& rng) {
    if (size == 1) return Vec::Ones(1);
    std::exponential_distribution<double> ed(1.0);
    Vec w(size);
    for (int i = 0; i < size; ++i) w[i] = ed(rng);
    return w / w.sum();
}

}  // namespace

Trajectory simulate(const Scenario& s, const std::map<int, Vec>& initial, int steps,
                    bool draw_uncertain, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Trajectory traj;
    std::map<int, Vec> state;
    for (const auto& a : s.graph.agents) {
        Vec x0 = a.is_static ? a.static_state_at(0) : initial.at(a.id);
        state[a.id] = x0;
        traj[a.id] = {x0};
    }

    for (int k = 0; k < steps; ++k) {
        std::map<int, Vec> next;
        for (const auto& a : s.graph.agents) {
            if (a.is_static) {
                next[a.id] = a.static_state_at(k + 1);
                continue;
            }
            Mat A = a.A_self;
            Mat B = a.B;
            if (draw_uncertain && s.uncertainty) {
                const auto av = s.uncertainty->a_vertices_for(a);
                const auto bv = s.uncertainty->b_vertices_for(a);
                Vec alpha = simplex_draw(static_cast<int>(av.size()), rng);
                Vec beta = simplex_draw(static_cast<int>(bv.size()), rng);
                A.setZero();
                for (size_t c = 0; c < av.size(); ++c) A += alpha[static_cast<int>(c)] * av[c];
                B.setZero();
                for (size_t d = 0; d < bv.size(); ++d) B += beta[static_cast<int>(d)] * bv[d];
            }
            Vec x = A * state.at(a.id);
            for (const auto& [jid, Aij] : a.A_neighbors) x += Aij * state.at(jid);
            x += B * control_input(s, a, state) + a.w_at(k);
            next[a.id] = x;
        }
        for (auto& [id, x] : next) {
            state[id] = x;
            traj[id].push_back(x);
        }
    }
    return traj;
}

Box interval_oracle(const ReformedAgent& ra, const Box& box, const Vec& w) {
    if (box.dim() != ra.stacked_dim())
        throw DimensionMismatch("interval_oracle: box dimension != (1+q)*n_x");
    const Mlp& base = ra.net.base;

    // Constant controller: all weights past the first layer are zero, so the
    // pre-saturation output does not depend on the input.
    bool constant = true;
    for (size_t l = 1; l < base.layers.size(); ++l)
        if (base.layers[l].W.cwiseAbs().maxCoeff() != 0.0) constant = false;

    Mat K;  // effective affine controller u = K x + c over the box
    Vec c;
    if (constant) {
        c = evaluate(ra.net, box.center()).u;
        K = Mat::Zero(ra.net.nu(), box.dim());
    } else if (base.layers.size() == 1) {
        // Single affine layer; valid only while the saturation stays inactive.
        K = base.layers[0].W;
        c = base.layers[0].b;
        Vec lo = c, hi = c;
        for (int r = 0; r < K.rows(); ++r)
            for (int col = 0; col < K.cols(); ++col) {
                const double k = K(r, col);
                lo[r] += std::min(k * box.lower[col], k * box.upper[col]);
                hi[r] += std::max(k * box.lower[col], k * box.upper[col]);
            }
        if ((lo.array() < ra.net.u_lower.array()).any() ||
            (hi.array() > ra.net.u_upper.array()).any())
            throw NotAffine("interval_oracle: affine controller saturates over the box");
    } else {
        throw NotAffine("interval_oracle: hidden weights are nonzero");
    }

    // Exact hull of the affine map (A_tilde + B K) x + B c + w; box coordinates
    // range independently, so per-row sign-split interval arithmetic is exact.
    Mat eff = ra.A_tilde + ra.agent->B * K;
    Vec shift = ra.agent->B * c + w;
    Box out;
    out.lower = shift;
    out.upper = shift;
    for (int r = 0; r < eff.rows(); ++r)
        for (int col = 0; col < eff.cols(); ++col) {
            const double a = eff(r, col);
            out.lower[r] += std::min(a * box.lower[col], a * box.upper[col]);
            out.upper[r] += std::max(a * box.lower[col], a * box.upper[col]);
        }
    return out;
}

ContainmentReport containment_check(const std::map<int, std::vector<Box>>& boxes,
                                    const Scenario& s, long samples, double eps,
                                    std::uint64_t seed, bool draw_uncertain) {
    ContainmentReport report;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const auto ids = s.verified_ids();
    int horizon = -1;
    for (int id : ids) {
        const auto it = boxes.find(id);
        if (it == boxes.end()) continue;
        const int h = static_cast<int>(it->second.size()) - 1;
        horizon = horizon < 0 ? h : std::min(horizon, h);
    }
    if (horizon < 0) return report;

    // Corner enumeration over the joint initial box, capped.
    long corner_total = 1;
    for (int id : ids) {
        for (int t = 0; t < s.init.at(id).dim(); ++t) {
            if (s.init.at(id).width()[t] > 0) corner_total *= 2;
            if (corner_total > (1L << 16)) break;
        }
        if (corner_total > (1L << 16)) break;
    }
    const bool do_corners = corner_total <= (1L << 16);

    auto run_one = [&](const std::map<int, Vec>& x0, std::uint64_t traj_seed) {
        Trajectory traj = simulate(s, x0, horizon, draw_uncertain, traj_seed);
        for (int id : ids) {
            const auto it = boxes.find(id);
            if (it == boxes.end()) continue;
            for (int k = 0; k <= horizon; ++k) {
                const Box& bx = it->second[static_cast<size_t>(k)];
                const Vec& x = traj[id][static_cast<size_t>(k)];
                for (int t = 0; t < bx.dim(); ++t) {
                    double out = std::max(bx.lower[t] - x[t], x[t] - bx.upper[t]);
                    if (out > eps)
                        report.violations.push_back({id, k, t, out});
                }
            }
        }
        ++report.samples;
    };

    if (do_corners) {
        for (long mask = 0; mask < corner_total; ++mask) {
            std::map<int, Vec> x0;
            long bit = 0;
            for (int id : ids) {
                const Box& b0 = s.init.at(id);
                Vec x = b0.lower;
                for (int t = 0; t < b0.dim(); ++t) {
                    if (b0.width()[t] > 0) {
                        if ((mask >> bit) & 1) x[t] = b0.upper[t];
                        ++bit;
                    }
                }
                x0[id] = x;
            }
            run_one(x0, seed + static_cast<std::uint64_t>(mask));
        }
    }
    for (long i = 0; i < samples; ++i) {
        std::map<int, Vec> x0;
        for (int id : ids) {
            const Box& b0 = s.init.at(id);
            Vec x(b0.dim());
            for (int t = 0; t < b0.dim(); ++t)
                x[t] = b0.lower[t] + unit(rng) * (b0.upper[t] - b0.lower[t]);
            x0[id] = x;
        }
        run_one(x0, seed ^ (0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(i)));
    }
    return report;
}

}  // namespace mareach
