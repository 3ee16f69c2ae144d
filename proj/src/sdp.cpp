#include "mareach/sdp.hpp"

#include <chrono>
#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace mareach {

std::string to_string(SolveReport::Status s) {
    switch (s) {
        case SolveReport::Status::optimal: return "optimal";
        case SolveReport::Status::infeasible: return "infeasible";
        case SolveReport::Status::numerical_failure: return "numerical-failure";
        case SolveReport::Status::limit: return "limit";
    }
    return "?";
}

std::vector<std::pair<Mat, Mat>> uncertainty_vertices(const AgentModel& agent,
                                                      const std::optional<UncertaintySpec>& u) {
    std::vector<Mat> av{agent.A_self}, bv{agent.B};
    if (u) {
        av = u->a_vertices_for(agent);
        bv = u->b_vertices_for(agent);
    }
    if (av.empty() || bv.empty())
        throw InvalidDimension("uncertainty_vertices: empty vertex list");
    std::vector<std::pair<Mat, Mat>> out;
    for (const Mat& a : av)
        for (const Mat& b : bv) {
            // Exact duplicates add identical LMI blocks; drop them.
            bool dup = false;
            for (const auto& [pa, pb] : out)
                if (pa == a && pb == b) dup = true;
            if (!dup) out.emplace_back(a, b);
        }
    return out;
}

namespace {

using Entries = std::vector<std::pair<int, double>>;

Entries row_entries(const Mat& E, int row) {
    Entries out;
    for (int c = 0; c < E.cols(); ++c)
        if (E(row, c) != 0.0) out.emplace_back(c, E(row, c));
    return out;
}

// w_ab (a b^T + b a^T) + w_aa a a^T + w_bb b b^T as a sparse symmetric matrix.
SpMat sym_pair(int dim, const Entries& a, const Entries& b, double w_ab, double w_aa,
               double w_bb) {
    std::vector<Eigen::Triplet<double>> trips;
    auto add = [&](const Entries& u, const Entries& v, double w) {
        if (w == 0.0) return;
        for (const auto& [i, ui] : u)
            for (const auto& [j, vj] : v) trips.emplace_back(i, j, w * ui * vj);
    };
    add(a, b, w_ab);
    add(b, a, w_ab);
    add(a, a, w_aa);
    add(b, b, w_bb);
    SpMat out(dim, dim);
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

SpMat sp_sum(const SpMat& a, const SpMat& b) { return SpMat(a + b); }

}  // namespace

LmiProblem FacetSdp::to_lmi() const {
    const int d = layout.dim();
    const int m = num_vars();
    const int cidx = layout.const_index();
    LmiProblem prob;
    prob.c = Vec::Zero(m);
    prob.c[h_index()] = 1.0;
    prob.G.resize(0, m);
    prob.g.resize(0);

    // Shared coefficient matrices, built from the QC structure directly: each
    // multiplier touches the basis through at most two (sparse) vectors.
    std::vector<SpMat> coeff(static_cast<size_t>(m));
    for (int t = 0; t < n_gamma; ++t) {
        const double l = in_box.lower[t], u = in_box.upper[t];
        std::vector<Eigen::Triplet<double>> tr;
        tr.emplace_back(t, t, -2.0);
        tr.emplace_back(t, cidx, l + u);
        tr.emplace_back(cidx, t, l + u);
        tr.emplace_back(cidx, cidx, -2.0 * l * u);
        SpMat f(d, d);
        f.setFromTriplets(tr.begin(), tr.end());
        coeff[static_cast<size_t>(gamma_off() + t)] = std::move(f);
    }

    const Mat E = mid_selector(net, layout);
    const Entries e_const{{cidx, 1.0}};
    for (int t = 0; t < n_mid; ++t) {
        const Entries pre = row_entries(E, t);            // nu_hat_t in the shared basis
        const Entries act = row_entries(E, n_mid + t);    // nu_t (selector)
        coeff[static_cast<size_t>(lambda_off() + t)] = sym_pair(d, pre, act, 1.0, 0.0, -2.0);
        coeff[static_cast<size_t>(nu_off() + t)] =
            sp_sum(sym_pair(d, act, e_const, 1.0, 0.0, 0.0),
                   sym_pair(d, pre, e_const, -1.0, 0.0, 0.0));
        coeff[static_cast<size_t>(eta_off() + t)] = sym_pair(d, act, e_const, 1.0, 0.0, 0.0);
    }
    {
        SpMat fh(d, d);
        fh.insert(cidx, cidx) = -2.0;
        fh.makeCompressed();
        coeff[static_cast<size_t>(h_index())] = std::move(fh);
    }

    for (const auto& psi : psi_builders) {
        LmiProblem::PsdBlock blk;
        blk.F0 = psi(0.0);
        blk.coeff = coeff;
        prob.blocks.push_back(std::move(blk));
    }

    std::vector<int> nonneg;
    for (int t = 0; t < n_gamma; ++t) nonneg.push_back(gamma_off() + t);
    for (int t = 0; t < n_mid; ++t) nonneg.push_back(nu_off() + t);
    for (int t = 0; t < n_mid; ++t) nonneg.push_back(eta_off() + t);
    prob.add_nonneg(nonneg);
    return prob;
}

Mat FacetSdp::lmi_value(int vertex, const Vec& gamma, const Vec& lambda, const Vec& nu,
                        const Vec& eta, double h) const {
    return delta_builder(gamma) + theta_builder(lambda, nu, eta) +
           psi_builders.at(static_cast<size_t>(vertex))(h);
}

FacetSdp assemble_facet_sdp(const ReformedAgent& ra, const Box& in_box, const Vec& H_p,
                            const Vec& w_k, const std::vector<std::pair<Mat, Mat>>& vertices,
                            const SdpSettings& settings) {
    if (in_box.dim() != ra.stacked_dim())
        throw DimensionMismatch("assemble_facet_sdp: input box dimension != (1+q)*n_x");
    if (H_p.size() != ra.nx())
        throw DimensionMismatch("assemble_facet_sdp: facet normal length != n_x");
    if (w_k.size() != ra.nx())
        throw DimensionMismatch("assemble_facet_sdp: w length != n_x");

    // Partition the stacked coordinates: zero-width ones are known constants
    // and get substituted into the constant column; positive widths below the
    // floor are inflated to it (sound, the input set only grows).
    Box box = in_box;
    std::vector<int> kept;
    std::vector<int> subbed;
    for (int t = 0; t < box.dim(); ++t) {
        const double width = box.upper[t] - box.lower[t];
        const double floor_w = settings.degenerate_width * (1.0 + std::abs(box.lower[t]));
        if (width == 0.0) {
            subbed.push_back(t);
        } else {
            if (width < floor_w) {
                const double c = 0.5 * (box.lower[t] + box.upper[t]);
                box.lower[t] = c - 0.5 * floor_w;
                box.upper[t] = c + 0.5 * floor_w;
            }
            kept.push_back(t);
        }
    }
    if (kept.empty()) {  // fully known input: keep one coordinate, inflated
        const int t = subbed.back();
        subbed.pop_back();
        const double floor_w = settings.degenerate_width * (1.0 + std::abs(box.lower[t]));
        box.lower[t] -= 0.5 * floor_w;
        box.upper[t] += 0.5 * floor_w;
        kept = {t};
        std::sort(kept.begin(), kept.end());
    }

    FacetSdp sdp;
    sdp.H = H_p;
    sdp.kept_coords = kept;

    // Every coordinate is re-expressed relative to its box center (an exact
    // affine substitution). Zero-width coordinates then have range {0} and are
    // dropped. Centering keeps the multipliers and the Schur complement well
    // scaled for off-origin boxes.
    const Vec center = 0.5 * (box.lower + box.upper);
    const int nk = static_cast<int>(kept.size());
    Box box_red(Vec::Zero(nk), Vec::Zero(nk));
    for (int i = 0; i < nk; ++i) {
        const int t = kept[static_cast<size_t>(i)];
        box_red.lower[i] = box.lower[t] - center[t];
        box_red.upper[i] = box.upper[t] - center[t];
    }

    // Reduced network: the center shift and the substituted coordinates fold
    // into the first-layer bias.
    MergedMlp net = ra.net;
    {
        Mat& W0 = net.base.layers.front().W;
        Vec& b0 = net.base.layers.front().b;
        b0 += W0 * center;
        Mat W0r(W0.rows(), nk);
        for (int i = 0; i < nk; ++i) W0r.col(i) = W0.col(kept[static_cast<size_t>(i)]);
        W0 = std::move(W0r);
    }

    sdp.net = net;
    sdp.in_box = box_red;
    sdp.layout = BasisLayout::for_net(net);
    sdp.n_gamma = sdp.layout.n0;
    sdp.n_mid = sdp.layout.mid_width();

    const BasisLayout layout = sdp.layout;
    sdp.delta_builder = [box_red, layout](const Vec& gamma) {
        return lift_input_qc(build_input_qc(box_red, gamma), layout);
    };
    const MergedMlp net_copy = net;
    sdp.theta_builder = [net_copy, layout](const Vec& lambda, const Vec& nu, const Vec& eta) {
        return lift_relu_qc(net_copy, build_relu_qc(lambda, nu, eta), layout);
    };

    std::vector<std::pair<Mat, Mat>> verts = vertices;
    if (verts.empty()) verts.emplace_back(ra.agent->A_self, ra.agent->B);
    for (const auto& [a_vert, b_vert] : verts) {
        Mat a_full = build_a_tilde(a_vert, *ra.agent);
        // The center shift moves into the known-input column; kept columns are
        // reindexed.
        Vec w = w_k + a_full * center;
        Mat a_tilde(a_full.rows(), nk);
        for (int i = 0; i < nk; ++i) a_tilde.col(i) = a_full.col(kept[static_cast<size_t>(i)]);
        Mat b = b_vert;
        Vec ubar = ra.net.u_upper;
        Vec H = H_p;
        sdp.psi_builders.push_back([a_tilde, b, ubar, w, H, layout](double h) {
            return lift_output_qc(a_tilde, b, ubar, w, build_output_qc(H, h), layout);
        });
    }
    return sdp;
}

namespace {

double certify(const FacetSdp& sdp, const Vec& y) {
    Vec gamma = y.segment(sdp.gamma_off(), sdp.n_gamma).cwiseMax(0.0);
    Vec lambda = y.segment(sdp.lambda_off(), sdp.n_mid);
    Vec nu = y.segment(sdp.nu_off(), sdp.n_mid).cwiseMax(0.0);
    Vec eta = y.segment(sdp.eta_off(), sdp.n_mid).cwiseMax(0.0);
    const double h = y[sdp.h_index()];
    double worst = -std::numeric_limits<double>::infinity();
    for (size_t v = 0; v < sdp.psi_builders.size(); ++v) {
        Mat lmi = sdp.lmi_value(static_cast<int>(v), gamma, lambda, nu, eta, h);
        Eigen::SelfAdjointEigenSolver<Mat> es(lmi, Eigen::EigenvaluesOnly);
        worst = std::max(worst, es.eigenvalues().maxCoeff());
    }
    return worst;
}

void conjugate_in_place(LmiProblem& prob, const Vec& s) {
    for (auto& blk : prob.blocks) {
        blk.F0 = s.asDiagonal() * blk.F0 * s.asDiagonal();
        for (auto& f : blk.coeff) {
            if (f.nonZeros() == 0) continue;
            for (int k = 0; k < f.outerSize(); ++k)
                for (SpMat::InnerIterator it(f, k); it; ++it)
                    it.valueRef() *= s[it.row()] * s[it.col()];
        }
    }
}

}  // namespace

SolveReport solve_facet(const FacetSdp& sdp, const SdpSettings& settings) {
    const auto t0 = std::chrono::steady_clock::now();
    SolveReport rep;

    LmiProblem prob = sdp.to_lmi();
    if (settings.prescale) {
        // Congruence by diag(s,..,1) rescales the basis; the feasible set in y
        // and the optimal h are unchanged. The factor is capped so rescaled
        // first-layer weights stay within a few orders of the bias column.
        Vec scale = Vec::Ones(sdp.layout.dim());
        for (int t = 0; t < sdp.layout.n0; ++t) {
            const double mag =
                std::max(std::abs(sdp.in_box.lower[t]), std::abs(sdp.in_box.upper[t]));
            scale[t] = 1.0 / std::clamp(mag, 1e-2, 1e2);
        }
        conjugate_in_place(prob, scale);
    }

    IpmSettings ipm;
    ipm.tol = settings.tol;
    ipm.max_iters = settings.max_iters;
    ipm.verbose = settings.verbose;
    IpmResult ir = solve_lmi(prob, ipm);

    rep.iterations = ir.iterations;
    rep.gap = ir.gap;
    switch (ir.status) {
        case SolveStatus::optimal: rep.status = SolveReport::Status::optimal; break;
        case SolveStatus::infeasible: rep.status = SolveReport::Status::infeasible; break;
        case SolveStatus::limit: rep.status = SolveReport::Status::limit; break;
        case SolveStatus::numerical_failure:
            rep.status = SolveReport::Status::numerical_failure;
            break;
    }

    if (ir.y.size() == sdp.num_vars()) {
        // Certify against the unscaled problem; any cone-feasible point whose
        // LMI residual passes gives a sound bound, optimal or not. Programs
        // with degenerate box coordinates routinely end in "limit" with an
        // excellent certified point.
        const double resid = certify(sdp, ir.y);
        rep.max_residual_eig = resid;
        if (resid <= settings.cert_tol) {
            rep.status = SolveReport::Status::optimal;
            rep.h_value = ir.y[sdp.h_index()];
            if (ir.gap > std::sqrt(settings.tol))
                rep.note = "certified with residual gap " + std::to_string(ir.gap);
        } else if (rep.status == SolveReport::Status::optimal) {
            rep.status = SolveReport::Status::numerical_failure;
            rep.note = "certificate failed: max LMI eigenvalue " + std::to_string(resid);
        }
    }
    if (rep.status == SolveReport::Status::infeasible)
        rep.note = "LMI reported infeasible; the facet program is feasible for large h, "
                   "so this indicates numerical breakdown";

    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace mareach
