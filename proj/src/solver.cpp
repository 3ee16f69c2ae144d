// Primal-dual interior-point method for block-diagonal linear SDPs in LMI
// form, with Mehrotra predictor-corrector and the HKM search direction.
//
// The LMI problem  min c^T y  s.t.  G y <= g,  F0_b + sum_k y_k F_bk <= 0
// is handled as the dual side of the standard pair
//   (P) min <C, X>   s.t. A(X) = b, X in K
//   (D) max b^T y    s.t. A*(y) + S = C, S in K
// with b = -c, C = (-F0_b, g) and A*_k = (F_bk, G column k) over the cone
// K = (PSD blocks) x (nonnegative orthant).
//
// Coefficient matrices of facet programs are low rank; every F_bk is
// eigen-factored on its support once at setup so the Schur complement
// M_jk = sum_b tr(F_bj X F_bk S^-1) costs O(r^2) per pair instead of O(n^3).

#include "mareach/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace mareach {

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::numerical_failure: return "numerical-failure";
        case SolveStatus::limit: return "limit";
    }
    return "?";
}

void LmiProblem::add_nonneg(const std::vector<int>& vars) {
    const int m = num_vars();
    const int old_rows = static_cast<int>(G.rows());
    SpMat ng(old_rows + static_cast<int>(vars.size()), m);
    std::vector<Eigen::Triplet<double>> trips;
    for (int k = 0; k < G.outerSize(); ++k)
        for (SpMat::InnerIterator it(G, k); it; ++it)
            trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    for (size_t i = 0; i < vars.size(); ++i)
        trips.emplace_back(old_rows + static_cast<int>(i), vars[i], -1.0);
    ng.setFromTriplets(trips.begin(), trips.end());
    G = std::move(ng);
    Vec nv = Vec::Zero(old_rows + static_cast<int>(vars.size()));
    nv.head(old_rows) = g;
    g = std::move(nv);
}

Mat LmiProblem::block_value(int b, const Vec& y) const {
    const PsdBlock& blk = blocks.at(static_cast<size_t>(b));
    Mat val = blk.F0;
    for (int k = 0; k < num_vars(); ++k) {
        const SpMat& f = blk.coeff[static_cast<size_t>(k)];
        if (f.nonZeros() == 0) continue;
        val += y[k] * Mat(f);
    }
    return val;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Symmetric low-rank factor on a small support: F = sum_r lam[r] v_r v_r^T,
// v_r supported on idx.
struct Factor {
    std::vector<int> idx;
    Mat V;    // |idx| x r
    Vec lam;  // r
    double fro = 0.0;

    bool empty() const { return lam.size() == 0; }
};

Factor factorize(const SpMat& f) {
    Factor out;
    if (f.nonZeros() == 0) return out;
    std::vector<int> support;
    for (int k = 0; k < f.outerSize(); ++k)
        for (SpMat::InnerIterator it(f, k); it; ++it) {
            if (it.value() != 0.0) {
                support.push_back(static_cast<int>(it.row()));
                support.push_back(static_cast<int>(it.col()));
            }
        }
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    const int ns = static_cast<int>(support.size());
    if (ns == 0) return out;

    std::vector<int> pos(static_cast<size_t>(f.rows()), -1);
    for (int i = 0; i < ns; ++i) pos[static_cast<size_t>(support[static_cast<size_t>(i)])] = i;
    Mat sub = Mat::Zero(ns, ns);
    for (int k = 0; k < f.outerSize(); ++k)
        for (SpMat::InnerIterator it(f, k); it; ++it)
            sub(pos[static_cast<size_t>(it.row())], pos[static_cast<size_t>(it.col())]) = it.value();
    sub = 0.5 * (sub + sub.transpose().eval());

    Eigen::SelfAdjointEigenSolver<Mat> es(sub);
    const Vec& ev = es.eigenvalues();
    const double cutoff = 1e-13 * std::max(1.0, ev.cwiseAbs().maxCoeff());
    std::vector<int> keep;
    for (int i = 0; i < ns; ++i)
        if (std::abs(ev[i]) > cutoff) keep.push_back(i);
    if (keep.empty()) return out;

    out.idx = support;
    out.V.resize(ns, static_cast<int>(keep.size()));
    out.lam.resize(static_cast<int>(keep.size()));
    for (size_t i = 0; i < keep.size(); ++i) {
        out.V.col(static_cast<int>(i)) = es.eigenvectors().col(keep[i]);
        out.lam[static_cast<int>(i)] = ev[keep[i]];
    }
    out.fro = out.lam.norm();
    return out;
}

// tr(F W) for a (not necessarily symmetric) dense W.
double inner(const Factor& f, const Mat& W) {
    double acc = 0.0;
    const int ns = static_cast<int>(f.idx.size());
    for (int r = 0; r < f.lam.size(); ++r) {
        double q = 0.0;
        for (int a = 0; a < ns; ++a) {
            double wa = 0.0;
            for (int c = 0; c < ns; ++c) wa += W(f.idx[static_cast<size_t>(a)], f.idx[static_cast<size_t>(c)]) * f.V(c, r);
            q += f.V(a, r) * wa;
        }
        acc += f.lam[r] * q;
    }
    return acc;
}

// W += scale * F (scattered rank updates).
void accumulate(Mat& W, const Factor& f, double scale) {
    const int ns = static_cast<int>(f.idx.size());
    for (int r = 0; r < f.lam.size(); ++r) {
        const double s = scale * f.lam[r];
        for (int a = 0; a < ns; ++a) {
            const double va = s * f.V(a, r);
            if (va == 0.0) continue;
            for (int c = 0; c < ns; ++c)
                W(f.idx[static_cast<size_t>(a)], f.idx[static_cast<size_t>(c)]) += va * f.V(c, r);
        }
    }
}

struct BlockWork {
    int n = 0;
    Mat C;                       // -F0
    std::vector<int> vars;       // variables with a coefficient here
    std::vector<Factor> fac;     // aligned with vars
    Mat X, S;                    // iterates
    Mat Si;                      // S^-1
    Mat Rd;                      // dual residual
    Mat Upack, Tpack;            // Si*V and X*V, all variables packed
    std::vector<int> rank_off;
    Mat dX, dS, dXa, dSa;
};

double psd_step_bound(const Mat& X, const Mat& dX) {
    Eigen::LLT<Mat> llt(X);
    Mat Xj = X;
    double jitter = 1e-14 * std::max(1.0, X.diagonal().maxCoeff());
    int tries = 0;
    while (llt.info() != Eigen::Success && tries < 5) {
        Xj.diagonal().array() += jitter;
        jitter *= 100;
        llt.compute(Xj);
        ++tries;
    }
    if (llt.info() != Eigen::Success) return 0.0;
    Mat L = llt.matrixL();
    Mat Y = L.triangularView<Eigen::Lower>().solve(dX);
    Y = L.triangularView<Eigen::Lower>().solve(Y.transpose()).transpose();
    Y = 0.5 * (Y + Y.transpose().eval());
    Eigen::SelfAdjointEigenSolver<Mat> es(Y, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    if (lmin >= -1e-13) return kInf;
    return -1.0 / lmin;
}

double lin_step_bound(const Vec& x, const Vec& dx) {
    double bound = kInf;
    for (int i = 0; i < x.size(); ++i)
        if (dx[i] < 0.0) bound = std::min(bound, -x[i] / dx[i]);
    return bound;
}

}  // namespace

IpmResult solve_lmi(const LmiProblem& prob, const IpmSettings& settings) {
    const int m = prob.num_vars();
    const int nlin = static_cast<int>(prob.g.size());
    IpmResult res;
    res.y = Vec::Zero(m);

    Vec b = -prob.c;  // dual objective max b^T y

    std::vector<BlockWork> blocks;
    double normC = prob.g.size() ? prob.g.cwiseAbs().maxCoeff() : 0.0;
    Vec normA = Vec::Zero(m);
    int ntot = nlin;
    for (const auto& pb : prob.blocks) {
        BlockWork w;
        w.n = static_cast<int>(pb.F0.rows());
        if (w.n == 0) continue;
        w.C = -0.5 * (pb.F0 + pb.F0.transpose());
        normC = std::max(normC, w.C.cwiseAbs().maxCoeff());
        if (static_cast<int>(pb.coeff.size()) != m)
            throw DimensionMismatch("solve_lmi: coefficient list size != num_vars");
        for (int k = 0; k < m; ++k) {
            Factor f = factorize(pb.coeff[static_cast<size_t>(k)]);
            if (f.empty()) continue;
            normA[k] = std::max(normA[k], f.fro);
            w.vars.push_back(k);
            w.fac.push_back(std::move(f));
        }
        ntot += w.n;
        blocks.push_back(std::move(w));
    }
    SpMat G = prob.G;
    if (nlin > 0) {
        for (int k = 0; k < G.outerSize(); ++k)
            for (SpMat::InnerIterator it(G, k); it; ++it)
                normA[it.col()] = std::max(normA[it.col()], std::abs(it.value()));
    }
    if (ntot == 0) {  // unconstrained
        res.status = SolveStatus::optimal;
        res.objective = 0.0;
        return res;
    }

    // Per-variable equilibration: y_k = vscale_k * yhat_k so every scaled
    // coefficient has unit norm. Undone before returning.
    Vec vscale = Vec::Ones(m);
    for (int k = 0; k < m; ++k)
        if (normA[k] > 0) vscale[k] = std::min(1e12, std::max(1e-12, 1.0 / normA[k]));
    for (auto& w : blocks)
        for (size_t i = 0; i < w.vars.size(); ++i) {
            w.fac[i].lam *= vscale[w.vars[i]];
            w.fac[i].fro = w.fac[i].lam.norm();
        }
    if (nlin > 0) {
        for (int k = 0; k < G.outerSize(); ++k)
            for (SpMat::InnerIterator it(G, k); it; ++it) it.valueRef() *= vscale[it.col()];
    }
    normA = Vec::Zero(m);
    for (const auto& w : blocks)
        for (size_t i = 0; i < w.vars.size(); ++i)
            normA[w.vars[i]] = std::max(normA[w.vars[i]], w.fac[i].fro);
    if (nlin > 0)
        for (int k = 0; k < G.outerSize(); ++k)
            for (SpMat::InnerIterator it(G, k); it; ++it)
                normA[it.col()] = std::max(normA[it.col()], std::abs(it.value()));
    SpMat Gt = G.transpose();
    b = b.cwiseProduct(vscale);
    auto unscale = [&vscale](const Vec& v) { return Vec(v.cwiseProduct(vscale)); };

    // Starting point: X = p I, S = d I, y = 0 (SDPA-style scale heuristics).
    double p0 = 10.0, d0 = 10.0;
    for (int k = 0; k < m; ++k)
        p0 = std::max(p0, std::sqrt(static_cast<double>(ntot)) * (1.0 + std::abs(b[k])) /
                              (1.0 + normA[k]));
    d0 = std::max({d0, std::sqrt(static_cast<double>(ntot)), normC, normA.maxCoeff()});

    for (auto& w : blocks) {
        w.X = Mat::Identity(w.n, w.n) * p0;
        w.S = Mat::Identity(w.n, w.n) * d0;
    }
    Vec xl = Vec::Constant(nlin, p0), sl = Vec::Constant(nlin, d0);
    Vec& y = res.y;

    const double bscale = 1.0 + (m ? b.cwiseAbs().maxCoeff() : 0.0);
    const double cscale = 1.0 + normC;

    Vec rp(m), rdl(nlin);
    double best_err = kInf;
    double best_mu = kInf;
    Vec best_y = y;
    double best_obj = kInf;
    bool best_is_feasible = false;
    int stall = 0;  // iterations without meaningful progress

    auto apply_A = [&](Vec& out) {
        out.setZero();
        for (auto& w : blocks)
            for (size_t i = 0; i < w.vars.size(); ++i)
                out[w.vars[i]] += inner(w.fac[i], w.X);
        if (nlin) out += Gt * xl;
    };

    for (int iter = 0; iter < settings.max_iters; ++iter) {
        res.iterations = iter;

        // Residuals and duality measures.
        apply_A(rp);
        rp = b - rp;
        double dinf = 0.0;
        double mu = 0.0;
        for (auto& w : blocks) {
            w.Rd = w.C - w.S;
            for (size_t i = 0; i < w.vars.size(); ++i)
                accumulate(w.Rd, w.fac[i], -y[w.vars[i]]);
            dinf = std::max(dinf, w.Rd.cwiseAbs().maxCoeff());
            mu += w.X.cwiseProduct(w.S).sum();
        }
        if (nlin) {
            rdl = prob.g - G * y - sl;
            if (rdl.size()) dinf = std::max(dinf, rdl.cwiseAbs().maxCoeff());
            mu += xl.dot(sl);
        }
        mu /= ntot;

        double pobj = nlin ? prob.g.dot(xl) : 0.0;
        for (auto& w : blocks) pobj += w.C.cwiseProduct(w.X).sum();
        const double dobj = b.dot(y);
        const double pinf = (m ? rp.cwiseAbs().maxCoeff() : 0.0) / bscale;
        const double dinf_rel = dinf / cscale;
        const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

        if (settings.verbose)
            std::fprintf(stderr, "it %3d  mu %9.2e  pinf %9.2e  dinf %9.2e  gap %9.2e  obj %+.9e\n",
                         iter, mu, pinf, dinf_rel, gap, -dobj);

        const double err = std::max({pinf, dinf_rel, gap});
        if (err < 0.99 * best_err || mu < 0.99 * best_mu) {
            stall = 0;
        } else {
            ++stall;
        }
        best_mu = std::min(best_mu, mu);
        if (err < best_err) best_err = err;
        // A dual-feasible iterate is a valid bound certificate: among those,
        // keep the best objective. -dobj equals c^T y for the LMI problem.
        const bool feas = dinf_rel <= std::max(10.0 * settings.tol, 1e-9);
        if ((feas && (!best_is_feasible || -dobj < best_obj)) ||
            (!best_is_feasible && best_obj == kInf)) {
            best_is_feasible = feas;
            best_y = y;
            best_obj = -dobj;
        }
        if (stall >= 40) {
            // No consistent progress; typical for programs without a strictly
            // feasible primal (degenerate input boxes). The caller certifies
            // the best point found.
            res.status = SolveStatus::limit;
            res.y = best_y;
            res.objective = best_obj;
            res.gap = best_err;
            res.y = unscale(res.y);
            return res;
        }
        if (pinf <= settings.tol && dinf_rel <= settings.tol && gap <= settings.tol) {
            res.status = SolveStatus::optimal;
            res.objective = -dobj;
            res.primal_infeas = pinf;
            res.dual_infeas = dinf_rel;
            res.gap = gap;
            res.y = unscale(res.y);
            return res;
        }

        // Divergence checks (Farkas-style certificates, heuristic scaling).
        double xnorm = nlin ? xl.maxCoeff() : 0.0;
        for (auto& w : blocks) xnorm = std::max(xnorm, w.X.diagonal().maxCoeff());
        if (xnorm > 1e13 * p0) {
            const bool ray = pobj / xnorm < -1e-9 * cscale && (rp.cwiseAbs().maxCoeff() / xnorm) < 1e-9;
            res.status = ray ? SolveStatus::infeasible : SolveStatus::numerical_failure;
            res.y = best_y;
            res.objective = best_obj;
            res.primal_infeas = pinf;
            res.dual_infeas = dinf_rel;
            res.gap = gap;
            res.y = unscale(res.y);
            return res;
        }
        if (y.size() && y.cwiseAbs().maxCoeff() > 1e13 * bscale) {
            res.status = SolveStatus::numerical_failure;
            res.y = best_y;
            res.objective = best_obj;
            res.gap = best_err;
            res.y = unscale(res.y);
            return res;
        }

        // Factorize S, form Schur complement.
        Mat M = Mat::Zero(m, m);
        bool fact_ok = true;
        for (auto& w : blocks) {
            Eigen::LLT<Mat> llt(w.S);
            if (llt.info() != Eigen::Success) {
                fact_ok = false;
                break;
            }
            w.Si = llt.solve(Mat::Identity(w.n, w.n));
            // U = Si * V and T = X * V per variable, packed column-wise.
            int rank_total = 0;
            w.rank_off.assign(w.vars.size() + 1, 0);
            for (size_t i = 0; i < w.vars.size(); ++i) {
                w.rank_off[i] = rank_total;
                rank_total += static_cast<int>(w.fac[i].lam.size());
            }
            w.rank_off[w.vars.size()] = rank_total;
            w.Upack.resize(w.n, rank_total);
            w.Tpack.resize(w.n, rank_total);
            w.Upack.setZero();
            w.Tpack.setZero();
            for (size_t i = 0; i < w.vars.size(); ++i) {
                const Factor& f = w.fac[i];
                const int ns = static_cast<int>(f.idx.size());
                const int off = w.rank_off[i];
                for (int a = 0; a < ns; ++a) {
                    const int row = f.idx[static_cast<size_t>(a)];
                    for (int r = 0; r < f.lam.size(); ++r) {
                        const double v = f.V(a, r);
                        if (v == 0.0) continue;
                        w.Upack.col(off + r) += v * w.Si.col(row);
                        w.Tpack.col(off + r) += v * w.X.col(row);
                    }
                }
            }
            for (size_t i = 0; i < w.vars.size(); ++i) {
                const Factor& fi = w.fac[i];
                const int nsi = static_cast<int>(fi.idx.size());
                const int ri = static_cast<int>(fi.lam.size());
                for (size_t j = i; j < w.vars.size(); ++j) {
                    const int rj = static_cast<int>(w.fac[j].lam.size());
                    const int offj = w.rank_off[j];
                    // M_ij = sum_{a,c} lam_i[a] lam_j[c] (Vi^T Si Vj)[a,c] (Vi^T X Vj)[a,c]
                    double acc = 0.0;
                    for (int a = 0; a < ri; ++a) {
                        for (int c = 0; c < rj; ++c) {
                            double sa = 0.0, sb = 0.0;
                            for (int t = 0; t < nsi; ++t) {
                                const double v = fi.V(t, a);
                                if (v == 0.0) continue;
                                const int row = fi.idx[static_cast<size_t>(t)];
                                sa += v * w.Upack(row, offj + c);
                                sb += v * w.Tpack(row, offj + c);
                            }
                            acc += fi.lam[a] * w.fac[j].lam[c] * sa * sb;
                        }
                    }
                    M(w.vars[i], w.vars[j]) += acc;
                    if (i != j) M(w.vars[j], w.vars[i]) += acc;
                }
            }
        }
        if (!fact_ok) {
            res.status = SolveStatus::numerical_failure;
            res.y = best_y;
            res.objective = best_obj;
            res.gap = best_err;
            res.y = unscale(res.y);
            return res;
        }
        if (nlin) {
            Vec D = xl.cwiseQuotient(sl);
            M += Mat(Gt * D.asDiagonal() * G);
        }

        Eigen::LDLT<Mat> ldlt(M);
        double ridge = 1e-13 * std::max(1.0, M.diagonal().cwiseAbs().maxCoeff());
        Mat Mr = M;
        int tries = 0;
        while ((ldlt.info() != Eigen::Success || !ldlt.isPositive()) && tries < 6) {
            Mr.diagonal().array() += ridge;
            ridge *= 100;
            ldlt.compute(Mr);
            ++tries;
        }
        // The Schur system is ill-conditioned near degenerate optima; a couple
        // of refinement sweeps keep the directions accurate.
        auto solve_schur = [&](const Vec& rhs) {
            Vec dy = ldlt.solve(rhs);
            for (int sweep = 0; sweep < 2; ++sweep) dy += ldlt.solve(rhs - M * dy);
            return dy;
        };

        // rhs given the complementarity target R_c per cone piece.
        auto build_rhs = [&](const std::vector<Mat>& Rc, const Vec& rcl) {
            Vec rhs = rp;
            for (size_t bi = 0; bi < blocks.size(); ++bi) {
                auto& w = blocks[bi];
                Mat W = (Rc[bi] - w.X * w.Rd) * w.Si;
                for (size_t i = 0; i < w.vars.size(); ++i)
                    rhs[w.vars[i]] -= inner(w.fac[i], W);
            }
            if (nlin)
                rhs -= Gt * ((rcl - xl.cwiseProduct(rdl)).cwiseQuotient(sl));
            return rhs;
        };
        auto directions = [&](const Vec& dy, const std::vector<Mat>& Rc, const Vec& rcl,
                              Vec& dxl, Vec& dsl) {
            for (size_t bi = 0; bi < blocks.size(); ++bi) {
                auto& w = blocks[bi];
                w.dS = w.Rd;
                for (size_t i = 0; i < w.vars.size(); ++i)
                    accumulate(w.dS, w.fac[i], -dy[w.vars[i]]);
                w.dX = (Rc[bi] - w.X * w.dS) * w.Si;
                w.dX = 0.5 * (w.dX + w.dX.transpose().eval());
            }
            if (nlin) {
                dsl = rdl - G * dy;
                dxl = (rcl - xl.cwiseProduct(dsl)).cwiseQuotient(sl);
            }
        };

        // Predictor (affine scaling).
        std::vector<Mat> Rc(blocks.size());
        for (size_t bi = 0; bi < blocks.size(); ++bi) Rc[bi] = -blocks[bi].X * blocks[bi].S;
        Vec rcl = nlin ? Vec(-xl.cwiseProduct(sl)) : Vec();
        Vec dy_a = solve_schur(build_rhs(Rc, rcl));
        Vec dxl_a(nlin), dsl_a(nlin);
        directions(dy_a, Rc, rcl, dxl_a, dsl_a);

        double ap = nlin ? lin_step_bound(xl, dxl_a) : kInf;
        double ad = nlin ? lin_step_bound(sl, dsl_a) : kInf;
        for (auto& w : blocks) {
            ap = std::min(ap, psd_step_bound(w.X, w.dX));
            ad = std::min(ad, psd_step_bound(w.S, w.dS));
        }
        ap = std::min(1.0, 0.99 * ap);
        ad = std::min(1.0, 0.99 * ad);

        double mu_aff = 0.0;
        for (auto& w : blocks)
            mu_aff += (w.X + ap * w.dX).cwiseProduct(w.S + ad * w.dS).sum();
        if (nlin) mu_aff += (xl + ap * dxl_a).dot(sl + ad * dsl_a);
        mu_aff = std::max(mu_aff / ntot, 0.0);
        double sigma = std::min(1.0, std::pow(mu_aff / mu, 3));

        // Save the affine directions for the corrector cross term.
        for (auto& w : blocks) {
            w.dXa = w.dX;
            w.dSa = w.dS;
        }

        // Corrector.
        for (size_t bi = 0; bi < blocks.size(); ++bi) {
            auto& w = blocks[bi];
            Rc[bi] = sigma * mu * Mat::Identity(w.n, w.n) - w.X * w.S - w.dXa * w.dSa;
        }
        if (nlin)
            rcl = Vec::Constant(nlin, sigma * mu) - xl.cwiseProduct(sl) -
                  dxl_a.cwiseProduct(dsl_a);
        Vec dy = solve_schur(build_rhs(Rc, rcl));
        Vec dxl(nlin), dsl(nlin);
        directions(dy, Rc, rcl, dxl, dsl);

        ap = nlin ? lin_step_bound(xl, dxl) : kInf;
        ad = nlin ? lin_step_bound(sl, dsl) : kInf;
        for (auto& w : blocks) {
            ap = std::min(ap, psd_step_bound(w.X, w.dX));
            ad = std::min(ad, psd_step_bound(w.S, w.dS));
        }
        const double tau = iter == 0 ? 0.9 : settings.step_frac;
        ap = std::min(1.0, tau * ap);
        ad = std::min(1.0, tau * ad);
        if (!std::isfinite(ap) || !std::isfinite(ad) || ap <= 0 || ad <= 0) {
            res.status = SolveStatus::numerical_failure;
            res.y = best_y;
            res.objective = best_obj;
            res.gap = best_err;
            res.y = unscale(res.y);
            return res;
        }

        for (auto& w : blocks) {
            w.X += ap * w.dX;
            w.S += ad * w.dS;
        }
        if (nlin) {
            xl += ap * dxl;
            sl += ad * dsl;
        }
        y += ad * dy;
    }

    res.status = SolveStatus::limit;
    res.y = best_y;
    res.objective = best_obj;
    res.gap = best_err;
        res.y = unscale(res.y);
    return res;
}

}  // namespace mareach
