#pragma once

#include <vector>

#include <Eigen/SparseCore>

#include "mareach/types.hpp"

namespace mareach {

using SpMat = Eigen::SparseMatrix<double>;

/// Linear SDP in LMI form:
///   minimize    c^T y
///   subject to  G y <= g                      (componentwise)
///               F0_b + sum_k y_k F_b[k] <= 0  (negative semidefinite, per block)
struct LmiProblem {
    Vec c;
    SpMat G;  // n_lin x m, may have zero rows
    Vec g;

    struct PsdBlock {
        Mat F0;                   // dense symmetric
        std::vector<SpMat> coeff;  // size m; empty matrix means zero coefficient
    };
    std::vector<PsdBlock> blocks;

    int num_vars() const { return static_cast<int>(c.size()); }

    /// Convenience: mark variable k as nonnegative by appending -y_k <= 0.
    void add_nonneg(const std::vector<int>& vars);

    /// LMI value F0 + sum y_k F_k of block b at a point.
    Mat block_value(int b, const Vec& y) const;
};

enum class SolveStatus { optimal, infeasible, numerical_failure, limit };

struct IpmSettings {
    double tol = 1e-8;        // relative primal/dual/gap tolerance
    int max_iters = 200;
    double step_frac = 0.98;  // fraction of the distance to the cone boundary
    bool verbose = false;
};

struct IpmResult {
    SolveStatus status = SolveStatus::numerical_failure;
    Vec y;
    double objective = 0.0;
    int iterations = 0;
    double primal_infeas = 0.0;  // scaled residual norms at exit
    double dual_infeas = 0.0;
    double gap = 0.0;
};

/// Primal-dual interior-point method (Mehrotra predictor-corrector, HKM
/// direction) for block-diagonal linear SDPs. Deterministic for fixed inputs.
IpmResult solve_lmi(const LmiProblem& prob, const IpmSettings& settings = {});

std::string to_string(SolveStatus s);

}  // namespace mareach
