#include <doctest.h>

#include "helpers.hpp"
#include "mareach/solver.hpp"

using namespace mareach;

namespace {

SpMat sp1(double v) {
    SpMat m(1, 1);
    m.insert(0, 0) = v;
    m.makeCompressed();
    return m;
}

}  // namespace

TEST_CASE("scalar LMI reduction: min h s.t. 2x - 2h <= 0, x = 5") {
    LmiProblem prob;
    prob.c = Vec::Ones(1);
    prob.G.resize(0, 1);
    prob.g.resize(0);
    LmiProblem::PsdBlock blk;
    blk.F0 = Mat::Constant(1, 1, 10.0);  // 2*x with x = 5
    blk.coeff = {sp1(-2.0)};
    prob.blocks.push_back(blk);

    IpmResult r = solve_lmi(prob);
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.y[0] == doctest::Approx(5.0).epsilon(1e-7));
}

TEST_CASE("analytic 2x2: min t s.t. [[t,1],[1,t]] >= 0 gives t = 1") {
    // As an LMI: -[[t,1],[1,t]] <= 0.
    LmiProblem prob;
    prob.c = Vec::Ones(1);
    prob.G.resize(0, 1);
    prob.g.resize(0);
    LmiProblem::PsdBlock blk;
    blk.F0 = Mat{{0.0, -1.0}, {-1.0, 0.0}};
    SpMat ft(2, 2);
    ft.insert(0, 0) = -1.0;
    ft.insert(1, 1) = -1.0;
    blk.coeff = {ft};
    prob.blocks.push_back(blk);

    IpmResult r = solve_lmi(prob);
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.y[0] == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("box-constrained LP through the linear cone") {
    // min c^T y s.t. l <= y <= u has the sign-split analytic solution.
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int m = 1 + static_cast<int>(rng() % 6);
        Vec c = testutil::random_vec(m, rng);
        Vec l = testutil::random_vec(m, rng) - Vec::Constant(m, 1.5);
        Vec u = l + testutil::random_vec(m, rng).cwiseAbs() + Vec::Constant(m, 0.1);

        LmiProblem prob;
        prob.c = c;
        prob.G.resize(2 * m, m);
        prob.g.resize(2 * m);
        for (int i = 0; i < m; ++i) {
            prob.G.insert(i, i) = 1.0;
            prob.g[i] = u[i];
            prob.G.insert(m + i, i) = -1.0;
            prob.g[m + i] = -l[i];
        }
        IpmResult r = solve_lmi(prob);
        REQUIRE(r.status == SolveStatus::optimal);
        double expect = 0.0;
        for (int i = 0; i < m; ++i) expect += c[i] > 0 ? c[i] * l[i] : c[i] * u[i];
        CHECK(r.objective == doctest::Approx(expect).epsilon(1e-6));
    }
}

TEST_CASE("infeasible toy problem is flagged") {
    // y >= 1 and y <= 0 simultaneously.
    LmiProblem prob;
    prob.c = Vec::Ones(1);
    prob.G.resize(2, 1);
    prob.g.resize(2);
    prob.G.insert(0, 0) = 1.0;
    prob.g[0] = 0.0;
    prob.G.insert(1, 0) = -1.0;
    prob.g[1] = -1.0;

    IpmResult r = solve_lmi(prob);
    CHECK(r.status != SolveStatus::optimal);
    CHECK(r.status == SolveStatus::infeasible);
}

TEST_CASE("trace-constrained SDP with analytic optimum") {
    // min -y1 - y2 s.t. diag(y1, y2) <= I, i.e. y = (1, 1).
    LmiProblem prob;
    prob.c = Vec::Constant(2, -1.0);
    prob.G.resize(0, 2);
    prob.g.resize(0);
    LmiProblem::PsdBlock blk;
    blk.F0 = -Mat::Identity(2, 2);
    SpMat f1(2, 2), f2(2, 2);
    f1.insert(0, 0) = 1.0;
    f2.insert(1, 1) = 1.0;
    blk.coeff = {f1, f2};
    prob.blocks.push_back(blk);

    IpmResult r = solve_lmi(prob);
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.y[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.y[1] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("random diagonal SDPs match their LP reduction") {
    // Diagonal blocks make the SDP an LP: min c^T y s.t. f0 + A y <= 0
    // elementwise; cross-check the optimum against brute-force vertex search
    // in 2 variables.
    std::mt19937_64 rng(21);
    int solved = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const int rows = 4;
        Mat A = testutil::random_mat(rows, 2, rng);
        Vec f0 = testutil::random_vec(rows, rng) - Vec::Constant(rows, 2.0);
        Vec c = testutil::random_vec(2, rng);

        // Bound the feasible set so the LP stays bounded.
        LmiProblem prob;
        prob.c = c;
        prob.G.resize(4, 2);
        prob.g = Vec::Constant(4, 10.0);
        prob.G.insert(0, 0) = 1.0;
        prob.G.insert(1, 0) = -1.0;
        prob.G.insert(2, 1) = 1.0;
        prob.G.insert(3, 1) = -1.0;
        LmiProblem::PsdBlock blk;
        blk.F0 = f0.asDiagonal();
        SpMat c0(rows, rows), c1(rows, rows);
        for (int r = 0; r < rows; ++r) {
            if (A(r, 0) != 0) c0.insert(r, r) = A(r, 0);
            if (A(r, 1) != 0) c1.insert(r, r) = A(r, 1);
        }
        blk.coeff = {c0, c1};
        prob.blocks.push_back(blk);

        IpmResult r = solve_lmi(prob);
        if (r.status != SolveStatus::optimal) continue;  // unbounded/infeasible draws skipped
        ++solved;

        // Brute force on a fine grid refined around the reported optimum.
        double best = 1e100;
        const double span = 10.0;
        for (int gx = 0; gx <= 400; ++gx)
            for (int gy = 0; gy <= 400; ++gy) {
                Vec y(2);
                y << -span + gx * (2 * span / 400), -span + gy * (2 * span / 400);
                if (((f0 + A * y).array() <= 1e-9).all()) best = std::min(best, c.dot(y));
            }
        CHECK(r.objective <= best + 1e-3);
        // The IPM point must itself be feasible.
        CHECK(((f0 + A * r.y).array() <= 1e-6).all());
    }
    CHECK(solved > 10);
}

TEST_CASE("solver is deterministic") {
    LmiProblem prob;
    prob.c = Vec::Ones(1);
    prob.G.resize(0, 1);
    prob.g.resize(0);
    LmiProblem::PsdBlock blk;
    blk.F0 = Mat{{0.0, -1.0}, {-1.0, 0.0}};
    SpMat ft(2, 2);
    ft.insert(0, 0) = -1.0;
    ft.insert(1, 1) = -1.0;
    blk.coeff = {ft};
    prob.blocks.push_back(blk);

    IpmResult a = solve_lmi(prob);
    IpmResult b = solve_lmi(prob);
    CHECK(a.y[0] == b.y[0]);
    CHECK(a.iterations == b.iterations);
}
