#pragma once

#include <functional>
#include <optional>

#include "mareach/qc.hpp"
#include "mareach/solver.hpp"

namespace mareach {

struct SdpSettings {
    double tol = 1e-8;        // solver feasibility/optimality tolerance
    double cert_tol = 1e-6;   // a-posteriori max-eigenvalue certificate
    int max_iters = 200;
    bool prescale = false;    // per-coordinate basis prescaling
    double degenerate_width = 1e-9;  // inflation floor for zero-width box coordinates
    bool verbose = false;
};

/// One per-facet semidefinite program:
///   min h_p  s.t.  Delta(Gamma) + Theta(lambda,nu,eta) + Psi_v(h_p) <= 0
/// for every uncertainty vertex v, with Gamma, nu, eta >= 0 and lambda free.
struct FacetSdp {
    BasisLayout layout;
    Vec H;    // facet normal (length n_x)
    Box in_box;
    MergedMlp net;
    // Indices of the original stacked-state coordinates that remain in the
    // basis. Zero-width coordinates (static-agent states) are substituted into
    // the constant column before assembly: the interior-point pair would lose
    // strict feasibility otherwise, and conditioning on the known value is
    // exact. Identity when no coordinate is degenerate.
    std::vector<int> kept_coords;

    // Dense QC builders in the shared basis; affine in their multipliers.
    std::function<Mat(const Vec& gamma)> delta_builder;
    std::function<Mat(const Vec& lambda, const Vec& nu, const Vec& eta)> theta_builder;
    std::vector<std::function<Mat(double h)>> psi_builders;  // one per (c,d) vertex

    // Decision-variable layout: [gamma | lambda | nu | eta | h].
    int n_gamma = 0;
    int n_mid = 0;
    int num_vars() const { return n_gamma + 3 * n_mid + 1; }
    int gamma_off() const { return 0; }
    int lambda_off() const { return n_gamma; }
    int nu_off() const { return n_gamma + n_mid; }
    int eta_off() const { return n_gamma + 2 * n_mid; }
    int h_index() const { return n_gamma + 3 * n_mid; }

    LmiProblem to_lmi() const;

    /// LMI value at explicit multipliers, for certificates and tests.
    Mat lmi_value(int vertex, const Vec& gamma, const Vec& lambda, const Vec& nu,
                  const Vec& eta, double h) const;
};

struct SolveReport {
    enum class Status { optimal, infeasible, numerical_failure, limit };
    Status status = Status::numerical_failure;
    std::optional<double> h_value;
    int iterations = 0;
    double wall_seconds = 0.0;
    double max_residual_eig = 0.0;  // LMI certificate at the returned point
    double gap = 0.0;               // solver residual at exit (tightness indicator)
    std::string note;
};

std::string to_string(SolveReport::Status s);

/// Assembles the Theorem-1 facet program (Theorem-2 form when `vertices` lists
/// more than the nominal pair). Vertices are (A_self, B) pairs; neighbor
/// blocks stay nominal.
FacetSdp assemble_facet_sdp(const ReformedAgent& ra, const Box& in_box, const Vec& H_p,
                            const Vec& w_k,
                            const std::vector<std::pair<Mat, Mat>>& vertices = {},
                            const SdpSettings& settings = {});

/// Solves one facet program and certifies the result: on optimal status the
/// returned h is feasible for every vertex LMI with max eigenvalue below
/// settings.cert_tol (multipliers clamped to the cone before the check).
SolveReport solve_facet(const FacetSdp& sdp, const SdpSettings& settings = {});

/// Vertex list (A_self, B) pairs for an agent under optional uncertainty.
std::vector<std::pair<Mat, Mat>> uncertainty_vertices(const AgentModel& agent,
                                                      const std::optional<UncertaintySpec>& u);

}  // namespace mareach
