#pragma once

#include "mareach/reformulate.hpp"

namespace mareach {

/// Segment layout of the shared QC basis [z^0; z^1; ...; z^{L+2}; 1].
struct BasisLayout {
    int n0 = 0;                // width of z^0 (stacked state)
    std::vector<int> hidden;   // widths of z^1..z^L
    int nu = 0;                // width of z^{L+1} and z^{L+2}

    static BasisLayout for_net(const MergedMlp& net);

    int n_hidden() const {
        int n = 0;
        for (int w : hidden) n += w;
        return n;
    }
    int mid_width() const { return n_hidden() + 2 * nu; }
    int dim() const { return n0 + mid_width() + 1; }

    /// Offset of segment z^level, level = 0..L+2.
    int offset(int level) const;
    int width(int level) const;
    int levels() const { return static_cast<int>(hidden.size()) + 3; }  // z^0..z^{L+2}
    int const_index() const { return dim() - 1; }
};

// --- input set QC (hyper-rectangle) ---

/// P(Gamma) for the box QC: [x;1]^T P [x;1] = 2 sum_t gamma_t (x_t-l_t)(u_t-x_t).
Mat build_input_qc(const Box& box, const Vec& gamma);

/// Selector E_in picking (z^0, 1) out of the shared basis.
Mat input_selector(const BasisLayout& layout);

/// Delta = E_in^T P E_in.
Mat lift_input_qc(const Mat& P, const BasisLayout& layout);

// --- ReLU QC (repeated nonnegativity/complementarity relaxation) ---

/// Q(lambda, nu, eta) over the stacked [nu_hat; nu; 1] basis:
///   [[0, T, -nu], [T, -2T, nu+eta], [-nu^T, (nu+eta)^T, 0]],  T = diag(lambda).
/// lambda is free; nu, eta must be elementwise nonnegative.
Mat build_relu_qc(const Vec& lambda, const Vec& nu, const Vec& eta);

/// Change-of-basis E_mid mapping [z; 1] to [nu_hat; nu; 1]: the top rows
/// compute every pre-activation (including both saturation layers), the middle
/// rows select the activations, the bottom row selects the constant.
Mat mid_selector(const MergedMlp& net, const BasisLayout& layout);

/// Theta = E_mid^T Q E_mid.
Mat lift_relu_qc(const MergedMlp& net, const Mat& Q, const BasisLayout& layout);

// --- output halfspace QC ---

/// S_p(h_p) with [x;1]^T S [x;1] = 2 (H_p^T x - h_p).
Mat build_output_qc(const Vec& H, double h);

/// E_out expressing x_{k+1} in the shared basis:
///   [A_tilde, 0, ..., 0, -B, B*u_upper + w; 0, ..., 0, 1].
Mat output_selector(const Mat& A_tilde, const Mat& B, const Vec& u_upper, const Vec& w,
                    const BasisLayout& layout);

/// Psi = E_out^T S E_out.
Mat lift_output_qc(const ReformedAgent& ra, const Mat& S, const Vec& w,
                   const BasisLayout& layout);
Mat lift_output_qc(const Mat& A_tilde, const Mat& B, const Vec& u_upper, const Vec& w,
                   const Mat& S, const BasisLayout& layout);

}  // namespace mareach
