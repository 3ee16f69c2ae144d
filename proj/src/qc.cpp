#include "mareach/qc.hpp"

namespace mareach {

BasisLayout BasisLayout::for_net(const MergedMlp& net) {
    BasisLayout layout;
    layout.n0 = net.input_width();
    layout.hidden = net.hidden_widths();
    layout.nu = net.nu();
    return layout;
}

int BasisLayout::offset(int level) const {
    if (level < 0 || level >= levels())
        throw InvalidDimension("BasisLayout: level out of range");
    int off = 0;
    if (level == 0) return off;
    off += n0;
    for (int l = 1; l <= static_cast<int>(hidden.size()); ++l) {
        if (level == l) return off;
        off += hidden[static_cast<size_t>(l - 1)];
    }
    const int L = static_cast<int>(hidden.size());
    if (level == L + 1) return off;
    return off + nu;  // level == L+2
}

int BasisLayout::width(int level) const {
    if (level == 0) return n0;
    if (level >= 1 && level <= static_cast<int>(hidden.size()))
        return hidden[static_cast<size_t>(level - 1)];
    return nu;
}

Mat build_input_qc(const Box& box, const Vec& gamma) {
    const int n = box.dim();
    if (gamma.size() != n)
        throw DimensionMismatch("build_input_qc: gamma length != box dimension");
    if ((gamma.array() < 0).any()) throw NegativeMultiplier("build_input_qc: gamma < 0");
    Mat P = Mat::Zero(n + 1, n + 1);
    P.topLeftCorner(n, n).diagonal() = -2.0 * gamma;
    Vec cross = gamma.cwiseProduct(box.lower + box.upper);
    P.topRightCorner(n, 1) = cross;
    P.bottomLeftCorner(1, n) = cross.transpose();
    P(n, n) = -2.0 * box.lower.dot(gamma.cwiseProduct(box.upper));
    return P;
}

Mat input_selector(const BasisLayout& layout) {
    Mat E = Mat::Zero(layout.n0 + 1, layout.dim());
    E.topLeftCorner(layout.n0, layout.n0).setIdentity();
    E(layout.n0, layout.const_index()) = 1.0;
    return E;
}

Mat lift_input_qc(const Mat& P, const BasisLayout& layout) {
    if (P.rows() != layout.n0 + 1 || P.cols() != layout.n0 + 1)
        throw DimensionMismatch("lift_input_qc: P size != n0+1");
    Mat E = input_selector(layout);
    return symmetrize(E.transpose() * P * E);
}

Mat build_relu_qc(const Vec& lambda, const Vec& nu, const Vec& eta) {
    const int n = static_cast<int>(lambda.size());
    if (nu.size() != n || eta.size() != n)
        throw DimensionMismatch("build_relu_qc: multiplier lengths differ");
    if ((nu.array() < 0).any() || (eta.array() < 0).any())
        throw NegativeMultiplier("build_relu_qc: nu/eta < 0");
    Mat Q = Mat::Zero(2 * n + 1, 2 * n + 1);
    Q.block(0, n, n, n).diagonal() = lambda;
    Q.block(n, 0, n, n).diagonal() = lambda;
    Q.block(n, n, n, n).diagonal() = -2.0 * lambda;
    Q.block(0, 2 * n, n, 1) = -nu;
    Q.block(2 * n, 0, 1, n) = -nu.transpose();
    Q.block(n, 2 * n, n, 1) = nu + eta;
    Q.block(2 * n, n, 1, n) = (nu + eta).transpose();
    return Q;
}

Mat mid_selector(const MergedMlp& net, const BasisLayout& layout) {
    const int n_mid = layout.mid_width();
    const int d = layout.dim();
    const int L = static_cast<int>(layout.hidden.size());
    Mat E = Mat::Zero(2 * n_mid + 1, d);

    // Pre-activation rows: W^l at the z^l column block plus the bias entry;
    // the last two row blocks encode the saturation layers.
    int r = 0;
    for (int l = 0; l < L; ++l) {
        const Mat& W = net.base.layers[static_cast<size_t>(l)].W;
        const Vec& b = net.base.layers[static_cast<size_t>(l)].b;
        E.block(r, layout.offset(l), W.rows(), W.cols()) = W;
        E.block(r, layout.const_index(), W.rows(), 1) = b;
        r += static_cast<int>(W.rows());
    }
    {
        const Mat W = net.sat1_W();
        const Vec b = net.sat1_b();
        E.block(r, layout.offset(L), W.rows(), W.cols()) = W;
        E.block(r, layout.const_index(), W.rows(), 1) = b;
        r += static_cast<int>(W.rows());
    }
    {
        const Mat W = net.sat2_W();
        const Vec b = net.sat2_b();
        E.block(r, layout.offset(L + 1), W.rows(), W.cols()) = W;
        E.block(r, layout.const_index(), W.rows(), 1) = b;
        r += static_cast<int>(W.rows());
    }

    // Activation rows select z^1..z^{L+2}.
    E.block(n_mid, layout.n0, n_mid, n_mid).setIdentity();
    E(2 * n_mid, layout.const_index()) = 1.0;
    return E;
}

Mat lift_relu_qc(const MergedMlp& net, const Mat& Q, const BasisLayout& layout) {
    const int n_mid = layout.mid_width();
    if (Q.rows() != 2 * n_mid + 1 || Q.cols() != 2 * n_mid + 1)
        throw DimensionMismatch("lift_relu_qc: Q size != 2*mid_width+1");
    if (net.n_mid() != n_mid)
        throw DimensionMismatch("lift_relu_qc: layout does not match network");
    Mat E = mid_selector(net, layout);
    return symmetrize(E.transpose() * Q * E);
}

Mat build_output_qc(const Vec& H, double h) {
    const int n = static_cast<int>(H.size());
    Mat S = Mat::Zero(n + 1, n + 1);
    S.topRightCorner(n, 1) = H;
    S.bottomLeftCorner(1, n) = H.transpose();
    S(n, n) = -2.0 * h;
    return S;
}

Mat output_selector(const Mat& A_tilde, const Mat& B, const Vec& u_upper, const Vec& w,
                    const BasisLayout& layout) {
    const int n_x = static_cast<int>(A_tilde.rows());
    if (A_tilde.cols() != layout.n0)
        throw DimensionMismatch("output_selector: A_tilde columns != n0");
    if (w.size() != n_x) throw DimensionMismatch("output_selector: w length != n_x");
    const int L = static_cast<int>(layout.hidden.size());
    Mat E = Mat::Zero(n_x + 1, layout.dim());
    E.block(0, 0, n_x, layout.n0) = A_tilde;
    E.block(0, layout.offset(L + 2), n_x, layout.nu) = -B;
    E.block(0, layout.const_index(), n_x, 1) = B * u_upper + w;
    E(n_x, layout.const_index()) = 1.0;
    return E;
}

Mat lift_output_qc(const Mat& A_tilde, const Mat& B, const Vec& u_upper, const Vec& w,
                   const Mat& S, const BasisLayout& layout) {
    const int n_x = static_cast<int>(A_tilde.rows());
    if (S.rows() != n_x + 1 || S.cols() != n_x + 1)
        throw DimensionMismatch("lift_output_qc: S size != n_x+1");
    Mat E = output_selector(A_tilde, B, u_upper, w, layout);
    return symmetrize(E.transpose() * S * E);
}

Mat lift_output_qc(const ReformedAgent& ra, const Mat& S, const Vec& w,
                   const BasisLayout& layout) {
    return lift_output_qc(ra.A_tilde, ra.agent->B, ra.net.u_upper, w, S, layout);
}

}  // namespace mareach
