#include "decomp.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace sunn {

Mat signature_matrix(int n) {
    if (n < 1) throw InvalidArgument("signature_matrix: n must be positive");
    Mat J = Mat::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) J(i, i) = 1.0;
    for (int i = n; i < 2 * n; ++i) J(i, i) = -1.0;
    return J;
}

// The factorization b J b^H = M with b upper triangular is built from the
// bottom-right corner upward: row j of b touches only columns >= j, so the
// trailing rows determine each pivot. With J = diag(1_n, -1_n) the pivot of
// row j must be positive for j < n and negative for j >= n.
Mat j_cholesky(const Mat& M, double tol) {
    require_square(M, "j_cholesky");
    require_finite(M, "j_cholesky");
    const int N = static_cast<int>(M.rows());
    if (N % 2 != 0) throw InvalidArgument("j_cholesky: size must be even");
    const int n = N / 2;
    const double scale = std::max(1.0, max_abs(M));
    if (max_abs(Mat(M - M.adjoint())) > tol * scale)
        throw InvalidArgument("j_cholesky: input is not Hermitian");

    auto sgn = [n](int i) { return i < n ? 1.0 : -1.0; };

    Mat b = Mat::Zero(N, N);
    for (int j = N - 1; j >= 0; --j) {
        double s = M(j, j).real();
        for (int k = j + 1; k < N; ++k) s -= sgn(k) * std::norm(b(j, k));
        const double pivot = sgn(j) * s;
        if (!(pivot > 1e-14 * scale))
            throw FactorizationFailed("j_cholesky: pivot of wrong sign or vanishing at row " +
                                      std::to_string(j));
        b(j, j) = std::sqrt(pivot);
        for (int i = j - 1; i >= 0; --i) {
            Complex acc = M(i, j);
            for (int k = j + 1; k < N; ++k) acc -= b(i, k) * sgn(k) * std::conj(b(j, k));
            b(i, j) = sgn(j) * acc / b(j, j).real();
        }
    }

    const Mat J = signature_matrix(n);
    const double residual = max_abs(Mat(b * J * b.adjoint() - M));
    if (residual > tol * scale)
        throw FactorizationFailed("j_cholesky: residual " + std::to_string(residual) +
                                  " exceeds tolerance");
    return b;
}

namespace {

void check_special_det(const Mat& K, double tol, const char* what) {
    const Complex det = K.determinant();
    if (std::abs(det - Complex(1.0, 0.0)) > std::max(tol, 1e-6))
        throw InvalidArgument(std::string(what) + ": determinant is not 1");
}

}  // namespace

// Both splittings are computed by signature-respecting Gram-Schmidt with
// one reorthogonalization pass. Unlike factoring the normal matrices
// K^H J K or K J K^H, the one-sided sweep keeps the error linear in the
// condition number of K, which matters at strongly hyperbolic points.
IwasawaFactors iwasawa_right(const Mat& K, double tol) {
    require_square(K, "iwasawa");
    require_finite(K, "iwasawa");
    const int N = static_cast<int>(K.rows());
    if (N % 2 != 0) throw InvalidArgument("iwasawa: size must be even");
    check_special_det(K, tol, "iwasawa");
    const int n = N / 2;
    auto sgn = [n](int i) { return i < n ? 1.0 : -1.0; };
    const Mat J = signature_matrix(n);

    // Columns of the pseudo-unitary factor from left to right; the upper
    // triangular coefficients accumulate b_R^{-1}.
    Mat g(N, N);
    Mat r = Mat::Zero(N, N);
    for (int k = 0; k < N; ++k) {
        CVec v = K.col(k);
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i < k; ++i) {
                const Complex c = sgn(i) * (g.col(i).adjoint() * (J * v))(0, 0);
                v -= c * g.col(i);
                r(i, k) += c;
            }
        }
        const double norm2 = sgn(k) * (v.adjoint() * (J * v))(0, 0).real();
        if (!(norm2 > 0.0))
            throw NotInPrimeSubset("iwasawa(right): column " + std::to_string(k) +
                                   " has the wrong signature");
        r(k, k) = std::sqrt(norm2);
        g.col(k) = v / r(k, k).real();
    }
    // K = g * r with r in SB(2n), so the triangular factor is r^{-1}.
    Mat b_r = r.triangularView<Eigen::Upper>().solve(Mat::Identity(N, N));
    return IwasawaFactors{std::move(g), std::move(b_r)};
}

IwasawaFactors iwasawa_left(const Mat& K, double tol) {
    require_square(K, "iwasawa");
    require_finite(K, "iwasawa");
    const int N = static_cast<int>(K.rows());
    if (N % 2 != 0) throw InvalidArgument("iwasawa: size must be even");
    check_special_det(K, tol, "iwasawa");
    const int n = N / 2;
    auto sgn = [n](int i) { return i < n ? 1.0 : -1.0; };
    const Mat J = signature_matrix(n);

    // Rows of the pseudo-unitary factor from the bottom up; the upper
    // triangular coefficients accumulate b_L directly.
    Mat g(N, N);
    Mat b_l = Mat::Zero(N, N);
    for (int k = N - 1; k >= 0; --k) {
        Eigen::RowVectorXcd v = K.row(k);
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = N - 1; i > k; --i) {
                const Complex c = sgn(i) * (v * (J * g.row(i).adjoint()))(0, 0);
                v -= c * g.row(i);
                b_l(k, i) += c;
            }
        }
        const double norm2 = sgn(k) * (v * (J * v.adjoint()))(0, 0).real();
        if (!(norm2 > 0.0))
            throw NotInPrimeSubset("iwasawa(left): row " + std::to_string(k) +
                                   " has the wrong signature");
        b_l(k, k) = std::sqrt(norm2);
        g.row(k) = v / b_l(k, k).real();
    }
    // K = b_L * g with g in SU(n,n), so the pseudo-unitary factor is g^{-1},
    // available in closed form as J g^H J.
    Mat g_r = J * g.adjoint() * J;
    return IwasawaFactors{std::move(g_r), std::move(b_l)};
}

IwasawaFactors iwasawa(const Mat& K, IwasawaSide side, double tol) {
    return side == IwasawaSide::Right ? iwasawa_right(K, tol) : iwasawa_left(K, tol);
}

Mat cartan_middle(const RVec& q) {
    const int n = static_cast<int>(q.size());
    Mat M = Mat::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        M(i, i) = std::cosh(q[i]);
        M(n + i, n + i) = std::cosh(q[i]);
        M(i, n + i) = std::sinh(q[i]);
        M(n + i, i) = std::sinh(q[i]);
    }
    return M;
}

CartanFactors cartan(const Mat& g, double tol, double qgap_tol) {
    require_square(g, "cartan");
    require_finite(g, "cartan");
    const int N = static_cast<int>(g.rows());
    if (N % 2 != 0) throw InvalidArgument("cartan: size must be even");
    const int n = N / 2;
    const Mat J = signature_matrix(n);
    const double scale = std::max(1.0, max_abs(g));
    if (max_abs(Mat(g.adjoint() * J * g - J)) > std::max(tol, 1e-8) * scale * scale)
        throw InvalidArgument("cartan: input does not preserve the signature form");

    const Mat A = g.topLeftCorner(n, n);
    const Mat B = g.topRightCorner(n, n);
    const Mat C = g.bottomLeftCorner(n, n);
    const Mat D = g.bottomRightCorner(n, n);

    Eigen::JacobiSVD<Mat> svd(B, Eigen::ComputeFullU | Eigen::ComputeFullV);
    RVec sigma = svd.singularValues();
    Mat U = svd.matrixU();
    Mat V = svd.matrixV();

    // Column-phase convention: first non-negligible entry of each left
    // singular vector is made real positive (the corresponding right
    // singular vector absorbs the conjugate phase so B = U S V^H holds).
    for (int k = 0; k < n; ++k) {
        const double colmax = U.col(k).cwiseAbs().maxCoeff();
        int lead = 0;
        while (lead < n - 1 && std::abs(U(lead, k)) <= 1e-12 * colmax) ++lead;
        const Complex ph = unit_phase(U(lead, k));
        U.col(k) *= std::conj(ph);
        V.col(k) *= std::conj(ph);
    }

    RVec q(n);
    for (int i = 0; i < n; ++i) q[i] = std::asinh(sigma[i]);

    bool degenerate = false;
    for (int i = 0; i + 1 < n; ++i)
        if (sigma[i] - sigma[i + 1] < qgap_tol) degenerate = true;

    RVec cosh_q = q.array().cosh();
    Mat a = U;
    Mat d = V.adjoint();
    Mat c = cosh_q.cwiseInverse().asDiagonal() * (U.adjoint() * A);
    Mat b = (D * V) * cosh_q.cwiseInverse().asDiagonal();

    // One overall phase makes det(a)det(b) = 1; the same phase applied
    // inversely to (c,d) preserves the product and fixes det(c)det(d) = 1.
    const Complex s = a.determinant() * b.determinant();
    const Complex phi = principal_root(Complex(1.0, 0.0) / s, 2 * n);
    a *= phi;
    b *= phi;
    c *= std::conj(phi);
    d *= std::conj(phi);

    CartanFactors out;
    out.q = std::move(q);
    out.degenerate = degenerate;
    out.gplus = Mat::Zero(N, N);
    out.gplus.topLeftCorner(n, n) = a;
    out.gplus.bottomRightCorner(n, n) = b;
    out.hplus = Mat::Zero(N, N);
    out.hplus.topLeftCorner(n, n) = c;
    out.hplus.bottomRightCorner(n, n) = d;
    return out;
}

PolarFactors polar(const Mat& omega, double tol) {
    require_square(omega, "polar");
    require_finite(omega, "polar");
    Eigen::JacobiSVD<Mat> svd(omega, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RVec& sigma = svd.singularValues();
    const Mat& U = svd.matrixU();
    const Mat& V = svd.matrixV();
    PolarFactors out;
    out.hermitian = U * sigma.asDiagonal() * U.adjoint();
    out.unitary = U * V.adjoint();
    const double smax = sigma.size() > 0 ? sigma[0] : 0.0;
    out.unique = sigma.size() == 0 || sigma[sigma.size() - 1] > tol * std::max(1.0, smax);
    return out;
}

Mat mat_exp(const Mat& A) {
    require_square(A, "mat_exp");
    require_finite(A, "mat_exp");
    return A.exp();
}

}  // namespace sunn
