// Matrix factorizations for the pseudo-unitary setting: the signature
// ("J") Cholesky factorization, the two Iwasawa-like splittings, the
// generalized Cartan decomposition with hyperbolic middle factor, the
// polar decomposition and the matrix exponential.
#ifndef SUNN_DECOMP_HPP
#define SUNN_DECOMP_HPP

#include "types.hpp"

namespace sunn {

// diag(1_n, -1_n), size 2n.
Mat signature_matrix(int n);

// Upper triangular b with positive diagonal such that b J b^H = M.
// M must be Hermitian of even size 2n and arise from a signature-(n,n)
// quadratic form; otherwise FactorizationFailed is thrown. No determinant
// normalization is applied: when M comes from a unit-determinant group
// element, det b = 1 up to round-off.
Mat j_cholesky(const Mat& M, double tol = kStructuralTol);

struct IwasawaFactors {
    Mat unitary_like;  // element of SU(n,n)
    Mat triangular;    // element of SB(2n)
};

enum class IwasawaSide { Left, Right };

// K = unitary_like * triangular^{-1}  (g_L, b_R).
IwasawaFactors iwasawa_right(const Mat& K, double tol = kStructuralTol);
// K = triangular * unitary_like^{-1}  (b_L, g_R).
IwasawaFactors iwasawa_left(const Mat& K, double tol = kStructuralTol);
IwasawaFactors iwasawa(const Mat& K, IwasawaSide side, double tol = kStructuralTol);

struct CartanFactors {
    Mat gplus;   // block-diagonal, det(a)det(b) = 1
    RVec q;      // q_1 >= ... >= q_n >= 0
    Mat hplus;   // block-diagonal, det(c)det(d) = 1
    bool degenerate = false;  // two sinh(q) values coincide; q is still valid
};

// [[cosh q, sinh q], [sinh q, cosh q]] for diagonal q.
Mat cartan_middle(const RVec& q);

// g = gplus * cartan_middle(q) * hplus for g in SU(n,n).
// sinh(q) are the singular values of the upper-right block of g.
CartanFactors cartan(const Mat& g, double tol = kStructuralTol, double qgap_tol = 1e-9);

struct PolarFactors {
    Mat hermitian;  // positive semi-definite
    Mat unitary;
    bool unique = true;  // false when the input is (numerically) singular
};

// omega = hermitian * unitary.
PolarFactors polar(const Mat& omega, double tol = kStructuralTol);

// exp(A) for a square complex matrix.
Mat mat_exp(const Mat& A);

}  // namespace sunn

#endif
