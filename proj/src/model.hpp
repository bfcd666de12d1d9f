// Model data: deformation parameters, the structure matrices nu, theta,
// zeta, kappa, the momentum value and the chamber geometry.
#ifndef SUNN_MODEL_HPP
#define SUNN_MODEL_HPP

#include "types.hpp"

namespace sunn {

struct ModelParams {
    int n = 2;      // number of particles, n > 1
    double x = 1.0; // deformation scale, x > 0
    double u = 0.0;
    double v = 0.0; // couplings, u + v != 0

    void validate() const;
};

// Position coordinates p-hat restricted to the closed chamber
// p_k - p_{k+1} >= x/2.
struct ChamberPoint {
    RVec phat;
};

bool in_chamber(const ModelParams& params, const RVec& phat, double slack = 1e-12);
void require_chamber(const ModelParams& params, const RVec& phat, double slack = 1e-12);

// Upper triangular deformation matrix with unit diagonal; its Gram matrix
// has exactly two distinct eigenvalues, one of them simple.
Mat nu_matrix(const ModelParams& params);

RVec kappa_vector(const ModelParams& params);
RMat kappa_matrix(const ModelParams& params);

// Smooth entrywise core of theta: theta_{jk} = core_{jk} * m_j * m_{k-1},
// where m_j = sqrt(p_j - p_{j+1} - x/2) and a factor is omitted when the
// corresponding index falls outside 1..n-1 or collides with the entry's own
// row/column (those entries carry no vanishing factor). The core is smooth
// and nonvanishing on the closed chamber.
RMat theta_core(const ModelParams& params, const RVec& phat);

// Same role for the unit vector r entering zeta: r_j = core_j * m_j for
// j < n and r_n = core_n.
RVec zeta_r_core(const ModelParams& params, const RVec& phat);

// Orthogonal structure matrices on the chamber (determinant 1).
RMat theta_matrix(const ModelParams& params, const ChamberPoint& p);
RMat zeta_matrix(const ModelParams& params, const ChamberPoint& p);
RVec zeta_r(const ModelParams& params, const ChamberPoint& p);

// Parameters plus cached structure data; immutable after construction.
class Model {
  public:
    explicit Model(const ModelParams& params);

    const ModelParams& params() const { return params_; }
    int n() const { return params_.n; }
    double x() const { return params_.x; }
    double u() const { return params_.u; }
    double v() const { return params_.v; }

    const Mat& J() const { return sig_; }
    const Mat& nu() const { return nu_; }
    const Mat& nu_gram() const { return nu_gram_; }
    const RMat& kappa() const { return kappa_; }
    const RVec& kappa_vec() const { return kappa_vec_; }

    // Block-diagonal momentum value (left and right components).
    const Mat& mu_left() const { return mu_left_; }
    const Mat& mu_right() const { return mu_right_; }

    // Eigenstructure of kappa^{-1} (nu nu^H) kappa, which is diagonal: the
    // position of the simple eigenvalue is located numerically once.
    int simple_eigen_index() const { return simple_index_; }
    double simple_eigenvalue() const { return simple_value_; }
    double repeated_eigenvalue() const { return repeated_value_; }

  private:
    ModelParams params_;
    Mat sig_;
    Mat nu_;
    Mat nu_gram_;
    RMat kappa_;
    RVec kappa_vec_;
    Mat mu_left_;
    Mat mu_right_;
    int simple_index_ = 0;
    double simple_value_ = 0.0;
    double repeated_value_ = 0.0;
};

}  // namespace sunn

#endif
