#include "model.hpp"

#include "decomp.hpp"

#include <algorithm>

namespace sunn {

void ModelParams::validate() const {
    if (n < 2) throw InvalidArgument("ModelParams: n must be at least 2");
    if (!(x > 0.0)) throw InvalidArgument("ModelParams: x must be positive");
    if (!std::isfinite(x) || !std::isfinite(u) || !std::isfinite(v))
        throw InvalidArgument("ModelParams: parameters must be finite");
    if (u + v == 0.0) throw InvalidArgument("ModelParams: u + v must be nonzero");
}

bool in_chamber(const ModelParams& params, const RVec& phat, double slack) {
    if (phat.size() != params.n || !phat.allFinite()) return false;
    for (int k = 0; k + 1 < params.n; ++k)
        if (phat[k] - phat[k + 1] < params.x / 2.0 - slack) return false;
    return true;
}

void require_chamber(const ModelParams& params, const RVec& phat, double slack) {
    if (!in_chamber(params, phat, slack))
        throw DomainError("point violates the chamber inequalities");
}

Mat nu_matrix(const ModelParams& params) {
    params.validate();
    const int n = params.n;
    const double c = 1.0 - std::exp(-params.x);
    Mat nu = Mat::Identity(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
            nu(j, k) = c * std::exp(0.5 * static_cast<double>(k - j) * params.x);
    return nu;
}

RVec kappa_vector(const ModelParams& params) {
    params.validate();
    const int n = params.n;
    const double x = params.x;
    const double norm = std::sqrt(n * (std::exp(x) - 1.0) / (1.0 - std::exp(-n * x)));
    RVec v(n);
    for (int j = 0; j < n; ++j) v[j] = norm * std::exp(-0.5 * (j + 1) * x);
    return v;
}

namespace {

// Rotation of the form used for both kappa and zeta: determined by a unit
// vector w (|w| = 1), with last column w and last row -w except the corner.
RMat corner_rotation(const RVec& w) {
    const int n = static_cast<int>(w.size());
    RMat m(n, n);
    const double wn = w[n - 1];
    for (int i = 0; i < n - 1; ++i) {
        for (int j = 0; j < n - 1; ++j)
            m(i, j) = (i == j ? 1.0 : 0.0) - w[i] * w[j] / (1.0 + wn);
        m(i, n - 1) = w[i];
        m(n - 1, i) = -w[i];
    }
    m(n - 1, n - 1) = wn;
    return m;
}

}  // namespace

RMat kappa_matrix(const ModelParams& params) {
    const RVec v = kappa_vector(params);
    const double rn = std::sqrt(static_cast<double>(params.n));
    return corner_rotation(v / rn);
}

RMat theta_core(const ModelParams& params, const RVec& phat) {
    const int n = params.n;
    const double x = params.x;
    if (phat.size() != n) throw InvalidArgument("theta_core: wrong dimension");
    const double shx2 = std::sinh(0.5 * x);

    RMat core(n, n);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            double prod = 1.0;
            for (int m = 0; m < n; ++m) {
                if (m == j || m == k) continue;
                const double t1 = phat[j] - phat[m] - 0.5 * x;
                const double t2 = phat[k] - phat[m] + 0.5 * x;
                // The factor t1 vanishes exactly when m = j+1 with the gap
                // saturated, t2 when m = k-1; divide those zeros out so the
                // core stays smooth across the boundary.
                const double f1 = (m == j + 1) ? sinhc(t1) : std::sinh(t1);
                const double f2 = (m == k - 1) ? -sinhc(-t2) : std::sinh(t2);
                const double den = std::sinh(phat[j] - phat[m]) * std::sinh(phat[k] - phat[m]);
                prod *= f1 * f2 / den;
            }
            if (prod < -1e-9)
                throw DomainError("theta_core: negative factor product (point outside chamber)");
            double entry = std::sqrt(std::max(prod, 0.0));
            if (j != k) entry *= shx2 / std::sinh(phat[k] - phat[j]);
            core(j, k) = entry;
        }
    }
    return core;
}

RVec zeta_r_core(const ModelParams& params, const RVec& phat) {
    const int n = params.n;
    const double x = params.x;
    if (phat.size() != n) throw InvalidArgument("zeta_r_core: wrong dimension");
    const double head = (1.0 - std::exp(-x)) / (1.0 - std::exp(-n * x));

    RVec core(n);
    for (int j = 0; j < n; ++j) {
        double prod = head;
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            const double t = 2.0 * (phat[j] - phat[k]);
            const double den = 1.0 - std::exp(t);
            if (k == j + 1) {
                // 1 - e^{t - x} = -(t - x) expm1c(t - x) with t - x = 2 m_j^2.
                prod *= 2.0 * expm1c(t - x) / (-den);
            } else {
                prod *= (1.0 - std::exp(t - x)) / den;
            }
        }
        if (prod < -1e-9)
            throw DomainError("zeta_r_core: negative factor product (point outside chamber)");
        core[j] = std::sqrt(std::max(prod, 0.0));
    }
    return core;
}

namespace {

RVec boundary_moduli(const ModelParams& params, const RVec& phat) {
    RVec m(params.n - 1);
    for (int j = 0; j + 1 < params.n; ++j)
        m[j] = std::sqrt(std::max(phat[j] - phat[j + 1] - 0.5 * params.x, 0.0));
    return m;
}

}  // namespace

RMat theta_matrix(const ModelParams& params, const ChamberPoint& p) {
    params.validate();
    require_chamber(params, p.phat);
    const int n = params.n;
    const RMat core = theta_core(params, p.phat);
    const RVec m = boundary_moduli(params, p.phat);
    RMat theta(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            double entry = core(j, k);
            if (j < n - 1 && k != j + 1) entry *= m[j];
            if (k > 0 && j != k - 1) entry *= m[k - 1];
            theta(j, k) = entry;
        }
    return theta;
}

RVec zeta_r(const ModelParams& params, const ChamberPoint& p) {
    params.validate();
    require_chamber(params, p.phat);
    const int n = params.n;
    const RVec core = zeta_r_core(params, p.phat);
    const RVec m = boundary_moduli(params, p.phat);
    RVec r(n);
    for (int j = 0; j < n; ++j) r[j] = j < n - 1 ? core[j] * m[j] : core[j];
    const double norm2 = r.squaredNorm();
    if (std::abs(norm2 - 1.0) > 1e-8)
        throw Error("zeta_r: |r|^2 deviates from 1 by " + std::to_string(norm2 - 1.0));
    return r;
}

RMat zeta_matrix(const ModelParams& params, const ChamberPoint& p) {
    return corner_rotation(zeta_r(params, p));
}

Model::Model(const ModelParams& params) : params_(params) {
    params_.validate();
    const int n = params_.n;
    sig_ = signature_matrix(n);
    nu_ = nu_matrix(params_);
    nu_gram_ = nu_ * nu_.adjoint();
    kappa_vec_ = kappa_vector(params_);
    kappa_ = corner_rotation(kappa_vec_ / std::sqrt(static_cast<double>(n)));

    mu_left_ = Mat::Zero(2 * n, 2 * n);
    mu_left_.topLeftCorner(n, n) = std::exp(params_.u) * nu_;
    mu_left_.bottomRightCorner(n, n) = std::exp(-params_.u) * Mat::Identity(n, n);
    mu_right_ = Mat::Zero(2 * n, 2 * n);
    mu_right_.topLeftCorner(n, n) = std::exp(params_.v) * Mat::Identity(n, n);
    mu_right_.bottomRightCorner(n, n) = std::exp(-params_.v) * Mat::Identity(n, n);

    // kappa diagonalizes the Gram matrix of nu; locate the simple eigenvalue
    // among the diagonal entries rather than assuming its position.
    const Mat diag = kappa_.transpose().cast<Complex>() * nu_gram_ * kappa_.cast<Complex>();
    RVec d(n);
    for (int i = 0; i < n; ++i) d[i] = diag(i, i).real();
    int best = 0;
    double best_sep = -1.0;
    for (int i = 0; i < n; ++i) {
        double rest = 0.0;
        for (int k = 0; k < n; ++k)
            if (k != i) rest += d[k];
        rest /= (n - 1);
        const double sep = std::abs(d[i] - rest);
        if (sep > best_sep) {
            best_sep = sep;
            best = i;
        }
    }
    simple_index_ = best;
    simple_value_ = d[best];
    double rest = 0.0;
    for (int k = 0; k < n; ++k)
        if (k != best) rest += d[k];
    repeated_value_ = rest / (n - 1);
}

}  // namespace sunn
