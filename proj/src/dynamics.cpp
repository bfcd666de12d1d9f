#include "dynamics.hpp"

#include "decomp.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace sunn {

namespace {

Mat int_power(const Mat& W, int j) {
    if (j == 0) throw InvalidArgument("power index must be nonzero");
    const Mat base = j > 0 ? W : Mat(W.inverse());
    Mat acc = base;
    for (int k = 1; k < std::abs(j); ++k) acc = acc * base;
    return acc;
}

Mat flow_conjugant(const Mat& K) {
    const int n = static_cast<int>(K.rows()) / 2;
    const Mat J = signature_matrix(n);
    return K * J * K.adjoint() * J;
}

}  // namespace

double free_hamiltonian(const Mat& K, int j) {
    require_square(K, "free_hamiltonian");
    require_finite(K, "free_hamiltonian");
    if (j == 0) throw InvalidArgument("free_hamiltonian: index must be nonzero");
    const Mat P = int_power(flow_conjugant(K), j);
    return P.trace().real() / (2.0 * j);
}

Mat free_flow(const Mat& K0, int j, double t) {
    require_square(K0, "free_flow");
    require_finite(K0, "free_flow");
    if (j == 0) throw InvalidArgument("free_flow: index must be nonzero");
    const int N = static_cast<int>(K0.rows());
    const Mat P = int_power(flow_conjugant(K0), j);
    const Complex shift = P.trace() / static_cast<double>(N);
    const Mat X = Complex(0.0, t) * (P - shift * Mat::Identity(N, N));
    return mat_exp(X) * K0;
}

Mat lax_matrix(const Model& m, const SectionPoint& s) {
    const Mat alpha = hat_dressing(m, s).alpha_hat;
    return alpha.adjoint() * alpha;
}

Mat lax_matrix_explicit(const Model& m, const ChamberPoint& p, const TorusPoint& t) {
    require_chamber(m.params(), p.phat);
    require_torus(t);
    const int n = m.n();
    const RMat theta = theta_matrix(m.params(), p);
    RVec aprof(n), cprof(n), e2p(n);
    for (int j = 0; j < n; ++j) {
        e2p[j] = std::exp(-2.0 * p.phat[j]);
        aprof[j] = std::sqrt(std::exp(-2.0 * m.u()) * e2p[j] + std::exp(-2.0 * m.v()));
        cprof[j] = std::sqrt(e2p[j] + 1.0);
    }
    const double ev = std::exp(m.v());
    const double c1 = std::exp(2.0 * m.v()) + std::exp(-2.0 * m.u());
    const double c2 = std::exp(2.0 * m.v()) + std::exp(-2.0 * m.v());
    Mat L = (c1 * e2p).cast<Complex>().asDiagonal() * Mat::Identity(n, n);
    L += c2 * Mat::Identity(n, n);
    const CVec aphase = aprof.cast<Complex>().cwiseProduct(t.phases);
    const Mat cross = aphase.asDiagonal() * theta.transpose().cast<Complex>() *
                      (ev * cprof).cast<Complex>().asDiagonal();
    L -= cross;
    L -= cross.adjoint();
    return L;
}

Mat ruijsenaars_lax(const Model& m, const ChamberPoint& p, const TorusPoint& t) {
    require_chamber(m.params(), p.phat);
    require_torus(t);
    const RMat theta = theta_matrix(m.params(), p);
    const Mat half = t.phases.asDiagonal() * theta.transpose().cast<Complex>();
    return half + half.adjoint();
}

namespace {

// Profiles used by the reduced Hamiltonian: the external-field factor V_j
// and the pair factor W_j = prod_{k != j} sqrt(1 - sinh^2(x/2)/sinh^2(p_j - p_k)).
struct ReducedTerms {
    RVec V, W, e2p;
};

ReducedTerms reduced_terms(const Model& m, const RVec& phat) {
    const int n = m.n();
    const double E = std::exp(2.0 * (m.v() - m.u()));
    const double s2 = std::pow(std::sinh(0.5 * m.x()), 2);
    ReducedTerms rt;
    rt.V.resize(n);
    rt.W.resize(n);
    rt.e2p.resize(n);
    for (int j = 0; j < n; ++j) {
        rt.e2p[j] = std::exp(-2.0 * phat[j]);
        rt.V[j] = std::sqrt(1.0 + (1.0 + E) * rt.e2p[j] + E * rt.e2p[j] * rt.e2p[j]);
        double w = 1.0;
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            const double f = 1.0 - s2 / std::pow(std::sinh(phat[j] - phat[k]), 2);
            w *= std::sqrt(std::max(f, 0.0));
        }
        rt.W[j] = w;
    }
    return rt;
}

}  // namespace

double reduced_hamiltonian(const Model& m, const ChamberPoint& p, const TorusPoint& t) {
    require_chamber(m.params(), p.phat);
    require_torus(t);
    const int n = m.n();
    const ReducedTerms rt = reduced_terms(m, p.phat);
    const double c0 = 0.5 * (std::exp(-2.0 * m.u()) + std::exp(2.0 * m.v()));
    double h = -c0 * rt.e2p.sum();
    for (int j = 0; j < n; ++j) h += t.phases[j].real() * rt.V[j] * rt.W[j];
    return h;
}

std::pair<RVec, RVec> reduced_gradient(const Model& m, const ChamberPoint& p,
                                       const TorusPoint& t) {
    require_chamber(m.params(), p.phat);
    const int n = m.n();
    const double E = std::exp(2.0 * (m.v() - m.u()));
    const double s2 = std::pow(std::sinh(0.5 * m.x()), 2);
    const double c0 = 0.5 * (std::exp(-2.0 * m.u()) + std::exp(2.0 * m.v()));
    const ReducedTerms rt = reduced_terms(m, p.phat);

    RVec cosq(n), sinq(n);
    for (int j = 0; j < n; ++j) {
        cosq[j] = t.phases[j].real();
        sinq[j] = t.phases[j].imag();
    }

    RVec dq(n);
    for (int j = 0; j < n; ++j) dq[j] = -sinq[j] * rt.V[j] * rt.W[j];

    // dW_j/dp_l through the pair factors f_{jk} = 1 - s2/sinh^2(p_j - p_k).
    auto pair_term = [&](int j, int k) {
        const double d = p.phat[j] - p.phat[k];
        const double sh = std::sinh(d);
        const double f = 1.0 - s2 / (sh * sh);
        return s2 * std::cosh(d) / (sh * sh * sh * f);
    };

    RVec dp(n);
    for (int l = 0; l < n; ++l) {
        double acc = 2.0 * c0 * rt.e2p[l];
        const double dV = -((1.0 + E) * rt.e2p[l] + 2.0 * E * rt.e2p[l] * rt.e2p[l]) / rt.V[l];
        acc += cosq[l] * dV * rt.W[l];
        double wself = 0.0;
        for (int k = 0; k < n; ++k)
            if (k != l) wself += pair_term(l, k);
        acc += cosq[l] * rt.V[l] * rt.W[l] * wself;
        for (int j = 0; j < n; ++j) {
            if (j == l) continue;
            acc -= cosq[j] * rt.V[j] * rt.W[j] * pair_term(j, l);
        }
        dp[l] = acc;
    }
    return {std::move(dp), std::move(dq)};
}

ConservedSpectrum conserved_spectrum(const Mat& L) {
    require_square(L, "conserved_spectrum");
    require_finite(L, "conserved_spectrum");
    const int n = static_cast<int>(L.rows());
    ConservedSpectrum out;
    out.h.resize(n);
    Mat acc = L;
    for (int k = 0; k < n; ++k) {
        out.h[k] = acc.trace().real();
        if (k + 1 < n) acc = acc * L;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(L);
    out.eigenvalues = es.eigenvalues().reverse();
    return out;
}

std::pair<PowerCoefficients, Mat> power_blocks(const Mat& alpha, double v, int j) {
    require_square(alpha, "power_blocks");
    require_finite(alpha, "power_blocks");
    if (j == 0) throw InvalidArgument("power_blocks: index must be nonzero");
    const int n = static_cast<int>(alpha.rows());
    const int jj = std::abs(j);
    const double emv = std::exp(-v);
    const double em2v = std::exp(-2.0 * v);
    const double e2v = std::exp(2.0 * v);

    PowerCoefficients pc;
    pc.order = jj;
    RVec a(1), b(1), c(1), d(1);
    a << em2v;
    b << -emv;
    c << emv;
    d << e2v;
    for (int m = 1; m < jj; ++m) {
        // one induction step m -> m+1
        RVec an(m + 1), bn(m + 1), cn(m + 1), dn(m + 1);
        an[0] = -emv * c[0];
        cn[0] = -c[0];
        bn[0] = (m % 2 == 0 ? -emv : emv);  // (-1)^{m+1} e^{-v}
        dn[0] = emv * b[0] + (m % 2 == 0 ? e2v : -e2v) - d[0];
        for (int i = 1; i < m; ++i) {
            an[i] = -emv * c[i] + em2v * a[i - 1];
            cn[i] = -c[i] + emv * a[i - 1] + e2v * c[i - 1];
            dn[i] = emv * b[i] - d[i] + e2v * d[i - 1];
        }
        an[m] = em2v * a[m - 1];
        cn[m] = emv * a[m - 1] + e2v * c[m - 1];
        dn[m] = e2v * d[m - 1];
        for (int i = 1; i <= m; ++i) bn[i] = em2v * b[i - 1] - emv * d[i - 1];
        a = an;
        b = bn;
        c = cn;
        d = dn;
    }
    pc.a = a;
    pc.b = b;
    pc.c = c;
    pc.d = d;

    const Mat gl = alpha * alpha.adjoint();  // left Gram
    const Mat gr = alpha.adjoint() * alpha;  // right Gram
    std::vector<Mat> glp(jj), grp(jj);       // powers 0 .. jj-1
    glp[0] = Mat::Identity(n, n);
    grp[0] = Mat::Identity(n, n);
    for (int k = 1; k < jj; ++k) {
        glp[k] = glp[k - 1] * gl;
        grp[k] = grp[k - 1] * gr;
    }
    const double sign = (jj % 2 == 0) ? 1.0 : -1.0;

    Mat block11 = Mat::Zero(n, n), block12 = Mat::Zero(n, n);
    Mat block21 = Mat::Zero(n, n), block22 = Mat::Zero(n, n);
    if (j > 0) {
        for (int mth = 1; mth <= jj; ++mth) {
            block11 += a[mth - 1] * glp[jj - mth];
            block12 += b[mth - 1] * grp[jj - mth];
            block21 += c[mth - 1] * glp[jj - mth];
            block22 += d[mth - 1] * grp[jj - mth];
        }
        block12 = alpha * block12;
        block21 = alpha.adjoint() * block21;
        block22 += sign * (jj > 1 ? grp[jj - 1] * gr : gr);
    } else {
        // Inverse powers carry the order-reversed pattern with the two Gram
        // orderings swapped.
        for (int mth = 1; mth <= jj; ++mth) {
            block11 += d[mth - 1] * glp[jj - mth];
            block12 += c[mth - 1] * grp[jj - mth];
            block21 += b[mth - 1] * glp[jj - mth];
            block22 += a[mth - 1] * grp[jj - mth];
        }
        block11 += sign * (jj > 1 ? glp[jj - 1] * gl : gl);
        block12 = alpha * block12;
        block21 = alpha.adjoint() * block21;
    }

    Mat out(2 * n, 2 * n);
    out.topLeftCorner(n, n) = block11;
    out.topRightCorner(n, n) = block12;
    out.bottomLeftCorner(n, n) = block21;
    out.bottomRightCorner(n, n) = block22;
    return {std::move(pc), std::move(out)};
}

ExpressibilityFit expressibility_fit(const Model& m, const std::vector<SectionPoint>& samples,
                                     int j) {
    const int n = m.n();
    const int cols = n + 1;
    if (static_cast<int>(samples.size()) < 2 * cols)
        throw InvalidArgument("expressibility_fit: not enough samples");
    RMat design(samples.size(), cols);
    RVec target(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Mat L = lax_matrix(m, samples[i]);
        const ConservedSpectrum cs = conserved_spectrum(L);
        design(i, 0) = 1.0;
        for (int k = 0; k < n; ++k) design(i, k + 1) = cs.h[k];
        target[i] = free_hamiltonian(section_global(m, samples[i]), j);
    }
    // column scaling: the trace powers span many orders of magnitude
    RVec colscale(cols);
    for (int k = 0; k < cols; ++k)
        colscale[k] = std::max(design.col(k).cwiseAbs().maxCoeff(), 1e-300);
    const RMat scaled = design * colscale.cwiseInverse().asDiagonal();
    Eigen::ColPivHouseholderQR<RMat> qr(scaled);
    if (qr.rank() < cols)
        throw IllConditioned("expressibility_fit: sample Gram matrix is rank-deficient");
    ExpressibilityFit fit;
    fit.coefficients = colscale.cwiseInverse().asDiagonal() * RVec(qr.solve(target));
    fit.residual = (design * fit.coefficients - target).cwiseAbs().maxCoeff();
    return fit;
}

Trajectory evolve_projection(const Model& m, const SectionPoint& z0, int j, const RVec& times) {
    require_section(z0);
    if (times.size() == 0) throw InvalidArgument("evolve_projection: empty time grid");
    const int n = m.n();
    const int N = 2 * n;
    const Mat K0 = section_global(m, z0);
    const Mat P = int_power(flow_conjugant(K0), j);
    const Complex shift = P.trace() / static_cast<double>(N);
    const Mat gen = P - shift * Mat::Identity(N, N);

    // The triangular factor is a constant of motion, so the flow acts on
    // the pseudo-unitary factor alone; recovering from the split keeps the
    // conditioning linear in the norm of the flowed factor.
    const IwasawaFactors right = iwasawa_right(K0);
    const Mat b_r_inv = right.triangular.triangularView<Eigen::Upper>().solve(Mat::Identity(N, N));
    const Mat coupling = b_r_inv.topRightCorner(n, n);

    Trajectory traj;
    traj.times = times;
    traj.points.reserve(times.size());
    traj.conserved.resize(times.size(), n);
    traj.hamiltonian.resize(times.size());
    for (Eigen::Index i = 0; i < times.size(); ++i) {
        const Mat U = mat_exp(Mat(Complex(0.0, times[i]) * gen)) * right.unitary_like;
        SectionPoint z = z_from_split(m, U, coupling);
        const ConservedSpectrum cs = conserved_spectrum(lax_matrix(m, z));
        traj.conserved.row(i) = cs.h.transpose();
        traj.hamiltonian[i] = free_hamiltonian(Mat(U * b_r_inv), j);
        traj.points.push_back(std::move(z));
    }
    return traj;
}

namespace {

// Chart vector field of the reduced Hamiltonian: dq/dt = -dH/dp,
// dp/dt = +dH/dq. The orientation is pinned to the explicit free flow, so
// the two trajectory engines follow the same motion.
void darboux_field(const Model& m, const RVec& phat, const RVec& qhat, RVec& dp, RVec& dq) {
    const TorusPoint t = torus_point_from_angles(qhat);
    auto [gp, gq] = reduced_gradient(m, ChamberPoint{phat}, t);
    dp = gq;
    dq = -gp;
}

double min_gap_excess(const Model& m, const RVec& phat) {
    double g = std::numeric_limits<double>::infinity();
    for (int k = 0; k + 1 < m.n(); ++k)
        g = std::min(g, phat[k] - phat[k + 1] - 0.5 * m.x());
    return g;
}

}  // namespace

Trajectory evolve_darboux(const Model& m, const ChamberPoint& p0, const TorusPoint& t0,
                          const RVec& times, double step) {
    require_chamber(m.params(), p0.phat);
    require_torus(t0);
    if (!(step > 0.0)) throw InvalidArgument("evolve_darboux: step must be positive");
    if (times.size() == 0 || times[0] != 0.0)
        throw InvalidArgument("evolve_darboux: time grid must start at 0");
    const int n = m.n();

    RVec phat = p0.phat;
    RVec qhat(n);
    for (int k = 0; k < n; ++k) qhat[k] = std::arg(t0.phases[k]);

    Trajectory traj;
    traj.times = times;
    traj.points.reserve(times.size());
    traj.conserved.resize(times.size(), n);
    traj.hamiltonian.resize(times.size());

    auto record = [&](Eigen::Index i) {
        const TorusPoint t = torus_point_from_angles(qhat);
        SectionPoint z = z_of_angles(m, ChamberPoint{phat}, t);
        const ConservedSpectrum cs = conserved_spectrum(lax_matrix(m, z));
        traj.conserved.row(i) = cs.h.transpose();
        traj.hamiltonian[i] = reduced_hamiltonian(m, ChamberPoint{phat}, t);
        traj.points.push_back(std::move(z));
    };

    record(0);
    RVec dp(n), dq(n), pm(n), qm(n);
    for (Eigen::Index i = 1; i < times.size(); ++i) {
        const double span = times[i] - times[i - 1];
        if (!(span > 0.0)) throw InvalidArgument("evolve_darboux: times must increase");
        const int nsub = std::max(1, static_cast<int>(std::ceil(span / step - 1e-12)));
        const double h = span / nsub;
        for (int sub = 0; sub < nsub; ++sub) {
            if (min_gap_excess(m, phat) < 10.0 * step)
                throw BoundaryApproach(
                    "evolve_darboux: trajectory within guard distance of the chamber boundary "
                    "near t = " +
                    std::to_string(times[i - 1] + sub * h) + "; use the projection engine");
            // implicit midpoint via fixed-point iteration on the stage value
            darboux_field(m, phat, qhat, dp, dq);
            pm = phat + 0.5 * h * dp;
            qm = qhat + 0.5 * h * dq;
            bool converged = false;
            for (int it = 0; it < 50; ++it) {
                darboux_field(m, pm, qm, dp, dq);
                RVec pn = phat + 0.5 * h * dp;
                RVec qn = qhat + 0.5 * h * dq;
                const double delta =
                    std::max((pn - pm).cwiseAbs().maxCoeff(), (qn - qm).cwiseAbs().maxCoeff());
                pm.swap(pn);
                qm.swap(qn);
                if (delta < 1e-12) {
                    converged = true;
                    break;
                }
            }
            if (!converged)
                throw IllConditioned("evolve_darboux: midpoint iteration failed to converge");
            phat = 2.0 * pm - phat;
            qhat = 2.0 * qm - qhat;
        }
        record(i);
    }
    return traj;
}

ChartFn conserved_trace_fn(const Model& m, int k) {
    if (k < 1 || k > m.n()) throw InvalidArgument("conserved_trace_fn: k out of range");
    return [&m, k](const RVec& phat, const RVec& qhat) {
        const Mat alpha = alpha_of_angles(m, ChamberPoint{phat}, torus_point_from_angles(qhat));
        Mat acc = alpha.adjoint() * alpha;
        const Mat L = acc;
        for (int i = 1; i < k; ++i) acc = acc * L;
        return acc.trace().real();
    };
}

ChartFn reduced_hamiltonian_fn(const Model& m) {
    return [&m](const RVec& phat, const RVec& qhat) {
        return reduced_hamiltonian(m, ChamberPoint{phat}, torus_point_from_angles(qhat));
    };
}

std::pair<RVec, RVec> gradient_fd(const ChartFn& f, const RVec& phat, const RVec& qhat,
                                  double step) {
    const int n = static_cast<int>(phat.size());
    RVec dp(n), dq(n);
    RVec pp = phat, qq = qhat;
    for (int k = 0; k < n; ++k) {
        pp[k] = phat[k] + step;
        const double fp = f(pp, qhat);
        pp[k] = phat[k] - step;
        const double fm = f(pp, qhat);
        pp[k] = phat[k];
        dp[k] = (fp - fm) / (2.0 * step);

        qq[k] = qhat[k] + step;
        const double gp = f(phat, qq);
        qq[k] = qhat[k] - step;
        const double gm = f(phat, qq);
        qq[k] = qhat[k];
        dq[k] = (gp - gm) / (2.0 * step);
    }
    return {std::move(dp), std::move(dq)};
}

double poisson_fd(const ChartFn& f, const ChartFn& g, const RVec& phat, const RVec& qhat,
                  double step) {
    auto [fp, fq] = gradient_fd(f, phat, qhat, step);
    auto [gp, gq] = gradient_fd(g, phat, qhat, step);
    return fq.dot(gp) - fp.dot(gq);
}

}  // namespace sunn
