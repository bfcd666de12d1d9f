#include "phasespace.hpp"

#include "decomp.hpp"
#include "sampling.hpp"

#include <algorithm>
#include <vector>

namespace sunn {

TorusPoint torus_point_from_angles(const RVec& qhat) {
    CVec phases(qhat.size());
    for (Eigen::Index k = 0; k < qhat.size(); ++k)
        phases[k] = std::polar(1.0, qhat[k]);
    return TorusPoint{std::move(phases)};
}

void require_torus(const TorusPoint& t, double tol) {
    if (!t.phases.allFinite()) throw InvalidArgument("TorusPoint: non-finite phases");
    for (Eigen::Index k = 0; k < t.phases.size(); ++k)
        if (std::abs(std::abs(t.phases[k]) - 1.0) > tol)
            throw InvalidArgument("TorusPoint: phases must have unit modulus");
}

void require_section(const SectionPoint& s) {
    if (!s.z.allFinite()) throw InvalidArgument("SectionPoint: non-finite coordinates");
    if (s.z.size() < 2 || s.z[s.z.size() - 1] == Complex(0.0, 0.0))
        throw InvalidArgument("SectionPoint: last component must be nonzero");
}

CVec sigma_plus(const TorusPoint& t) {
    const int n = static_cast<int>(t.phases.size());
    CVec sp(n);
    Complex acc(1.0, 0.0);
    // sp[j] = prod of phases strictly after index j (so sp[n-1] = 1).
    for (int j = n - 1; j >= 0; --j) {
        sp[j] = acc;
        acc *= t.phases[j];
    }
    return sp;
}

CVec sigma_minus(const TorusPoint& t) {
    const CVec sp = sigma_plus(t);
    const int n = static_cast<int>(sp.size());
    CVec sm(n);
    sm[0] = 1.0;
    for (int k = 1; k < n; ++k) sm[k] = std::conj(sp[k - 1]);
    return sm;
}

SectionPoint z_of_angles(const Model& m, const ChamberPoint& p, const TorusPoint& t) {
    require_chamber(m.params(), p.phat);
    require_torus(t);
    const int n = m.n();
    if (t.phases.size() != n) throw InvalidArgument("z_of_angles: wrong torus dimension");
    const CVec sp = sigma_plus(t);
    Complex full(1.0, 0.0);
    for (int k = 0; k < n; ++k) full *= t.phases[k];
    CVec z(n);
    for (int j = 0; j + 1 < n; ++j) {
        const double gap = p.phat[j] - p.phat[j + 1] - 0.5 * m.x();
        z[j] = std::sqrt(std::max(gap, 0.0)) * sp[j];
    }
    z[n - 1] = std::exp(-p.phat[0]) * full;
    return SectionPoint{std::move(z)};
}

ChamberPoint phat_of_z(const Model& m, const SectionPoint& s) {
    require_section(s);
    const int n = m.n();
    if (s.z.size() != n) throw InvalidArgument("phat_of_z: wrong dimension");
    RVec phat(n);
    phat[0] = -std::log(std::abs(s.z[n - 1]));
    for (int j = 1; j < n; ++j)
        phat[j] = phat[j - 1] - std::norm(s.z[j - 1]) - 0.5 * m.x();
    return ChamberPoint{std::move(phat)};
}

std::pair<ChamberPoint, TorusPoint> angles_of_z(const Model& m, const SectionPoint& s) {
    require_section(s);
    const int n = m.n();
    if (s.z.size() != n) throw InvalidArgument("angles_of_z: wrong dimension");
    for (int j = 0; j + 1 < n; ++j)
        if (s.z[j] == Complex(0.0, 0.0))
            throw DomainError("angles_of_z: point lies on a boundary stratum");
    CVec phases(n);
    const Complex full = unit_phase(s.z[n - 1]);
    phases[0] = full * std::conj(unit_phase(s.z[0]));
    for (int j = 1; j + 1 < n; ++j)
        phases[j] = unit_phase(s.z[j - 1]) * std::conj(unit_phase(s.z[j]));
    phases[n - 1] = unit_phase(s.z[n - 2]);
    return {phat_of_z(m, s), TorusPoint{std::move(phases)}};
}

CVec delta_of_z(const Model& m, const SectionPoint& s) {
    const int n = m.n();
    const ChamberPoint p = phat_of_z(m, s);
    CVec d(n);
    d[0] = s.z[n - 1];
    for (int j = 1; j < n; ++j) d[j] = std::exp(-p.phat[j]);
    return d;
}

namespace {

struct ChartData {
    RVec phat;
    CVec zmono;  // z_1..z_{n-1} (the monomial carriers)
};

ChartData chart_data(const Model& m, const SectionPoint& s) {
    require_section(s);
    const int n = m.n();
    if (s.z.size() != n) throw InvalidArgument("section point has wrong dimension");
    ChartData cd;
    cd.phat = phat_of_z(m, s).phat;
    cd.zmono = s.z.head(n - 1);
    return cd;
}

// theta-hat entries from the smooth core and the z monomials; with unit
// phases this reproduces the real matrix theta(p).
Mat theta_hat_impl(const Model& m, const RVec& phat, const CVec& zmono) {
    const int n = m.n();
    const RMat core = theta_core(m.params(), phat);
    Mat th(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            Complex entry = core(j, k);
            if (j < n - 1 && k != j + 1) entry *= zmono[j];
            if (k > 0 && j != k - 1) entry *= std::conj(zmono[k - 1]);
            th(j, k) = entry;
        }
    return th;
}

Mat zeta_hat_impl(const Model& m, const RVec& phat, const CVec& zmono) {
    const int n = m.n();
    const RVec core = zeta_r_core(m.params(), phat);
    const double rn = core[n - 1];
    Mat zh(n, n);
    for (int i = 0; i + 1 < n; ++i) {
        for (int j = 0; j + 1 < n; ++j) {
            Complex entry = -zmono[i] * std::conj(zmono[j]) * core[i] * core[j] / (1.0 + rn);
            if (i == j) entry += 1.0;
            zh(i, j) = entry;
        }
        zh(i, n - 1) = zmono[i] * core[i];
        zh(n - 1, i) = -std::conj(zmono[i]) * core[i];
    }
    zh(n - 1, n - 1) = rn;
    return zh;
}


// diag(sqrt(e^{-2v} e^{2p} + e^{-2u})) and diag(sqrt(e^{-2p} + 1)).
std::pair<RVec, RVec> alpha_profiles(const Model& m, const RVec& phat) {
    const int n = m.n();
    RVec s(n), c(n);
    for (int j = 0; j < n; ++j) {
        s[j] = std::sqrt(std::exp(-2.0 * m.v() + 2.0 * phat[j]) + std::exp(-2.0 * m.u()));
        c[j] = std::sqrt(std::exp(-2.0 * phat[j]) + 1.0);
    }
    return {std::move(s), std::move(c)};
}

Mat alpha_hat_impl(const Model& m, const RVec& phat, const CVec& zmono, Complex z_last) {
    const int n = m.n();
    const Mat th = theta_hat_impl(m, phat, zmono);
    auto [sprof, cprof] = alpha_profiles(m, phat);
    CVec delta(n);
    delta[0] = z_last;
    for (int j = 1; j < n; ++j) delta[j] = std::exp(-phat[j]);
    const CVec sd = sprof.cast<Complex>().cwiseProduct(delta);
    Mat alpha = sd.asDiagonal() * th.adjoint();
    alpha -= std::exp(m.v()) * cprof.cast<Complex>().asDiagonal() * Mat::Identity(n, n);
    return alpha;
}

// Assemble [[rho, 0],[0, 1]] * [[cosh, sinh],[sinh, cosh]] * [[e^-v, alpha],[0, e^v]]
// with cosh = sqrt(1 + e^{2p}), sinh = e^{p}.
Mat assemble_section(const Model& m, const RVec& phat, const Mat& rho, const Mat& alpha) {
    const int n = m.n();
    RVec sh(n), ch(n);
    for (int j = 0; j < n; ++j) {
        sh[j] = std::exp(phat[j]);
        ch[j] = std::sqrt(1.0 + std::exp(2.0 * phat[j]));
    }
    const double ev = std::exp(m.v());
    const double emv = std::exp(-m.v());
    Mat K(2 * n, 2 * n);
    K.topLeftCorner(n, n) = emv * (rho * ch.cast<Complex>().asDiagonal());
    K.topRightCorner(n, n) =
        rho * (ch.cast<Complex>().asDiagonal() * alpha + ev * sh.cast<Complex>().asDiagonal() * Mat::Identity(n, n));
    K.bottomLeftCorner(n, n) = emv * sh.cast<Complex>().asDiagonal() * Mat::Identity(n, n);
    K.bottomRightCorner(n, n) =
        sh.cast<Complex>().asDiagonal() * alpha + ev * ch.cast<Complex>().asDiagonal() * Mat::Identity(n, n);
    return K;
}

}  // namespace

HatDressing hat_dressing(const Model& m, const SectionPoint& s) {
    const ChartData cd = chart_data(m, s);
    HatDressing hd;
    hd.zeta_hat = zeta_hat_impl(m, cd.phat, cd.zmono);
    hd.theta_hat = theta_hat_impl(m, cd.phat, cd.zmono);
    hd.alpha_hat = alpha_hat_impl(m, cd.phat, cd.zmono, s.z[m.n() - 1]);
    return hd;
}

Mat alpha_of_angles(const Model& m, const ChamberPoint& p, const TorusPoint& t) {
    require_chamber(m.params(), p.phat);
    require_torus(t);
    const int n = m.n();
    const RMat theta = theta_matrix(m.params(), p);
    RVec aprof(n), cprof(n);
    for (int j = 0; j < n; ++j) {
        aprof[j] = std::sqrt(std::exp(-2.0 * m.u() - 2.0 * p.phat[j]) + std::exp(-2.0 * m.v()));
        cprof[j] = std::sqrt(std::exp(-2.0 * p.phat[j]) + 1.0);
    }
    Mat alpha = t.phases.asDiagonal() * (aprof.cast<Complex>().asDiagonal() * theta.transpose().cast<Complex>());
    alpha -= std::exp(m.v()) * cprof.cast<Complex>().asDiagonal() * Mat::Identity(n, n);
    return alpha;
}

Mat section_local(const Model& m, const ChamberPoint& p, const TorusPoint& t) {
    const Mat rho = m.kappa().cast<Complex>() * zeta_matrix(m.params(), p).transpose().cast<Complex>();
    const Mat alpha = alpha_of_angles(m, p, t);
    return assemble_section(m, p.phat, rho, alpha);
}

Mat b_left_of_section(const Model& m, const ChamberPoint& p, const TorusPoint& t) {
    require_chamber(m.params(), p.phat);
    const int n = m.n();
    const Mat rho = m.kappa().cast<Complex>() * zeta_matrix(m.params(), p).transpose().cast<Complex>();
    const Mat alpha = alpha_of_angles(m, p, t);
    RVec sh(n), ch(n);
    for (int j = 0; j < n; ++j) {
        sh[j] = std::exp(p.phat[j]);
        ch[j] = std::sqrt(1.0 + std::exp(2.0 * p.phat[j]));
    }
    const Mat omega = sh.cast<Complex>().asDiagonal() * alpha +
                      std::exp(m.v()) * ch.cast<Complex>().asDiagonal() * Mat::Identity(n, n);
    const Mat chi =
        rho * (sh.cwiseInverse().cast<Complex>().asDiagonal() *
               (std::exp(-m.u()) * ch.cast<Complex>().asDiagonal() * Mat::Identity(n, n) -
                std::exp(m.u() + m.v()) * omega.adjoint()));
    Mat b = Mat::Zero(2 * n, 2 * n);
    b.topLeftCorner(n, n) = std::exp(m.u()) * m.nu();
    b.topRightCorner(n, n) = chi;
    b.bottomRightCorner(n, n) = std::exp(-m.u()) * Mat::Identity(n, n);
    return b;
}

Mat section_global(const Model& m, const SectionPoint& s) {
    const ChartData cd = chart_data(m, s);
    const Mat zh = zeta_hat_impl(m, cd.phat, cd.zmono);
    const Mat rho = m.kappa().cast<Complex>() * zh.adjoint();
    const Mat alpha = alpha_hat_impl(m, cd.phat, cd.zmono, s.z[m.n() - 1]);
    return assemble_section(m, cd.phat, rho, alpha);
}

Mat apply_gauge(const GaugePair& g, const Mat& K) {
    return g.eta_left * K * g.eta_right.inverse();
}

GaugePair gauge_of_angles(const Model& m, const TorusPoint& t) {
    require_torus(t);
    const int n = m.n();
    const CVec sp = sigma_plus(t);
    Complex det_sp(1.0, 0.0);
    for (int j = 0; j < n; ++j) det_sp *= sp[j];
    const Complex c = principal_root(Complex(1.0, 0.0) / (det_sp * det_sp), 2 * n);

    GaugePair g;
    g.eta_left = Mat::Zero(2 * n, 2 * n);
    g.eta_left.topLeftCorner(n, n) =
        m.kappa().cast<Complex>() * sp.asDiagonal() * m.kappa().transpose().cast<Complex>();
    g.eta_left.bottomRightCorner(n, n) = Mat(sp.asDiagonal());
    g.eta_left *= c;
    g.eta_right = Mat::Zero(2 * n, 2 * n);
    g.eta_right.topLeftCorner(n, n) = Mat(sp.asDiagonal());
    g.eta_right.bottomRightCorner(n, n) = Mat(sp.asDiagonal());
    g.eta_right *= c;
    return g;
}

GaugePair random_gauge(const Model& m, std::uint64_t seed) {
    const int n = m.n();
    Sampler sampler(seed);

    // Left upper block: unitary commuting with the Gram matrix of nu, i.e.
    // block-diagonal in the eigenbasis provided by kappa, respecting the
    // position of the simple eigenvalue.
    const int s = m.simple_eigen_index();
    Mat mix = Mat::Zero(n, n);
    mix(s, s) = sampler.unit_complex();
    std::vector<int> rest;
    rest.reserve(n - 1);
    for (int i = 0; i < n; ++i)
        if (i != s) rest.push_back(i);
    const Mat sub = sampler.unitary(n - 1);
    for (int i = 0; i < n - 1; ++i)
        for (int j = 0; j < n - 1; ++j) mix(rest[i], rest[j]) = sub(i, j);
    const Mat eta_l1 = m.kappa().cast<Complex>() * mix * m.kappa().transpose().cast<Complex>();
    const Mat eta_l2 = sampler.unitary(n);

    GaugePair g;
    g.eta_left = Mat::Zero(2 * n, 2 * n);
    g.eta_left.topLeftCorner(n, n) = eta_l1;
    g.eta_left.bottomRightCorner(n, n) = eta_l2;
    g.eta_left *= principal_root(Complex(1.0, 0.0) / g.eta_left.determinant(), 2 * n);

    g.eta_right = Mat::Zero(2 * n, 2 * n);
    g.eta_right.topLeftCorner(n, n) = sampler.unitary(n);
    g.eta_right.bottomRightCorner(n, n) = sampler.unitary(n);
    g.eta_right *= principal_root(Complex(1.0, 0.0) / g.eta_right.determinant(), 2 * n);
    return g;
}

namespace {

Mat block_diag_part(const Mat& b) {
    const int n = static_cast<int>(b.rows()) / 2;
    Mat out = Mat::Zero(2 * n, 2 * n);
    out.topLeftCorner(n, n) = b.topLeftCorner(n, n);
    out.bottomRightCorner(n, n) = b.bottomRightCorner(n, n);
    return out;
}

}  // namespace

std::pair<double, double> momentum_residuals(const Model& m, const Mat& K, double tol) {
    const IwasawaFactors left = iwasawa_left(K, tol);
    const IwasawaFactors right = iwasawa_right(K, tol);
    const double rl = max_abs(Mat(block_diag_part(left.triangular) - m.mu_left()));
    const double rr = max_abs(Mat(block_diag_part(right.triangular) - m.mu_right()));
    return {rl, rr};
}

namespace {

struct PhaseTable {
    CVec value;                 // e^{i q_j} where determined
    std::vector<bool> known;
    Mat pair_phase;             // e^{i(q_j + q_k)} where determined
    std::vector<std::vector<bool>> pair_known;
};

// Phase data measured from N: diagonal entries carry individual angle
// phases weighted by theta_jj, the symmetric products carry angle sums
// weighted by theta_jk theta_kj.
PhaseTable measure_phases(const Mat& N, const RMat& theta, double floor_q) {
    const int n = static_cast<int>(N.rows());
    PhaseTable t;
    t.value = CVec::Ones(n);
    t.known.assign(n, false);
    t.pair_phase = Mat::Ones(n, n);
    t.pair_known.assign(n, std::vector<bool>(n, false));
    for (int j = 0; j < n; ++j) {
        if (theta(j, j) > floor_q) {
            t.value[j] = unit_phase(N(j, j));
            t.known[j] = true;
        }
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            if (std::min(std::abs(theta(j, k)), std::abs(theta(k, j))) > floor_q) {
                t.pair_phase(j, k) = unit_phase(-N(j, k) * N(k, j));
                t.pair_known[j][k] = true;
            }
        }
    }
    // Propagate: an angle adjacent (through a measured pair) to a known one
    // becomes known.
    for (int sweep = 0; sweep < n; ++sweep) {
        bool changed = false;
        for (int j = 0; j < n; ++j) {
            if (t.known[j]) continue;
            for (int k = 0; k < n; ++k) {
                if (k == j || !t.known[k] || !t.pair_known[j][k]) continue;
                t.value[j] = t.pair_phase(j, k) * std::conj(t.value[k]);
                t.known[j] = true;
                changed = true;
                break;
            }
        }
        if (!changed) break;
    }
    return t;
}

// Product of e^{i q_k} over k in [from, n): individual phases where known,
// measured pair products bridging adjacent unknown pairs otherwise.
bool tail_product(const PhaseTable& t, int from, int n, Complex& out) {
    Complex acc(1.0, 0.0);
    int k = from;
    while (k < n) {
        if (t.known[k]) {
            acc *= t.value[k];
            ++k;
        } else if (k + 1 < n && !t.known[k + 1] && t.pair_known[k][k + 1]) {
            acc *= t.pair_phase(k, k + 1);
            k += 2;
        } else {
            return false;
        }
    }
    out = acc;
    return true;
}

bool head_product(const PhaseTable& t, int upto, Complex& out) {
    Complex acc(1.0, 0.0);
    int k = 0;
    while (k < upto) {
        if (t.known[k]) {
            acc *= t.value[k];
            ++k;
        } else if (k + 1 < upto && !t.known[k + 1] && t.pair_known[k][k + 1]) {
            acc *= t.pair_phase(k, k + 1);
            k += 2;
        } else {
            return false;
        }
    }
    out = acc;
    return true;
}

}  // namespace

SectionPoint z_from_constraint(const Model& m, const Mat& K, double tol) {
    require_square(K, "z_from_constraint");
    require_finite(K, "z_from_constraint");
    const int n = m.n();
    if (K.rows() != 2 * n) throw InvalidArgument("z_from_constraint: wrong size");

    // Triangular data of the right splitting; the coupling block sits in
    // the upper-right corner of the inverse triangular factor.
    const IwasawaFactors right = iwasawa_right(K);
    const Mat b_r_inv =
        right.triangular.triangularView<Eigen::Upper>().solve(Mat::Identity(2 * n, 2 * n));
    return z_from_split(m, right.unitary_like, b_r_inv.topRightCorner(n, n), tol);
}

SectionPoint z_from_split(const Model& m, const Mat& unitary_like, const Mat& alpha_raw,
                          double tol) {
    const int n = m.n();

    // Hyperbolic radii from the pseudo-unitary factor.
    const CartanFactors cf = cartan(unitary_like);
    RVec phat(n);
    for (int i = 0; i < n; ++i) {
        const double sh = std::sinh(cf.q[i]);
        if (!(sh > 0.0)) throw NotOnConstraint("coordinate recovery: vanishing hyperbolic radius");
        phat[i] = std::log(sh);
    }

    // Remove the residual block-unitary freedom: conjugation by the second
    // Cartan factor leaves only an unknown diagonal phase.
    const Mat cblk = cf.hplus.topLeftCorner(n, n);
    const Mat dblk = cf.hplus.bottomRightCorner(n, n);
    const Mat alpha_fixed = cblk * alpha_raw * dblk.adjoint();

    auto [sprof, cprof] = alpha_profiles(m, phat);
    Mat M = sprof.cwiseInverse().cast<Complex>().asDiagonal() *
            (alpha_fixed + std::exp(m.v()) * cprof.cast<Complex>().asDiagonal() * Mat::Identity(n, n));

    // Moduli gate: M M^H must be the diagonal e^{-2p}.
    RVec e2p(n);
    for (int i = 0; i < n; ++i) e2p[i] = std::exp(-2.0 * phat[i]);
    const Mat gram = M * M.adjoint();
    const double gate = max_abs(Mat(gram - e2p.cast<Complex>().asDiagonal() * Mat::Identity(n, n))) /
                        std::max(1.0, e2p.maxCoeff());
    if (gate > std::max(tol, kConstraintTol))
        throw NotOnConstraint("coordinate recovery: moduli gate residual " + std::to_string(gate));

    const Mat N = RVec(e2p.array().rsqrt()).cast<Complex>().asDiagonal() * M;  // e^{p} M

    // Boundary moduli with exact snapping of saturated gaps.
    RVec moduli(n - 1);
    for (int j = 0; j + 1 < n; ++j) {
        const double excess = phat[j] - phat[j + 1] - 0.5 * m.x();
        moduli[j] = excess < 1e-12 ? 0.0 : std::sqrt(excess);
    }

    // Phase recovery needs the real matrix theta at the recovered point.
    RMat theta;
    {
        const RMat core = theta_core(m.params(), phat);
        theta.resize(n, n);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double entry = core(j, k);
                if (j < n - 1 && k != j + 1) entry *= moduli[j];
                if (k > 0 && j != k - 1) entry *= moduli[k - 1];
                theta(j, k) = entry;
            }
    }

    const PhaseTable phases = measure_phases(N, theta, 1e-8);
    const Complex full = unit_phase(N.determinant());

    CVec z(n);
    for (int j = 0; j + 1 < n; ++j) {
        if (moduli[j] == 0.0) {
            z[j] = 0.0;
            continue;
        }
        Complex sigma;
        if (tail_product(phases, j + 1, n, sigma)) {
            z[j] = moduli[j] * sigma;
        } else {
            Complex head;
            if (head_product(phases, j + 1, head)) {
                z[j] = moduli[j] * full * std::conj(head);
            } else if (moduli[j] <= tol) {
                z[j] = moduli[j];
            } else {
                throw PhaseRecoveryAmbiguous(
                    "coordinate recovery: cannot determine the phase product for component " +
                    std::to_string(j + 1));
            }
        }
    }
    z[n - 1] = std::exp(-phat[0]) * full;
    return SectionPoint{std::move(z)};
}

}  // namespace sunn
