#include "verify.hpp"

#include "decomp.hpp"
#include "dynamics.hpp"
#include "phasespace.hpp"
#include "sampling.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <numeric>

namespace sunn {

bool SuiteReport::all_passed() const {
    return std::all_of(results.begin(), results.end(),
                       [](const CheckResult& r) { return r.passed; });
}

double SuiteReport::worst_residual(const std::string& name) const {
    double worst = 0.0;
    for (const auto& r : results)
        if (r.name == name) worst = std::max(worst, r.residual);
    return worst;
}

namespace {

using CheckFn =
    std::function<double(const Model&, Sampler&, int, std::map<std::string, std::string>&)>;

struct CheckDef {
    std::string name;
    std::string identity;
    double tolerance;
    CheckFn fn;
};

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

double rel(double value, double scale) { return value / std::max(1.0, scale); }

// Every fifth sample sits on the boundary stratum (one z component zero).
SectionPoint mixed_sample(const Model& m, Sampler& smp, int i) {
    if (i % 5 == 4) return smp.boundary_section_point(m, i % (m.n() - 1));
    return smp.section_point(m);
}

double check_structure_orthogonality(const Model& m, Sampler& smp, int samples,
                                     std::map<std::string, std::string>&) {
    const int n = m.n();
    double worst = 0.0;
    auto probe = [&](const RMat& mat) {
        worst = std::max(worst, (mat * mat.transpose() - RMat::Identity(n, n)).cwiseAbs().maxCoeff());
        worst = std::max(worst, std::abs(mat.determinant() - 1.0));
    };
    probe(m.kappa());
    for (int i = 0; i < samples; ++i) {
        const ChamberPoint p = phat_of_z(m, mixed_sample(m, smp, i));
        probe(theta_matrix(m.params(), p));
        probe(zeta_matrix(m.params(), p));
    }
    return worst;
}

double check_gram_eigenvalues(const Model& m, Sampler&, int,
                              std::map<std::string, std::string>& meta) {
    const int n = m.n();
    Eigen::SelfAdjointEigenSolver<Mat> es(m.nu_gram());
    const RVec ev = es.eigenvalues();
    const double scale = ev[n - 1];
    // two admissible clusterings: the simple eigenvalue at either end
    const double spread_low = (ev.tail(n - 1).maxCoeff() - ev.tail(n - 1).minCoeff());
    const double spread_high = (ev.head(n - 1).maxCoeff() - ev.head(n - 1).minCoeff());
    const double split = std::min(spread_low, spread_high) / scale;
    const double distinct = std::abs(m.simple_eigenvalue() - m.repeated_eigenvalue()) / scale;
    meta["simple"] = std::to_string(m.simple_eigenvalue());
    meta["repeated"] = std::to_string(m.repeated_eigenvalue());
    if (distinct < 1e-6) return 1.0;  // the two values must actually differ
    return split;
}

double check_kappa_diagonalization(const Model& m, Sampler&, int,
                                   std::map<std::string, std::string>&) {
    const int n = m.n();
    Mat d = m.kappa().transpose().cast<Complex>() * m.nu_gram() * m.kappa().cast<Complex>();
    double scale = max_abs(d);
    for (int i = 0; i < n; ++i) d(i, i) = 0.0;
    return max_abs(d) / std::max(1.0, scale);
}

double check_stabilizer(const Model& m, Sampler& smp, int samples,
                        std::map<std::string, std::string>&) {
    const int n = m.n();
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const GaugePair g = random_gauge(m, smp.next_seed());
        const Mat eta1 = g.eta_left.topLeftCorner(n, n);
        worst = std::max(worst, rel(max_abs(Mat(eta1 * m.nu_gram() * eta1.inverse() - m.nu_gram())),
                                    max_abs(m.nu_gram())));
        worst = std::max(worst, std::abs(g.eta_left.determinant() - Complex(1, 0)));
        worst = std::max(worst, std::abs(g.eta_right.determinant() - Complex(1, 0)));
    }
    return worst;
}

double check_central_triviality(const Model& m, Sampler& smp, int,
                                std::map<std::string, std::string>&) {
    const int n = m.n();
    const Mat K = section_global(m, smp.section_point(m));
    double worst = 0.0;
    for (int k = 0; k < 2 * n; ++k) {
        const Complex w = std::polar(1.0, std::numbers::pi * k / n);  // w^{2n} = 1
        GaugePair g;
        g.eta_left = w * Mat::Identity(2 * n, 2 * n);
        g.eta_right = g.eta_left;
        worst = std::max(worst, rel(max_abs(Mat(apply_gauge(g, K) - K)), max_abs(K)));
    }
    return worst;
}

double check_momentum_local(const Model& m, Sampler& smp, int samples,
                            std::map<std::string, std::string>&) {
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const SectionPoint z = mixed_sample(m, smp, i);
        const ChamberPoint p = phat_of_z(m, z);
        const TorusPoint t = smp.torus_point(m.n());
        auto [l, r] = momentum_residuals(m, section_local(m, p, t));
        worst = std::max({worst, l, r});
    }
    return worst;
}

double check_momentum_global(const Model& m, Sampler& smp, int samples,
                             std::map<std::string, std::string>&) {
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        auto [l, r] = momentum_residuals(m, section_global(m, mixed_sample(m, smp, i)));
        worst = std::max({worst, l, r});
    }
    return worst;
}

double check_polar_profile(const Model& m, Sampler& smp, int samples,
                           std::map<std::string, std::string>&) {
    const int n = m.n();
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const SectionPoint z = mixed_sample(m, smp, i);
        const ChamberPoint p = phat_of_z(m, z);
        const TorusPoint t = smp.torus_point(n);
        const Mat K = section_local(m, p, t);
        const Mat omega = K.bottomRightCorner(n, n);
        RVec profile(n);
        for (int k = 0; k < n; ++k)
            profile[k] = std::exp(-2.0 * m.u()) + std::exp(-2.0 * m.v() + 2.0 * p.phat[k]);
        const Mat target = profile.cast<Complex>().asDiagonal() * Mat::Identity(n, n);
        worst = std::max(worst, rel(max_abs(Mat(omega * omega.adjoint() - target)),
                                    profile.maxCoeff()));
        const PolarFactors pf = polar(omega);
        worst = std::max(worst, rel(max_abs(Mat(pf.hermitian * pf.hermitian - target)),
                                    profile.maxCoeff()));
    }
    return worst;
}

double check_spectral_constraint(const Model& m, Sampler& smp, int samples,
                                 std::map<std::string, std::string>&) {
    const int n = m.n();
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const ChamberPoint p = phat_of_z(m, mixed_sample(m, smp, i));
        const TorusPoint t = smp.torus_point(n);
        const RMat theta = theta_matrix(m.params(), p);
        const Mat T = t.phases.asDiagonal() * theta.transpose().cast<Complex>();
        RVec sh(n);
        for (int k = 0; k < n; ++k) sh[k] = std::exp(p.phat[k]);
        const Mat rho =
            m.kappa().cast<Complex>() * zeta_matrix(m.params(), p).transpose().cast<Complex>();
        const Mat lhs = rho * sh.cwiseInverse().cast<Complex>().asDiagonal() * T.adjoint() *
                        sh.cwiseAbs2().cast<Complex>().asDiagonal() * T *
                        sh.cwiseInverse().cast<Complex>().asDiagonal() * rho.adjoint();
        worst = std::max(worst, rel(max_abs(Mat(lhs - m.nu_gram())), max_abs(m.nu_gram())));
    }
    return worst;
}

double check_gauge_identity(const Model& m, Sampler& smp, int samples,
                            std::map<std::string, std::string>&) {
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const SectionPoint z0 = mixed_sample(m, smp, i);
        const ChamberPoint p = phat_of_z(m, z0);
        const TorusPoint t = smp.torus_point(m.n());
        const SectionPoint z = z_of_angles(m, p, t);
        const Mat khat = section_global(m, z);
        const Mat k = section_local(m, p, t);
        const GaugePair g = gauge_of_angles(m, t);
        worst = std::max(worst, rel(max_abs(Mat(khat - apply_gauge(g, k))), max_abs(khat)));
    }
    return worst;
}

double check_delta_identity(const Model& m, Sampler& smp, int samples,
                            std::map<std::string, std::string>&) {
    const int n = m.n();
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const ChamberPoint p = phat_of_z(m, mixed_sample(m, smp, i));
        const TorusPoint t = smp.torus_point(n);
        const SectionPoint z = z_of_angles(m, p, t);
        const CVec delta = delta_of_z(m, z);
        const CVec sp = sigma_plus(t);
        const CVec sm = sigma_minus(t);
        for (int k = 0; k < n; ++k) {
            const Complex expected = std::exp(-p.phat[k]) * t.phases[k] * sp[k] * sm[k];
            worst = std::max(worst,
                             std::abs(delta[k] - expected) / std::max(1.0, std::abs(expected)));
        }
    }
    return worst;
}

double roundtrip_residual(const Model& m, const SectionPoint& z, const Mat& K) {
    const SectionPoint back = z_from_constraint(m, K);
    return max_abs(CVec(back.z - z.z));
}

double check_chart_roundtrip(const Model& m, Sampler& smp, int samples,
                             std::map<std::string, std::string>&) {
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const SectionPoint z = mixed_sample(m, smp, i);
        worst = std::max(worst, roundtrip_residual(m, z, section_global(m, z)));
    }
    return worst;
}

double check_chart_roundtrip_gauged(const Model& m, Sampler& smp, int samples,
                                    std::map<std::string, std::string>&) {
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const SectionPoint z = mixed_sample(m, smp, i);
        const GaugePair g = random_gauge(m, smp.next_seed());
        worst = std::max(worst, roundtrip_residual(m, z, apply_gauge(g, section_global(m, z))));
    }
    return worst;
}

double check_chart_continuity(const Model& m, Sampler& smp, int samples,
                              std::map<std::string, std::string>&) {
    const double delta = 1e-8;
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const int which = i % (m.n() - 1);
        SectionPoint z = smp.boundary_section_point(m, which);
        const Mat k0 = section_global(m, z);
        z.z[which] = delta * smp.unit_complex();
        const Mat k1 = section_global(m, z);
        worst = std::max(worst, max_abs(Mat(k1 - k0)) / std::max(1.0, max_abs(k0)));
    }
    return worst;
}

double check_symplectic_pullback(const Model& m, Sampler& smp, int samples,
                                 std::map<std::string, std::string>&) {
    const int n = m.n();
    const int d = 2 * n;
    const double eps = 1e-5;
    double worst = 0.0;
    const int count = std::max(1, samples / 5);
    for (int rep = 0; rep < count; ++rep) {
        const SectionPoint zs = smp.section_point(m);
        const RVec ph = phat_of_z(m, zs).phat;
        RVec qh(n);
        for (int k = 0; k < n; ++k) qh[k] = 2.0 * std::numbers::pi * smp.uniform();
        auto zfun = [&](const RVec& pv, const RVec& qv) {
            return z_of_angles(m, ChamberPoint{pv}, torus_point_from_angles(qv)).z;
        };
        RMat jac(d, d);
        for (int c = 0; c < d; ++c) {
            RVec pp = ph, qq = qh;
            (c < n ? qq[c] : pp[c - n]) += eps;
            const CVec zp = zfun(pp, qq);
            pp = ph;
            qq = qh;
            (c < n ? qq[c] : pp[c - n]) -= eps;
            const CVec zm = zfun(pp, qq);
            for (int r = 0; r < n; ++r) {
                jac(2 * r, c) = (zp[r].real() - zm[r].real()) / (2 * eps);
                jac(2 * r + 1, c) = (zp[r].imag() - zm[r].imag()) / (2 * eps);
            }
        }
        const CVec zc = zfun(ph, qh);
        RMat omega_c = RMat::Zero(d, d);
        for (int r = 0; r < n; ++r) {
            const double coef = (r == n - 1) ? 1.0 / std::norm(zc[n - 1]) : 2.0;
            omega_c(2 * r, 2 * r + 1) = coef;
            omega_c(2 * r + 1, 2 * r) = -coef;
        }
        RMat omega_std = RMat::Zero(d, d);
        for (int k = 0; k < n; ++k) {
            omega_std(k, n + k) = 1.0;
            omega_std(n + k, k) = -1.0;
        }
        worst = std::max(worst,
                         (jac.transpose() * omega_c * jac - omega_std).cwiseAbs().maxCoeff());
    }
    return worst;
}

double check_flow_invariance(const Model& m, Sampler& smp, int samples,
                             std::map<std::string, std::string>&) {
    const int n = m.n();
    const Mat J = signature_matrix(n);
    double worst = 0.0;
    const int count = std::max(1, samples / 10);
    for (int rep = 0; rep < count; ++rep) {
        // keep the generator scale moderate so the matrix exponential does
        // not dominate the residual; the identity itself is scale-free
        Mat K0;
        Mat W0;
        for (int attempt = 0; attempt < 32; ++attempt) {
            K0 = section_global(m, smp.section_point(m));
            W0 = K0 * J * K0.adjoint() * J;
            if (max_abs(W0) < 100.0) break;
        }
        for (int j : {1, 2, -1}) {
            const Mat K1 = free_flow(K0, j, 0.7);
            const Mat W1 = K1 * J * K1.adjoint() * J;
            worst = std::max(worst, max_abs(Mat(W1 - W0)) / std::max(1.0, max_abs(W0)));
            worst = std::max(worst, std::abs(K1.determinant() - Complex(1, 0)));
        }
    }
    return worst;
}

double check_lax_cross(const Model& m, Sampler& smp, int samples,
                       std::map<std::string, std::string>&) {
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const ChamberPoint p = phat_of_z(m, smp.section_point(m));
        const TorusPoint t = smp.torus_point(m.n());
        const Mat alpha = alpha_of_angles(m, p, t);
        const Mat lexp = lax_matrix_explicit(m, p, t);
        const double scale = max_abs(lexp);
        worst = std::max(worst, rel(max_abs(Mat(lexp - alpha * alpha.adjoint())), scale));
        const SectionPoint z = z_of_angles(m, p, t);
        const ConservedSpectrum a = conserved_spectrum(lax_matrix(m, z));
        const ConservedSpectrum b = conserved_spectrum(lexp);
        worst = std::max(worst,
                         rel((a.eigenvalues - b.eigenvalues).cwiseAbs().maxCoeff(), scale));
    }
    return worst;
}

double check_hamiltonian_match(const Model& m, Sampler& smp, int samples,
                               std::map<std::string, std::string>& meta) {
    // The closed-form reduced Hamiltonian and the first free Hamiltonian on
    // the section may differ only by a point-independent constant.
    std::vector<double> diffs;
    double scale = 1.0;
    for (int i = 0; i < samples; ++i) {
        const ChamberPoint p = phat_of_z(m, mixed_sample(m, smp, i));
        const TorusPoint t = smp.torus_point(m.n());
        const double a = free_hamiltonian(section_local(m, p, t), 1);
        const double b = reduced_hamiltonian(m, p, t);
        diffs.push_back(a - b);
        scale = std::max(scale, std::abs(a));
    }
    const double offset = std::accumulate(diffs.begin(), diffs.end(), 0.0) / diffs.size();
    double worst = 0.0;
    for (double d : diffs) worst = std::max(worst, std::abs(d - offset) / scale);
    meta["fitted_offset"] = std::to_string(offset);
    return worst;
}

double check_expressibility(const Model& m, Sampler& smp, int samples,
                            std::map<std::string, std::string>& meta) {
    const int n = m.n();
    std::vector<SectionPoint> pts;
    const int count = std::max(2 * (n + 1) + 4, samples / 2);
    pts.reserve(count);
    for (int i = 0; i < count; ++i) pts.push_back(smp.section_point(m));
    double worst = 0.0;
    double scale = 1.0;
    for (const auto& z : pts) scale = std::max(scale, std::abs(free_hamiltonian(section_global(m, z), 2)));
    for (int j = 1; j <= std::min(n, 3); ++j) {
        const ExpressibilityFit fit = expressibility_fit(m, pts, j);
        worst = std::max(worst, fit.residual / scale);
        if (j == 1) meta["h1_weight"] = std::to_string(fit.coefficients[1]);
    }
    return worst;
}

double check_index_parity(const Model& m, Sampler& smp, int samples,
                          std::map<std::string, std::string>&) {
    const Mat J = signature_matrix(m.n());
    double worst = 0.0;
    const int count = std::max(1, samples / 5);
    for (int i = 0; i < count; ++i) {
        // moderate points keep the inverse powers observable at 1e-10
        Mat K;
        for (int attempt = 0; attempt < 32; ++attempt) {
            K = section_global(m, mixed_sample(m, smp, i));
            if (max_abs(Mat(K * J * K.adjoint() * J)) < 100.0) break;
        }
        for (int j : {1, 2, 3}) {
            const double plus = free_hamiltonian(K, j);
            const double minus = free_hamiltonian(K, -j);
            worst = std::max(worst, std::abs(plus + minus) / std::max(1.0, std::abs(plus)));
        }
    }
    return worst;
}

double check_power_blocks(const Model& m, Sampler& smp, int samples,
                          std::map<std::string, std::string>&) {
    const int n = m.n();
    double worst = 0.0;
    const int count = std::max(1, samples / 10);
    for (int rep = 0; rep < count; ++rep) {
        Mat alpha(n, n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) alpha(i, k) = smp.complex_normal();
        Mat gen(2 * n, 2 * n);
        const double v = m.v();
        gen.topLeftCorner(n, n) = std::exp(-2 * v) * Mat::Identity(n, n);
        gen.topRightCorner(n, n) = -std::exp(-v) * alpha;
        gen.bottomLeftCorner(n, n) = std::exp(-v) * alpha.adjoint();
        gen.bottomRightCorner(n, n) =
            std::exp(2 * v) * Mat::Identity(n, n) - alpha.adjoint() * alpha;
        for (int j : {1, 2, 3, 4, -1, -2}) {
            Mat brute = Mat::Identity(2 * n, 2 * n);
            const Mat base = j > 0 ? gen : Mat(gen.inverse());
            for (int k = 0; k < std::abs(j); ++k) brute = brute * base;
            const auto [pc, assembled] = power_blocks(alpha, v, j);
            worst = std::max(worst, rel(max_abs(Mat(assembled - brute)), max_abs(brute)));
        }
    }
    return worst;
}

double check_involutivity(const Model& m, Sampler& smp, int samples,
                          std::map<std::string, std::string>&) {
    const int n = m.n();
    const double step = 1e-4;
    double worst = 0.0;
    const int count = std::max(1, samples / 10);
    for (int rep = 0; rep < count; ++rep) {
        const RVec ph = phat_of_z(m, smp.section_point(m)).phat;
        RVec qh(n);
        for (int k = 0; k < n; ++k) qh[k] = 2.0 * std::numbers::pi * smp.uniform();
        std::vector<ChartFn> fns;
        fns.push_back(reduced_hamiltonian_fn(m));
        for (int k = 1; k <= n; ++k) fns.push_back(conserved_trace_fn(m, k));
        std::vector<std::pair<RVec, RVec>> grads;
        for (const auto& f : fns) grads.push_back(gradient_fd(f, ph, qh, 1e-6));
        auto gnorm = [&](int i) {
            return std::hypot(grads[i].first.norm(), grads[i].second.norm());
        };
        for (std::size_t a = 0; a < fns.size(); ++a)
            for (std::size_t b = a + 1; b < fns.size(); ++b) {
                const double pb = poisson_fd(fns[a], fns[b], ph, qh, step);
                worst = std::max(worst, std::abs(pb) / std::max(1.0, gnorm(a) * gnorm(b)));
            }
    }
    return worst;
}

double check_independence(const Model& m, Sampler& smp, int samples,
                          std::map<std::string, std::string>& meta) {
    const int n = m.n();
    double min_sigma = std::numeric_limits<double>::infinity();
    const int count = std::max(1, samples / 10);
    for (int rep = 0; rep < count; ++rep) {
        const RVec ph = phat_of_z(m, smp.section_point(m)).phat;
        RVec qh(n);
        for (int k = 0; k < n; ++k) qh[k] = 2.0 * std::numbers::pi * smp.uniform();
        RMat grad(n, 2 * n);
        for (int k = 1; k <= n; ++k) {
            auto [gp, gq] = gradient_fd(conserved_trace_fn(m, k), ph, qh, 1e-6);
            grad.row(k - 1).head(n) = gp.transpose();
            grad.row(k - 1).tail(n) = gq.transpose();
        }
        Eigen::JacobiSVD<RMat> svd(grad);
        min_sigma = std::min(min_sigma, svd.singularValues()(n - 1));
    }
    meta["sigma_min"] = std::to_string(min_sigma);
    return 1e-6 / min_sigma;  // passes (<= 1) exactly when sigma_min > 1e-6
}

const std::vector<CheckDef>& registry() {
    static const std::vector<CheckDef> defs = {
        {"structure-orthogonality",
         "theta, zeta, kappa are special orthogonal on the closed chamber", 1e-10,
         check_structure_orthogonality},
        {"gram-two-eigenvalues",
         "the Gram matrix of the deformation factor has exactly two distinct eigenvalues, one simple",
         1e-10, check_gram_eigenvalues},
        {"kappa-diagonalization", "conjugation by kappa diagonalizes the deformation Gram matrix",
         1e-10, check_kappa_diagonalization},
        {"stabilizer-conjugation",
         "sampled left gauge blocks commute with the deformation Gram matrix and have unit determinant",
         1e-10, check_stabilizer},
        {"central-triviality", "scalar pairs with w^(2n) = 1 act trivially on constraint points",
         1e-12, check_central_triviality},
        {"momentum-local",
         "both triangular factors of local-section elements carry the fixed momentum blocks", 1e-9,
         check_momentum_local},
        {"momentum-global",
         "global-chart elements lie on the constraint surface, including the boundary strata",
         1e-9, check_momentum_global},
        {"polar-profile",
         "the squared polar part of the lower-right block matches its hyperbolic profile", 1e-9,
         check_polar_profile},
        {"spectral-constraint",
         "the dressed double ratio of hyperbolic radii reproduces the deformation Gram matrix",
         1e-9, check_spectral_constraint},
        {"gauge-identity",
         "the global chart is the explicit gauge transform of the local section on angle inputs",
         1e-9, check_gauge_identity},
        {"delta-identity",
         "the diagonal scale matrix factors through the angle phases and suffix products", 1e-12,
         check_delta_identity},
        {"chart-roundtrip", "coordinate recovery inverts the global chart", 1e-8,
         check_chart_roundtrip},
        {"chart-roundtrip-gauged",
         "coordinate recovery is invariant along sampled gauge orbits", 1e-8,
         check_chart_roundtrip_gauged},
        {"chart-continuity", "the global chart is continuous across the boundary strata", 1e-6,
         check_chart_continuity},
        {"symplectic-pullback",
         "the angle-to-chart Jacobian pulls the chart 2-form back to the canonical one", 1e-6,
         check_symplectic_pullback},
        {"flow-invariance",
         "the signature conjugant and the determinant are constant along free flows", 1e-10,
         check_flow_invariance},
        {"lax-cross-evaluation",
         "the closed-form Lax matrix equals the reversed Gram product and is isospectral to the chart Gram",
         1e-10, check_lax_cross},
        {"hamiltonian-match",
         "the reduced Hamiltonian differs from the on-section free Hamiltonian by a constant",
         1e-10, check_hamiltonian_match},
        {"expressibility-span",
         "free Hamiltonians on the constraint surface are affine in the conserved traces", 1e-8,
         check_expressibility},
        {"index-parity", "free Hamiltonians of opposite index negate on the constraint surface",
         1e-10, check_index_parity},
        {"power-block-identity",
         "the coefficient recursion reproduces brute-force powers of the momentum-side generator",
         1e-10, check_power_blocks},
        {"involutivity",
         "finite-difference brackets of the conserved traces and the reduced Hamiltonian vanish",
         1e-6, check_involutivity},
        {"independence",
         "the conserved-trace gradients have full rank (reported as 1e-6 over the smallest singular value)",
         1.0, check_independence},
    };
    return defs;
}

}  // namespace

std::vector<std::string> check_names() {
    std::vector<std::string> names;
    names.reserve(registry().size());
    for (const auto& def : registry()) names.push_back(def.name);
    std::sort(names.begin(), names.end());
    return names;
}

SuiteReport run_suite(const std::vector<ModelParams>& params_list, std::uint64_t seed,
                      int sample_count, const std::map<std::string, double>& tol_overrides,
                      const std::vector<std::string>& subset) {
    if (params_list.empty()) throw InvalidArgument("run_suite: empty parameter list");
    for (const auto& p : params_list) p.validate();
    if (sample_count < 1) throw InvalidArgument("run_suite: sample count must be positive");
    for (const auto& name : subset) {
        const auto& defs = registry();
        if (std::none_of(defs.begin(), defs.end(),
                         [&](const CheckDef& d) { return d.name == name; }))
            throw InvalidArgument("run_suite: unknown check '" + name + "'");
    }

    const auto start = std::chrono::steady_clock::now();
    SuiteReport report;
    report.params = params_list;
    report.seed = seed;
    report.samples = sample_count;

    for (const auto& def : registry()) {
        if (!subset.empty() &&
            std::find(subset.begin(), subset.end(), def.name) == subset.end())
            continue;
        double tol = def.tolerance;
        if (auto it = tol_overrides.find(def.name); it != tol_overrides.end()) tol = it->second;
        for (std::size_t pi = 0; pi < params_list.size(); ++pi) {
            const Model model(params_list[pi]);
            Sampler smp(seed ^ fnv1a(def.name) ^ (0x9e3779b97f4a7c15ull * (pi + 1)));
            CheckResult res;
            res.name = def.name;
            res.identity = def.identity;
            res.tolerance = tol;
            res.metadata["n"] = std::to_string(params_list[pi].n);
            res.metadata["x"] = std::to_string(params_list[pi].x);
            res.metadata["u"] = std::to_string(params_list[pi].u);
            res.metadata["v"] = std::to_string(params_list[pi].v);
            try {
                res.residual = def.fn(model, smp, sample_count, res.metadata);
            } catch (const std::exception& e) {
                // individual check failures are data, not exceptions
                res.residual = std::numeric_limits<double>::max();
                res.metadata["error"] = e.what();
            }
            res.passed = std::isfinite(res.residual) && res.residual <= tol;
            report.results.push_back(std::move(res));
        }
    }

    std::stable_sort(report.results.begin(), report.results.end(),
                     [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
    report.wallclock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace sunn
