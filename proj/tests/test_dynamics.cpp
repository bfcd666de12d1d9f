#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "decomp.hpp"
#include "dynamics.hpp"
#include "sampling.hpp"

#include <numbers>

using namespace sunn;

namespace {

const ModelParams kParams{2, 1.0, 0.3, 0.5};

RVec linspace(double a, double b, int count) {
    RVec t(count);
    for (int i = 0; i < count; ++i) t[i] = a + (b - a) * i / (count - 1);
    return t;
}

SectionPoint moderate_point() {
    CVec z(2);
    z << Complex(0.9, 0.35), Complex(0.8, -0.3);
    return SectionPoint{z};
}

double relative_drift(const Eigen::Ref<const RVec>& column) {
    const double lo = column.minCoeff();
    const double hi = column.maxCoeff();
    return (hi - lo) / std::max(1.0, std::abs(hi));
}

}  // namespace

TEST_CASE("free Hamiltonian of the identity") {
    for (int j : {1, 2, 3, -1, -2})
        CHECK(std::abs(free_hamiltonian(Mat::Identity(4, 4), j) - 2.0 / j) < 1e-14);
    CHECK_THROWS_AS(free_hamiltonian(Mat::Identity(4, 4), 0), InvalidArgument);
}

TEST_CASE("both trace orderings agree") {
    const Model model(kParams);
    Sampler smp(1);
    const Mat J = signature_matrix(2);
    for (int rep = 0; rep < 20; ++rep) {
        const Mat K = section_global(model, smp.section_point(model));
        for (int j : {1, 2, -1}) {
            const Mat a = K * J * K.adjoint() * J;
            const Mat b = K.adjoint() * J * K * J;
            Mat pa = Mat::Identity(4, 4), pb = pa;
            const Mat abase = j > 0 ? a : Mat(a.inverse());
            const Mat bbase = j > 0 ? b : Mat(b.inverse());
            for (int k = 0; k < std::abs(j); ++k) {
                pa = pa * abase;
                pb = pb * bbase;
            }
            const double scale = std::max(1.0, max_abs(pa));
            CHECK(std::abs(pa.trace() - pb.trace()) < 1e-11 * scale);
        }
    }
}

TEST_CASE("index parity on the constraint surface") {
    const Model model(kParams);
    Sampler smp(2);
    for (int rep = 0; rep < 20; ++rep) {
        const Mat K = section_global(model, smp.section_point(model));
        for (int j : {1, 2, 3}) {
            const double plus = free_hamiltonian(K, j);
            const double minus = free_hamiltonian(K, -j);
            CHECK(std::abs(plus + minus) < 1e-10 * std::max(1.0, std::abs(plus)));
        }
    }
}

TEST_CASE("free flow: identity at t = 0, invariants, group property") {
    const Model model(kParams);
    Sampler smp(3);
    const Mat J = signature_matrix(2);
    const Mat K0 = section_global(model, smp.section_point(model));
    CHECK(max_abs(Mat(free_flow(K0, 1, 0.0) - K0)) < 1e-14);

    const Mat W0 = K0 * J * K0.adjoint() * J;
    for (int j : {1, 2, -1}) {
        const Mat K1 = free_flow(K0, j, 0.8);
        const Mat W1 = K1 * J * K1.adjoint() * J;
        CHECK(max_abs(Mat(W1 - W0)) < 1e-10 * std::max(1.0, max_abs(W0)));
        CHECK(std::abs(K1.determinant() - Complex(1, 0)) < 1e-10);
        // group property through the conserved generator
        const Mat Kts = free_flow(K0, j, 1.1);
        const Mat Kcomp = free_flow(free_flow(K0, j, 0.3), j, 0.8);
        CHECK(max_abs(Mat(Kts - Kcomp)) < 1e-10 * std::max(1.0, max_abs(Kts)));
    }
}

TEST_CASE("explicit Lax form is the reversed Gram product") {
    const Model model(kParams);
    Sampler smp(4);
    for (int rep = 0; rep < 100; ++rep) {
        const ChamberPoint p = phat_of_z(model, smp.section_point(model));
        const TorusPoint t = smp.torus_point(2);
        const Mat alpha = alpha_of_angles(model, p, t);
        const Mat lexp = lax_matrix_explicit(model, p, t);
        CHECK(max_abs(Mat(lexp - alpha * alpha.adjoint())) <
              1e-10 * std::max(1.0, max_abs(lexp)));
        // both orderings share traces and spectrum
        const SectionPoint z = z_of_angles(model, p, t);
        const Mat L = lax_matrix(model, z);
        const ConservedSpectrum a = conserved_spectrum(L);
        const ConservedSpectrum b = conserved_spectrum(lexp);
        CHECK((a.h - b.h).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, a.h.cwiseAbs().maxCoeff()));
        CHECK((a.eigenvalues - b.eigenvalues).cwiseAbs().maxCoeff() <
              1e-10 * std::max(1.0, max_abs(lexp)));
    }
}

TEST_CASE("Lax matrix is Hermitian positive semi-definite") {
    const Model model(kParams);
    Sampler smp(5);
    for (int rep = 0; rep < 50; ++rep) {
        const Mat L = lax_matrix(model, smp.section_point(model));
        CHECK(max_abs(Mat(L - L.adjoint())) < 1e-12 * std::max(1.0, max_abs(L)));
        Eigen::SelfAdjointEigenSolver<Mat> es(L);
        CHECK(es.eigenvalues().minCoeff() > -1e-12 * std::max(1.0, max_abs(L)));
    }
}

TEST_CASE("bare Lax matrix of the underlying family") {
    const Model model(kParams);
    // wide separations with zero angles: twice the identity
    RVec ph(2);
    ph << 16.0, -16.0;
    const TorusPoint t0 = torus_point_from_angles(RVec::Zero(2));
    const Mat L0 = ruijsenaars_lax(model, ChamberPoint{ph}, t0);
    CHECK(max_abs(Mat(L0 - 2.0 * Mat::Identity(2, 2))) < 1e-8);

    Sampler smp(6);
    for (int rep = 0; rep < 20; ++rep) {
        const ChamberPoint p = phat_of_z(model, smp.section_point(model));
        const TorusPoint t = smp.torus_point(2);
        const Mat L = ruijsenaars_lax(model, p, t);
        CHECK(max_abs(Mat(L - L.adjoint())) < 1e-14);
        // trace identity against the diagonal of the rotation
        const RMat theta = theta_matrix(kParams, p);
        Complex expected(0, 0);
        for (int j = 0; j < 2; ++j) expected += 2.0 * t.phases[j].real() * theta(j, j);
        CHECK(std::abs(L.trace() - expected) < 1e-13);
    }
}

TEST_CASE("reduced Hamiltonian: frozen-cosine value and symmetries") {
    const Model model(kParams);
    Sampler smp(7);
    for (int rep = 0; rep < 20; ++rep) {
        const ChamberPoint p = phat_of_z(model, smp.section_point(model));
        // q = pi/2 kills the cosine sum
        const TorusPoint tq = torus_point_from_angles(
            RVec::Constant(2, std::numbers::pi / 2));
        double expected = 0.0;
        for (int j = 0; j < 2; ++j)
            expected += std::exp(-2.0 * p.phat[j]);
        expected *= -0.5 * (std::exp(-2 * kParams.u) + std::exp(2 * kParams.v));
        CHECK(std::abs(reduced_hamiltonian(model, p, tq) - expected) <
              1e-12 * std::max(1.0, std::abs(expected)));

        // cosine dependence: negating every angle leaves the value fixed
        RVec qh(2);
        qh << 0.7, -1.2;
        const double a = reduced_hamiltonian(model, p, torus_point_from_angles(qh));
        const double b = reduced_hamiltonian(model, p, torus_point_from_angles(RVec(-qh)));
        CHECK(std::abs(a - b) < 1e-12 * std::max(1.0, std::abs(a)));
    }
}

TEST_CASE("reduced Hamiltonian equals the on-section free Hamiltonian") {
    // the fitted offset over random points vanishes identically here
    const Model model(kParams);
    Sampler smp(8);
    std::vector<double> diffs;
    double scale = 1.0;
    for (int rep = 0; rep < 50; ++rep) {
        const ChamberPoint p = phat_of_z(model, smp.section_point(model));
        const TorusPoint t = smp.torus_point(2);
        const double a = free_hamiltonian(section_local(model, p, t), 1);
        const double b = reduced_hamiltonian(model, p, t);
        diffs.push_back(a - b);
        scale = std::max(scale, std::abs(a));
    }
    double offset = 0.0;
    for (double d : diffs) offset += d;
    offset /= diffs.size();
    for (double d : diffs) CHECK(std::abs(d - offset) < 1e-10 * scale);
    CHECK(std::abs(offset) < 1e-10 * scale);
}

TEST_CASE("analytic chart gradient matches central differences") {
    const Model model(kParams);
    Sampler smp(9);
    for (int rep = 0; rep < 10; ++rep) {
        const ChamberPoint p = phat_of_z(model, smp.section_point(model));
        RVec qh(2);
        for (int k = 0; k < 2; ++k) qh[k] = 2.0 * std::numbers::pi * smp.uniform();
        auto [gp, gq] = reduced_gradient(model, p, torus_point_from_angles(qh));
        auto [fp, fq] = gradient_fd(reduced_hamiltonian_fn(model), p.phat, qh, 1e-6);
        const double scale = std::max({1.0, gp.cwiseAbs().maxCoeff(), gq.cwiseAbs().maxCoeff()});
        CHECK((gp - fp).cwiseAbs().maxCoeff() < 1e-6 * scale);
        CHECK((gq - fq).cwiseAbs().maxCoeff() < 1e-6 * scale);
    }
}

TEST_CASE("conserved spectrum basics and Newton consistency") {
    Mat L = Mat::Zero(2, 2);
    auto cs0 = conserved_spectrum(L);
    CHECK(cs0.h.cwiseAbs().maxCoeff() == 0.0);

    L(0, 0) = 2.0;
    L(1, 1) = 1.0;
    auto cs = conserved_spectrum(L);
    CHECK(std::abs(cs.h[0] - 3.0) < 1e-14);
    CHECK(std::abs(cs.h[1] - 5.0) < 1e-14);
    CHECK(std::abs(cs.eigenvalues[0] - 2.0) < 1e-14);
    CHECK(std::abs(cs.eigenvalues[1] - 1.0) < 1e-14);

    const Model model(kParams);
    Sampler smp(10);
    for (int rep = 0; rep < 20; ++rep) {
        auto spec = conserved_spectrum(lax_matrix(model, smp.section_point(model)));
        for (int k = 1; k <= 2; ++k) {
            double power_sum = 0.0;
            for (int i = 0; i < 2; ++i) power_sum += std::pow(spec.eigenvalues[i], k);
            CHECK(std::abs(spec.h[k - 1] - power_sum) <
                  1e-10 * std::max(1.0, std::abs(power_sum)));
        }
    }
}

TEST_CASE("power blocks: base case and brute-force agreement") {
    Sampler smp(11);
    const int n = 3;
    Mat alpha(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) alpha(i, j) = smp.complex_normal();
    const double v = 0.4;

    const auto [pc1, m1] = power_blocks(alpha, v, 1);
    CHECK(pc1.a.size() == 1);
    CHECK(std::abs(pc1.a[0] - std::exp(-2 * v)) < 1e-15);
    CHECK(std::abs(pc1.b[0] + std::exp(-v)) < 1e-15);
    CHECK(std::abs(pc1.c[0] - std::exp(-v)) < 1e-15);
    CHECK(std::abs(pc1.d[0] - std::exp(2 * v)) < 1e-15);
    CHECK(max_abs(Mat(m1.bottomRightCorner(n, n) -
                      (std::exp(2 * v) * Mat::Identity(n, n) - alpha.adjoint() * alpha))) <
          1e-14);

    const auto [pcm1, mm1] = power_blocks(alpha, v, -1);
    CHECK(max_abs(Mat(mm1.topLeftCorner(n, n) -
                      (std::exp(2 * v) * Mat::Identity(n, n) - alpha * alpha.adjoint()))) <
          1e-14);
    CHECK(max_abs(Mat(mm1.topRightCorner(n, n) - std::exp(-v) * alpha)) < 1e-14);
    CHECK(max_abs(Mat(mm1 - m1.inverse())) < 1e-12 * std::max(1.0, max_abs(mm1)));

    for (int j : {2, 3, 4, 5, -2, -3}) {
        Mat brute = Mat::Identity(2 * n, 2 * n);
        const Mat base = j > 0 ? m1 : Mat(m1.inverse());
        for (int k = 0; k < std::abs(j); ++k) brute = brute * base;
        const auto [pc, assembled] = power_blocks(alpha, v, j);
        CHECK(max_abs(Mat(assembled - brute)) < 1e-10 * std::max(1.0, max_abs(brute)));
    }
}

TEST_CASE("expressibility fit: exact first-order weights and span property") {
    const Model model(kParams);
    Sampler smp(12);
    std::vector<SectionPoint> pts;
    for (int i = 0; i < 24; ++i) pts.push_back(smp.section_point(model));

    const auto fit1 = expressibility_fit(model, pts, 1);
    CHECK(std::abs(fit1.coefficients[1] + 0.5) < 1e-9);
    const double expect_const = 1.0 * (std::exp(2 * kParams.v) + std::exp(-2 * kParams.v));
    CHECK(std::abs(fit1.coefficients[0] - expect_const) < 1e-9);
    CHECK(fit1.residual < 1e-10 * std::max(1.0, expect_const));

    const auto fit2 = expressibility_fit(model, pts, 2);
    CHECK(fit2.residual < 1e-8 * 100.0);

    const auto fitm2 = expressibility_fit(model, pts, -2);
    CHECK((fit2.coefficients + fitm2.coefficients).cwiseAbs().maxCoeff() <
          1e-7 * std::max(1.0, fit2.coefficients.cwiseAbs().maxCoeff()));

    CHECK_THROWS_AS(expressibility_fit(model, std::vector<SectionPoint>(3, pts[0]), 1),
                    InvalidArgument);
}

TEST_CASE("projection engine reproduces the initial point and conserves traces") {
    const Model model(kParams);
    const SectionPoint z0 = moderate_point();
    for (int j : {1, 2}) {
        const Trajectory tr = evolve_projection(model, z0, j, linspace(0.0, 10.0, 101));
        CHECK(max_abs(CVec(tr.points[0].z - z0.z)) < 1e-10);
        for (int k = 0; k < 2; ++k) CHECK(relative_drift(tr.conserved.col(k)) < 1e-8);
        // Lax spectrum drift
        RMat eigs(101, 2);
        for (int i = 0; i <= 100; ++i)
            eigs.row(i) =
                conserved_spectrum(lax_matrix(model, tr.points[i])).eigenvalues.transpose();
        for (int k = 0; k < 2; ++k) CHECK(relative_drift(eigs.col(k)) < 1e-8);
    }
}

TEST_CASE("projection trajectory crosses a boundary stratum without error") {
    const Model model(kParams);
    // reverse-engineered initial condition: flow a stratum point backward
    CVec zb(2);
    zb << Complex(0.0, 0.0), Complex(0.9, 0.2);
    const Mat back = free_flow(section_global(model, SectionPoint{zb}), 1, -0.4);
    const SectionPoint z0 = z_from_constraint(model, back);
    const Trajectory tr = evolve_projection(model, z0, 1, linspace(0.0, 0.8, 81));

    int argmin = 0;
    for (int i = 0; i < 81; ++i)
        if (std::abs(tr.points[i].z[0]) < std::abs(tr.points[argmin].z[0])) argmin = i;
    CHECK(std::abs(tr.points[argmin].z[0]) < 1e-6);
    // transversality: the component re-emerges on the opposite side
    const Complex a = tr.points[argmin - 2].z[0];
    const Complex b = tr.points[argmin + 2].z[0];
    CHECK((std::conj(a) * b).real() < 0.0);
    for (int k = 0; k < 2; ++k) CHECK(relative_drift(tr.conserved.col(k)) < 1e-8);
}

TEST_CASE("darboux engine matches the projection engine at second order") {
    const Model model(kParams);
    Sampler smp(13);
    const ChamberPoint p = phat_of_z(model, moderate_point());
    const TorusPoint t = torus_point_from_angles(RVec::LinSpaced(2, 0.4, 1.1));
    const RVec times = linspace(0.0, 1.0, 11);
    const Trajectory ref = evolve_projection(model, z_of_angles(model, p, t), 1, times);

    double prev_err = 0.0;
    for (int level = 0; level < 3; ++level) {
        const double step = 0.01 / (1 << level);
        const Trajectory td = evolve_darboux(model, p, t, times, step);
        double err = 0.0;
        for (int i = 0; i < times.size(); ++i)
            err = std::max(err, max_abs(CVec(td.points[i].z - ref.points[i].z)));
        if (level > 0) {
            const double order = std::log2(prev_err / err);
            CHECK(order > 1.8);
            CHECK(order < 2.2);
        }
        prev_err = err;
    }
}

TEST_CASE("darboux energy error is bounded, non-secular, second order") {
    const Model model(kParams);
    const ChamberPoint p = phat_of_z(model, moderate_point());
    const TorusPoint t = torus_point_from_angles(RVec::LinSpaced(2, 0.4, 1.1));
    double drifts[2];
    int idx = 0;
    for (double step : {0.004, 0.002}) {
        const Trajectory tr = evolve_darboux(model, p, t, linspace(0.0, 10.0, 101), step);
        const double scale = std::max(1.0, std::abs(tr.hamiltonian[0]));
        drifts[idx++] = relative_drift(tr.hamiltonian);
        // non-secular: the error at the end does not outgrow the transient
        double worst_half = 0.0;
        for (int i = 0; i <= 50; ++i)
            worst_half = std::max(worst_half, std::abs(tr.hamiltonian[i] - tr.hamiltonian[0]));
        const double tail = std::abs(tr.hamiltonian[100] - tr.hamiltonian[0]);
        CHECK(tail < 2.0 * worst_half + 1e-12 * scale);
    }
    CHECK(drifts[1] < 1e-3);
    CHECK(drifts[1] < 0.5 * drifts[0]);  // step-controlled, no drift floor
}

TEST_CASE("darboux engine aborts near the chamber boundary") {
    const Model model(kParams);
    // heading into the wall: the backward flow of the stratum-crossing run
    CVec zb(2);
    zb << Complex(0.0, 0.0), Complex(0.9, 0.2);
    const SectionPoint z0 =
        z_from_constraint(model, free_flow(section_global(model, SectionPoint{zb}), 1, -0.2));
    auto [p, t] = angles_of_z(model, z0);
    CHECK_THROWS_AS(evolve_darboux(model, p, t, linspace(0.0, 1.0, 11), 0.01),
                    BoundaryApproach);
}

TEST_CASE("frozen-cosine start: initial chart velocities from the free flow") {
    const Model model(kParams);
    const ChamberPoint p = phat_of_z(model, moderate_point());
    const TorusPoint t = torus_point_from_angles(RVec::Constant(2, std::numbers::pi / 2));
    // central difference of the exact projected flow as the oracle
    const Mat K0 = section_global(model, z_of_angles(model, p, t));
    const double dt = 1e-5;
    auto [pp, tp] = angles_of_z(model, z_from_constraint(model, free_flow(K0, 1, dt)));
    auto [pm, tm] = angles_of_z(model, z_from_constraint(model, free_flow(K0, 1, -dt)));
    const RVec pdot = (pp.phat - pm.phat) / (2 * dt);
    RVec qdot(2);
    for (int i = 0; i < 2; ++i)
        qdot[i] = std::arg(tp.phases[i] * std::conj(tm.phases[i])) / (2 * dt);

    // with vanishing cosines the angle speed is the ladder-term partial and
    // the radial speed is the cosine-term partial
    const double c0 = 0.5 * (std::exp(-2 * kParams.u) + std::exp(2 * kParams.v));
    auto [gp, gq] = reduced_gradient(model, p, t);
    for (int l = 0; l < 2; ++l) {
        const double ladder = 2.0 * c0 * std::exp(-2.0 * p.phat[l]);
        CHECK(std::abs(-qdot[l] - ladder) < 1e-6 * std::max(1.0, ladder));
        CHECK(std::abs(gp[l] - ladder) < 1e-12 * std::max(1.0, ladder));
    }
    CHECK((pdot - gq).cwiseAbs().maxCoeff() < 1e-6 * std::max(1.0, gq.cwiseAbs().maxCoeff()));
}

TEST_CASE("canonical pair and involutivity through the bracket oracle") {
    const Model model(kParams);
    Sampler smp(14);
    const RVec ph = phat_of_z(model, moderate_point()).phat;
    RVec qh(2);
    qh << 0.9, -0.4;

    ChartFn p1 = [](const RVec& pv, const RVec&) { return pv[0]; };
    ChartFn q1 = [](const RVec&, const RVec& qv) { return qv[0]; };
    CHECK(std::abs(poisson_fd(p1, q1, ph, qh) + 1.0) < 1e-9);

    std::vector<ChartFn> fns{reduced_hamiltonian_fn(model), conserved_trace_fn(model, 1),
                             conserved_trace_fn(model, 2)};
    std::vector<std::pair<RVec, RVec>> grads;
    for (const auto& f : fns) grads.push_back(gradient_fd(f, ph, qh, 1e-6));
    auto gnorm = [&](std::size_t i) {
        return std::hypot(grads[i].first.norm(), grads[i].second.norm());
    };
    for (std::size_t a = 0; a < fns.size(); ++a)
        for (std::size_t b = a + 1; b < fns.size(); ++b) {
            const double pb = poisson_fd(fns[a], fns[b], ph, qh);
            CHECK(std::abs(pb) / std::max(1.0, gnorm(a) * gnorm(b)) < 1e-6);
        }
}

TEST_CASE("conserved-trace gradients have full rank at random interior points") {
    const Model model(kParams);
    Sampler smp(15);
    for (int rep = 0; rep < 20; ++rep) {
        const RVec ph = phat_of_z(model, smp.section_point(model)).phat;
        RVec qh(2);
        for (int k = 0; k < 2; ++k) qh[k] = 2.0 * std::numbers::pi * smp.uniform();
        RMat grad(2, 4);
        for (int k = 1; k <= 2; ++k) {
            auto [gp, gq] = gradient_fd(conserved_trace_fn(model, k), ph, qh, 1e-6);
            grad.row(k - 1).head(2) = gp.transpose();
            grad.row(k - 1).tail(2) = gq.transpose();
        }
        Eigen::JacobiSVD<RMat> svd(grad);
        CHECK(svd.singularValues()(1) > 1e-6);
    }
}
