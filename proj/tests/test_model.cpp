#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "model.hpp"
#include "sampling.hpp"

#include <Eigen/Eigenvalues>

using namespace sunn;

namespace {

// Raw angle-coordinate evaluation of theta, valid on the closed chamber
// with nonnegative square roots taken after grouping per index.
RMat theta_oracle(const ModelParams& pr, const RVec& ph) {
    const int n = pr.n;
    const double x = pr.x;
    RMat th(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            double prod = 1.0;
            for (int m = 0; m < n; ++m) {
                if (m == j || m == k) continue;
                if (j == k)
                    prod *= std::sinh(ph[j] - ph[m] - x / 2) * std::sinh(ph[j] - ph[m] + x / 2) /
                            std::pow(std::sinh(ph[j] - ph[m]), 2);
                else
                    prod *= std::sinh(ph[j] - ph[m] - x / 2) * std::sinh(ph[k] - ph[m] + x / 2) /
                            (std::sinh(ph[j] - ph[m]) * std::sinh(ph[k] - ph[m]));
            }
            const double root = std::sqrt(std::max(prod, 0.0));
            th(j, k) = (j == k) ? root : std::sinh(x / 2) / std::sinh(ph[k] - ph[j]) * root;
        }
    return th;
}

RVec r_oracle(const ModelParams& pr, const RVec& ph) {
    const int n = pr.n;
    const double x = pr.x;
    RVec r(n);
    for (int j = 0; j < n; ++j) {
        double prod = (1.0 - std::exp(-x)) / (1.0 - std::exp(-n * x));
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            prod *= (1.0 - std::exp(2 * ph[j] - 2 * ph[k] - x)) /
                    (1.0 - std::exp(2 * ph[j] - 2 * ph[k]));
        }
        r[j] = std::sqrt(std::max(prod, 0.0));
    }
    return r;
}

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS((ModelParams{1, 1.0, 0.1, 0.2}.validate()), InvalidArgument);
    CHECK_THROWS_AS((ModelParams{2, -1.0, 0.1, 0.2}.validate()), InvalidArgument);
    CHECK_THROWS_AS((ModelParams{2, 0.0, 0.1, 0.2}.validate()), InvalidArgument);
    CHECK_THROWS_AS((ModelParams{2, 1.0, 0.4, -0.4}.validate()), InvalidArgument);
    CHECK_NOTHROW((ModelParams{2, 1.0, 0.4, 0.4}.validate()));
}

TEST_CASE("deformation matrix entries and eigenvalues at the worked example") {
    const ModelParams pr{2, 2.0 * std::log(2.0), 0.3, 0.5};
    const Mat nu = nu_matrix(pr);
    CHECK(std::abs(nu(0, 0) - Complex(1, 0)) < 1e-15);
    CHECK(std::abs(nu(1, 1) - Complex(1, 0)) < 1e-15);
    CHECK(std::abs(nu(1, 0)) < 1e-15);
    CHECK(std::abs(nu(0, 1) - Complex(1.5, 0)) < 1e-14);

    // oracle: eigensolver on the explicit 2x2 Gram matrix [[13/4, 3/2],[3/2, 1]]
    Eigen::SelfAdjointEigenSolver<Mat> es(nu * nu.adjoint());
    CHECK(std::abs(es.eigenvalues()[0] - 0.25) < 1e-12);
    CHECK(std::abs(es.eigenvalues()[1] - 4.0) < 1e-12);
}

TEST_CASE("deformation matrix tends to the identity as x tends to zero") {
    const ModelParams pr{4, 1e-12, 0.3, 0.5};
    CHECK(max_abs(Mat(nu_matrix(pr) - Mat::Identity(4, 4))) < 1e-11);
}

TEST_CASE("kappa data at the worked example") {
    const ModelParams pr{2, 2.0 * std::log(2.0), 0.3, 0.5};
    const RVec v = kappa_vector(pr);
    CHECK(std::abs(v[0] - 1.2649110640673518) < 1e-12);
    CHECK(std::abs(v[1] - 0.6324555320336759) < 1e-12);
    CHECK(std::abs(v.squaredNorm() - 2.0) < 1e-13);

    const RMat k = kappa_matrix(pr);
    CHECK(std::abs(k(0, 0) - 0.4472135954999579) < 1e-12);
    CHECK(std::abs(k(0, 1) - 0.8944271909999159) < 1e-12);
    CHECK(std::abs(k(1, 0) + 0.8944271909999159) < 1e-12);
    CHECK(std::abs(k(1, 1) - 0.4472135954999579) < 1e-12);

    // oracle: direct multiplication of the diagonalized Gram matrix
    const Model model(pr);
    const Mat d = k.transpose().cast<Complex>() * model.nu_gram() * k.cast<Complex>();
    CHECK(std::abs(d(0, 1)) < 1e-10);
    CHECK(std::abs(d(1, 0)) < 1e-10);
    const double lo = std::min(d(0, 0).real(), d(1, 1).real());
    const double hi = std::max(d(0, 0).real(), d(1, 1).real());
    CHECK(std::abs(lo - 0.25) < 1e-12);
    CHECK(std::abs(hi - 4.0) < 1e-12);
}

TEST_CASE("kappa determinant is one across sizes and scales") {
    for (int n = 2; n <= 6; ++n)
        for (double x : {0.5, 1.0, 2.0}) {
            const RMat k = kappa_matrix(ModelParams{n, x, 0.1, 0.2});
            CHECK(std::abs(k.determinant() - 1.0) < 1e-10);
            CHECK((k * k.transpose() - RMat::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
        }
}

TEST_CASE("chamber membership and the domain gate") {
    const ModelParams pr{3, 1.0, 0.3, 0.5};
    RVec ok(3);
    ok << 1.0, 0.5, 0.0;
    CHECK(in_chamber(pr, ok));
    RVec boundary(3);
    boundary << 1.0, 0.5, 0.0;
    boundary[1] = 0.5;  // gaps exactly x/2
    CHECK(in_chamber(pr, RVec(boundary)));
    RVec bad(3);
    bad << 1.0, 0.9, 0.0;
    CHECK_FALSE(in_chamber(pr, bad));
    CHECK_THROWS_AS(theta_matrix(pr, ChamberPoint{bad}), DomainError);
}

TEST_CASE("theta matches the raw evaluation on interior points") {
    const ModelParams pr{4, 0.8, 0.3, 0.5};
    const Model model(pr);
    Sampler smp(21);
    for (int rep = 0; rep < 25; ++rep) {
        const ChamberPoint p = smp.chamber_point(model);
        const RMat th = theta_matrix(pr, p);
        CHECK((th - theta_oracle(pr, p.phat)).cwiseAbs().maxCoeff() < 1e-11);
        CHECK((th * th.transpose() - RMat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(std::abs(th.determinant() - 1.0) < 1e-10);
    }
}

TEST_CASE("theta at the two-particle boundary is the quarter rotation") {
    const ModelParams pr{2, 1.3, 0.3, 0.5};
    RVec ph(2);
    ph << 0.2, 0.2 - pr.x / 2;  // gap exactly x/2
    const RMat th = theta_matrix(pr, ChamberPoint{ph});
    CHECK(std::abs(th(0, 0)) < 1e-14);
    CHECK(std::abs(th(1, 1)) < 1e-14);
    CHECK(std::abs(th(0, 1) + 1.0) < 1e-13);
    CHECK(std::abs(th(1, 0) - 1.0) < 1e-13);
    CHECK(std::abs(th.determinant() - 1.0) < 1e-13);
}

TEST_CASE("theta tends to the identity for wide separations") {
    const ModelParams pr{3, 1.0, 0.3, 0.5};
    RVec ph(3);
    ph << 20.0, 0.0, -20.0;
    const RMat th = theta_matrix(pr, ChamberPoint{ph});
    CHECK((th - RMat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("theta is continuous across the chamber boundary") {
    const ModelParams pr{3, 1.0, 0.3, 0.5};
    RVec ph0(3);
    ph0 << 1.0, 1.0 - pr.x / 2, -0.3;  // first gap saturated
    const RMat th0 = theta_matrix(pr, ChamberPoint{ph0});
    double prev = std::numeric_limits<double>::infinity();
    for (double eps : {1e-4, 2.5e-5, 6.25e-6}) {
        RVec ph = ph0;
        ph[0] += eps;  // approach along the gap direction
        const double diff =
            (theta_matrix(pr, ChamberPoint{ph}) - th0).cwiseAbs().maxCoeff();
        CHECK(diff < 2.0 * std::sqrt(eps));  // square-root rate in the gap
        CHECK(diff < prev);
        prev = diff;
    }
}

TEST_CASE("zeta data: unit vector, orthogonality, wide-separation limit") {
    const ModelParams pr{2, 2.0 * std::log(2.0), 0.3, 0.5};
    RVec ph(2);
    ph << 15.0, -15.0;
    const RVec r = zeta_r(pr, ChamberPoint{ph});
    CHECK(std::abs(r[0] - 0.4472135954999579) < 1e-6);
    CHECK(std::abs(r[1] - 0.8944271909999159) < 1e-6);

    const Model model3(ModelParams{3, 1.0, 0.3, 0.5});
    Sampler smp(31);
    for (int rep = 0; rep < 100; ++rep) {
        const ChamberPoint p = smp.chamber_point(model3);
        const RVec rr = zeta_r(model3.params(), p);
        CHECK(std::abs(rr.squaredNorm() - 1.0) < 1e-10);
        CHECK((rr - r_oracle(model3.params(), p.phat)).cwiseAbs().maxCoeff() < 1e-11);
        const RMat zt = zeta_matrix(model3.params(), p);
        CHECK((zt * zt.transpose() - RMat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(std::abs(zt.determinant() - 1.0) < 1e-10);
    }
}

TEST_CASE("hyperbolic radii of chamber points are positive") {
    const Model model(ModelParams{3, 1.0, 0.3, 0.5});
    Sampler smp(41);
    for (int rep = 0; rep < 100; ++rep) {
        const ChamberPoint p = smp.chamber_point(model);
        for (int k = 0; k < 3; ++k) {
            const double q = std::asinh(std::exp(p.phat[k]));
            CHECK(q > 0.0);
        }
    }
}

TEST_CASE("simple eigenvalue location is consistent with the kappa diagonal") {
    for (int n : {2, 3, 4, 6}) {
        const Model model(ModelParams{n, 0.7, 0.3, 0.5});
        const Mat d = model.kappa().transpose().cast<Complex>() * model.nu_gram() *
                      model.kappa().cast<Complex>();
        const int s = model.simple_eigen_index();
        CHECK(std::abs(d(s, s).real() - model.simple_eigenvalue()) < 1e-10);
        for (int i = 0; i < n; ++i) {
            if (i == s) continue;
            CHECK(std::abs(d(i, i).real() - model.repeated_eigenvalue()) < 1e-8);
        }
        CHECK(std::abs(model.simple_eigenvalue() - model.repeated_eigenvalue()) > 1e-3);
    }
}
