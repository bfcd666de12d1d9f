#include "sampling.hpp"

#include <Eigen/QR>

namespace sunn {

Mat Sampler::unitary(int n) {
    if (n <= 0) return Mat(0, 0);
    Mat g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = complex_normal();
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phase convention so the distribution is Haar.
    for (int k = 0; k < n; ++k) q.col(k) *= unit_phase(r(k, k));
    return q;
}

Mat Sampler::sb_element(int size, double spread) {
    Mat b = Mat::Zero(size, size);
    for (int i = 0; i < size; ++i) {
        b(i, i) = std::exp(spread * normal());
        for (int j = i + 1; j < size; ++j) b(i, j) = spread * complex_normal();
    }
    double logdet = 0.0;
    for (int i = 0; i < size; ++i) logdet += std::log(b(i, i).real());
    b *= std::exp(-logdet / size);
    return b;
}

TorusPoint Sampler::torus_point(int n) {
    CVec phases(n);
    for (int k = 0; k < n; ++k) phases[k] = unit_complex();
    return TorusPoint{std::move(phases)};
}

SectionPoint Sampler::section_point(const Model& m) {
    const int n = m.n();
    CVec z(n);
    for (int j = 0; j + 1 < n; ++j) z[j] = complex_normal();
    z[n - 1] = std::exp(complex_normal());
    return SectionPoint{std::move(z)};
}

SectionPoint Sampler::boundary_section_point(const Model& m, int zero_index) {
    SectionPoint s = section_point(m);
    if (zero_index < 0 || zero_index >= m.n() - 1)
        throw InvalidArgument("boundary_section_point: index out of range");
    s.z[zero_index] = 0.0;
    return s;
}

ChamberPoint Sampler::chamber_point(const Model& m, bool interior) {
    SectionPoint s = section_point(m);
    if (!interior) s.z[0] = 0.0;
    return phat_of_z(m, s);
}

}  // namespace sunn
