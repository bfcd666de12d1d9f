// Seeded sampling of matrices and phase-space points for the test harness
// and the identity suite. No hidden global state.
#ifndef SUNN_SAMPLING_HPP
#define SUNN_SAMPLING_HPP

#include "phasespace.hpp"

#include <cstdint>
#include <numbers>
#include <random>

namespace sunn {

class Sampler {
  public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double normal() { return gauss_(rng_); }
    double uniform() { return unif_(rng_); }

    Complex complex_normal() {
        const double re = gauss_(rng_);
        const double im = gauss_(rng_);
        return Complex(re, im) / std::numbers::sqrt2;
    }

    Complex unit_complex() { return std::polar(1.0, 2.0 * std::numbers::pi * unif_(rng_)); }

    // Fresh seed drawn from this sampler's stream (for nested samplers).
    std::uint64_t next_seed() { return rng_(); }

    // Haar-like unitary via QR of a complex Gaussian matrix.
    Mat unitary(int n);

    // Upper triangular with positive diagonal and unit determinant.
    Mat sb_element(int size, double spread = 0.3);

    TorusPoint torus_point(int n);

    // z_j standard complex normal for j < n, z_n = exp(complex normal).
    SectionPoint section_point(const Model& m);

    // Same, with the given component (0-based, < n-1) set to zero exactly.
    SectionPoint boundary_section_point(const Model& m, int zero_index);

    ChamberPoint chamber_point(const Model& m, bool interior = true);

  private:
    std::mt19937_64 rng_;
    std::normal_distribution<double> gauss_{0.0, 1.0};
    std::uniform_real_distribution<double> unif_{0.0, 1.0};
};

}  // namespace sunn

#endif
