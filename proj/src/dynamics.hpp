// Free Hamiltonians and their explicit flows, the reduced Hamiltonian, Lax
// matrices with conserved traces, the block algebra for integer powers of
// the momentum-side generator, and the two trajectory engines.
#ifndef SUNN_DYNAMICS_HPP
#define SUNN_DYNAMICS_HPP

#include "phasespace.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace sunn {

// (1/2j) tr (K J K^H J)^j for nonzero integer j.
double free_hamiltonian(const Mat& K, int j);

// Explicit flow of the j-th free Hamiltonian through K0; exact up to the
// accuracy of the matrix exponential.
Mat free_flow(const Mat& K0, int j, double t);

// Lax matrix on the global chart: Gram matrix alpha-hat^H alpha-hat.
Mat lax_matrix(const Model& m, const SectionPoint& s);

// Closed-form evaluation in angle coordinates (the reversed Gram ordering
// alpha alpha^H; same traces and spectrum).
Mat lax_matrix_explicit(const Model& m, const ChamberPoint& p, const TorusPoint& t);

// Lax matrix of the underlying rational-trigonometric family:
// e^{iq} theta^{-1} + theta e^{-iq}.
Mat ruijsenaars_lax(const Model& m, const ChamberPoint& p, const TorusPoint& t);

// Closed-form reduced Hamiltonian in the Darboux chart.
double reduced_hamiltonian(const Model& m, const ChamberPoint& p, const TorusPoint& t);

// Analytic chart gradient of the reduced Hamiltonian: (dH/dp, dH/dq).
std::pair<RVec, RVec> reduced_gradient(const Model& m, const ChamberPoint& p, const TorusPoint& t);

struct ConservedSpectrum {
    RVec h;            // h_k = tr L^k, k = 1..n
    RVec eigenvalues;  // sorted descending
};

ConservedSpectrum conserved_spectrum(const Mat& L);

// Coefficient vectors of the block expansion of the j-th power of the
// momentum-side generator [[e^{-2v}, -e^{-v} a],[e^{-v} a^H, e^{2v} - a^H a]].
struct PowerCoefficients {
    int order = 1;  // |j|
    RVec a, b, c, d;
};

std::pair<PowerCoefficients, Mat> power_blocks(const Mat& alpha, double v, int j);

struct ExpressibilityFit {
    RVec coefficients;  // constant term first, then the h_1..h_n weights
    double residual;    // max fit residual over the samples
};

// Least-squares expansion of the j-th free Hamiltonian on the global chart
// in terms of {1, h_1, ..., h_n}.
ExpressibilityFit expressibility_fit(const Model& m, const std::vector<SectionPoint>& samples,
                                     int j);

struct Trajectory {
    RVec times;
    std::vector<SectionPoint> points;
    RMat conserved;   // one row per time, columns h_1..h_n
    RVec hamiltonian; // generating Hamiltonian along the trajectory
};

// Projection engine: each output point is the exact free flow pushed back
// through the global chart; no step-size error accumulates.
Trajectory evolve_projection(const Model& m, const SectionPoint& z0, int j, const RVec& times);

// Darboux engine: implicit-midpoint integration of the reduced Hamiltonian
// in chart coordinates. Throws BoundaryApproach when the trajectory comes
// within the guard distance of the chamber boundary.
Trajectory evolve_darboux(const Model& m, const ChamberPoint& p0, const TorusPoint& t0,
                          const RVec& times, double step);

// Scalar chart functions (p, q) -> R used by the finite-difference bracket.
using ChartFn = std::function<double(const RVec& phat, const RVec& qhat)>;

ChartFn conserved_trace_fn(const Model& m, int k);
ChartFn reduced_hamiltonian_fn(const Model& m);

// Central-difference canonical bracket sum_k (df/dq_k dg/dp_k - df/dp_k dg/dq_k).
double poisson_fd(const ChartFn& f, const ChartFn& g, const RVec& phat, const RVec& qhat,
                  double step = 1e-4);

// Central-difference chart gradient (dp part, dq part).
std::pair<RVec, RVec> gradient_fd(const ChartFn& f, const RVec& phat, const RVec& qhat,
                                  double step = 1e-6);

}  // namespace sunn

#endif
