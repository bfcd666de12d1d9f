// Local section and global chart of the reduced phase space, the hatted
// dressing matrices, the gauge action, and gauge-invariant recovery of the
// global coordinate from a constraint-surface element.
#ifndef SUNN_PHASESPACE_HPP
#define SUNN_PHASESPACE_HPP

#include "model.hpp"

#include <cstdint>

namespace sunn {

// Angle coordinates e^{i q-hat} on the n-torus.
struct TorusPoint {
    CVec phases;
};

TorusPoint torus_point_from_angles(const RVec& qhat);
void require_torus(const TorusPoint& t, double tol = 1e-9);

// Global coordinate z in C^{n-1} x C^*; the last component never vanishes.
struct SectionPoint {
    CVec z;
};

void require_section(const SectionPoint& s);

// Suffix phase products sigma_j = prod_{k>j} phases_k (sigma_n = 1);
// returned as the diagonal of the left/right conjugating matrices.
CVec sigma_plus(const TorusPoint& t);
CVec sigma_minus(const TorusPoint& t);

SectionPoint z_of_angles(const Model& m, const ChamberPoint& p, const TorusPoint& t);
ChamberPoint phat_of_z(const Model& m, const SectionPoint& s);

// Canonical angle representative of an interior point (every component
// nonzero); DomainError on the boundary strata, where individual angles
// carry no invariant meaning.
std::pair<ChamberPoint, TorusPoint> angles_of_z(const Model& m, const SectionPoint& s);

// Diagonal of Delta(z) = diag(z_n, e^{-p_2}, ..., e^{-p_n}).
CVec delta_of_z(const Model& m, const SectionPoint& s);

struct HatDressing {
    Mat zeta_hat;   // unitary
    Mat theta_hat;  // unitary
    Mat alpha_hat;  // coupling block of the global chart
};

// Smooth on the whole coordinate space, including components z_j = 0.
HatDressing hat_dressing(const Model& m, const SectionPoint& s);

// Coupling block in angle coordinates.
Mat alpha_of_angles(const Model& m, const ChamberPoint& p, const TorusPoint& t);

// Local cross-section element K(p, e^{iq}) of the constraint surface.
Mat section_local(const Model& m, const ChamberPoint& p, const TorusPoint& t);

// Left triangular factor of the local section element, built in closed form.
Mat b_left_of_section(const Model& m, const ChamberPoint& p, const TorusPoint& t);

// Global chart element K-hat(z), defined for every valid SectionPoint.
Mat section_global(const Model& m, const SectionPoint& s);

// Pair of block-diagonal symmetry-group elements (left stabilizes the
// momentum value, right is arbitrary); acts by K -> eta_L K eta_R^{-1}.
struct GaugePair {
    Mat eta_left;
    Mat eta_right;
};

Mat apply_gauge(const GaugePair& g, const Mat& K);

// The explicit pair relating the local section to the global chart on
// angle-coordinate inputs.
GaugePair gauge_of_angles(const Model& m, const TorusPoint& t);

// A random admissible pair: the left upper block is sampled inside the
// stabilizer of the momentum deformation, everything else Haar-like.
GaugePair random_gauge(const Model& m, std::uint64_t seed);

// Worst block-diagonal momentum residual of both triangular factors,
// relative to the fixed momentum value: (left, right).
std::pair<double, double> momentum_residuals(const Model& m, const Mat& K,
                                             double tol = kStructuralTol);

// Unique z with the same orbit as K; K must lie on the constraint surface
// within tol. Throws NotOnConstraint when the moduli gate fails and
// PhaseRecoveryAmbiguous when a needed phase product cannot be determined.
SectionPoint z_from_constraint(const Model& m, const Mat& K, double tol = 1e-8);

// Same recovery when the right splitting K = U T^{-1} is already known:
// U is the pseudo-unitary factor and coupling the upper-right block of
// T^{-1}. Avoids re-factorizing K, which squares its condition number;
// the trajectory engine feeds the exactly-conserved triangular data here.
SectionPoint z_from_split(const Model& m, const Mat& unitary_like, const Mat& coupling,
                          double tol = 1e-8);

}  // namespace sunn

#endif
