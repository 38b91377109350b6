#pragma once

#include "memopat/model.hpp"

namespace memopat {

enum class Direction { Forward, Backward };
enum class BranchStability { Stable, Unstable };

// Null-eigenvector and adjoint coefficients at the threshold alpha_n:
// q = (1, M1, M2) cos(nx), l = (1, M1s, M2s) cos(nx).
struct EigenCoefficients {
    double M1 = 0, M2 = 0, M1s = 0, M2s = 0;
};

// Second-order branch correction Theta = Theta^c + Theta^m cos(2nx),
// one (const, cos) pair per component (u, k, v).
struct ThetaCoefficients {
    double t1_const = 0, t1_cos = 0;
    double t2_const = 0, t2_cos = 0;
    double t3_const = 0, t3_cos = 0;
};

struct BifurcationCoefficients {
    int n = 0;
    double alpha_n = 0;
    EigenCoefficients eig;
    ThetaCoefficients theta;
    double alpha_dd0 = 0; // branch curvature alpha_n''(0)
    Direction direction = Direction::Forward;
    BranchStability branch_stability = BranchStability::Stable;
};

// M1 = -w_u/w_k, M2 = M1/(1+n^2 R^2), M1s = (d n^2 - f_u)/w_u,
// M2s = -R^2 w_k M1s.
EigenCoefficients eigen_coefficients(const LinearizationData& lin, double d,
                                     double R, int n);

// Solves the quadratic-order system L[Theta] = -F_UU[q,q] mode by mode
// (constant mode and cos(2nx) mode).  Throws GrowthDegenerate when
// f_u = 0: the constant mode of the u-equation then has no unique
// solution and the no-growth branch needs separate treatment.
ThetaCoefficients theta_coefficients(const LinearizationData& lin, double d,
                                     double R, int n, double alpha_n);

// Closed-form branch curvature alpha_n''(0) from the Crandall-Rabinowitz
// projections of the cubic and quadratic terms onto the adjoint.
double alpha_curvature(const LinearizationData& lin, double d, double R, int n,
                       double alpha_n, const ThetaCoefficients& theta);

// Independent evaluation of the same three projection integrals by
// composite Simpson quadrature of the assembled integrands; used as a
// built-in cross-check of the closed form.
double alpha_curvature_quadrature(const LinearizationData& lin, double d,
                                  double R, int n, double alpha_n,
                                  const ThetaCoefficients& theta,
                                  int n_panels = 4096);

// Direction is the sign of the curvature (Forward = branch bends toward
// increasing alpha); stability additionally flips with the sign of w_u,
// because destabilization happens toward more-negative alpha when
// w_u > 0 and more-positive alpha when w_u < 0.
std::pair<Direction, BranchStability> classify(const LinearizationData& lin,
                                               double alpha_dd0);

// Leading-order amplitude of the u-perturbation s*cos(nx) on the local
// branch: s = sqrt(2 (alpha - alpha_n)/alpha_dd0).  Throws WrongSide when
// the radicand is negative (no branch on that side).
double predicted_branch(double alpha_n, double alpha_dd0, double alpha);

// Assembles everything for mode n at the given geometry, running the
// closed-form vs quadrature cross-check (relative tolerance 1e-6, throws
// CrossCheckError on disagreement).
BifurcationCoefficients bifurcation_coefficients(const LinearizationData& lin,
                                                 double d, double R, int n);

} // namespace memopat
