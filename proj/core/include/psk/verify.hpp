#pragma once

#include <optional>

#include "psk/deviance.hpp"

namespace psk {

// Outcome of the projective special Kahler checks on (structure, deviance):
// D1 is the curvature equation Omega^LC + Omega_P + [eta ^ conj(eta)] = 0,
// D2 the differential condition d^LC sigma = -4i lambda ^ sigma with an
// invariant potential d lambda = omega.
struct PskVerdict {
    double d1_residual = 0.0;
    bool d2_feasible = false;
    std::optional<Form<Cd>> d2_lambda;
    double ricci_residual = 0.0;
    double scalar_residual = 0.0;
    double scal = 0.0;
    bool accepted = false;
};

double d1_residual(const CurvatureTensor& Rlc, const Deviance& d, double tol = 1e-9);

struct D2Result {
    bool feasible = false;
    std::optional<Form<Cd>> lambda; // minimal-norm witness when feasible
    double residual = 0.0;          // attained least-squares residual (inf-norm)
};

// Solves, over left-invariant real 1-forms lambda, the joined linear system
//   d lambda = omega,   d^LC sigma = -4i lambda ^ sigma
// by least squares; feasible iff the residual is below tol. The witness is
// the minimal-Euclidean-norm solution.
D2Result d2_check(const KahlerStructure& ks, const FormMatrix<Cd>& conn, const Deviance& d,
                  double tol = 1e-9);

// Residual of Ric(X,Y) + 2(n+1) g(X,Y) - realify(h(conj(eta_X), eta_Y)) = 0
// over frame pairs.
double ricci_identity(const Eigen::MatrixXd& ric, const Deviance& d);

// Residual of scal + 2(n+1) - (2/n)|eta|^2 = 0.
double scalar_identity(double scal, int n, const Deviance& d);

// Scalar value implied by the identity, scal = -2(n+1) + (2/n)|eta|^2;
// always >= -2(n+1) with equality exactly at zero deviance.
double scalar_bound_check(int n, const Deviance& d);

PskVerdict verify(const KahlerStructure& ks, const Deviance& d, double tol = 1e-9);

} // namespace psk
