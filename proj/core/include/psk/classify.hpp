#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "psk/verify.hpp"

namespace psk {

// The nine non-abelian Kahler Lie algebra families in dimension 4, in the
// unitary-normalized frame (g orthonormal, I e1 = e2, I e3 = e4,
// omega = u^12 + u^34).
enum class CaseId { I, II, III, IV, V, VI, VII, VIII, IX };

const char* case_name(CaseId id);

struct FamilyParams {
    double a = 1.0;
    double b = 1.0;     // case III only
    double delta = 1.0; // cases IV, V, VIII, IX
};

// Bracket tables of the curvature table rows. Throws on out-of-domain
// parameters (a > 0, delta > 0 where applicable).
KahlerStructure builtin_family(CaseId id, const FamilyParams& p);

// Least-squares decomposition of a dim-4 curvature tensor on {H1, H2, Omega_P}.
struct CurvatureFit {
    double h1 = 0.0;
    double h2 = 0.0;
    double proj = 0.0;
    double residual = 0.0;
};
CurvatureFit fit_curvature(const CurvatureTensor& R);

struct CurvatureTableRow {
    CaseId id;
    FamilyParams params;
    CurvatureFit fit;
};
std::vector<CurvatureTableRow> curvature_table(const std::vector<double>& delta_grid,
                                               double a = 1.0);

// Solution families of the D1 constraint in (x, y, z, w) = (2c1, 2c2/3, 2c3/2
// ... the raised-coefficient coordinates), closed under the circle action.
struct SolutionFamily {
    enum Kind { circle_family, zero_only, empty } kind = empty;
    std::array<Cd, 4> base{}; // representative (x, y, z, w); the family is e^{i a} base
};

// Curvature type (i): Omega^LC = a^2 H1 + b^2 H2.
SolutionFamily solve_type_i(double a, double b, double tol = 1e-9);
// Curvature type (ii): Omega^LC = -a^2 (Omega_P + 6 b H2), b in {0, 1}.
SolutionFamily solve_type_ii(double a, int b, double tol = 1e-9);

// Independent numeric oracle: multi-start Levenberg-Marquardt on the block
// residual |Omega^LC + Omega_P + [eta ^ conj(eta)]|^2 over (x,y,z,w).
struct BruteForceResult {
    std::vector<std::array<Cd, 4>> points; // D1 residual < 1e-6 each
    double floor = 0.0;                    // best residual reached over all starts
};
BruteForceResult brute_force_solutions(const CurvatureTensor& Rlc, int trials,
                                       uint64_t seed = 0x5eed5eedULL);

double family_distance(const SolutionFamily& fam, const std::array<Cd, 4>& point);

// Cell pipeline on one Kahler structure: fit the curvature, solve the D1
// constraint systems, filter through D2.
struct StructureClassification {
    CurvatureFit fit;
    SolutionFamily family;
    bool accepted = false;
    std::string reason;          // "accepted", "D1 unsolvable", "D2 infeasible"
    std::string sigma_text;      // deviance of the accepted family
    std::optional<Form<Cd>> lambda;
    std::vector<Form<Cd>> dtheta; // complex coframe differentials, re-derived
};

StructureClassification classify_structure(const KahlerStructure& ks, double tol = 1e-9);

struct ClassifyRow : StructureClassification {
    CaseId id;
    FamilyParams params;
};

struct ClassifyReport {
    std::vector<ClassifyRow> rows;
    std::vector<double> delta_grid;
    StructureClassification abelian; // flat control row; always rejected
};

ClassifyReport classify(const std::vector<double>& delta_grid = {0.5, 1.0, 2.0},
                        double tol = 1e-9);

} // namespace psk
