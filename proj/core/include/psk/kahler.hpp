#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "psk/blocks.hpp"
#include "psk/lie.hpp"

namespace psk {

// Bracket table of a left-invariant frame, over doubles. The frame is always
// declared g-orthonormal; the metric never appears explicitly.
struct LieAlgebraData {
    StructureConstants<Cd> sc;

    LieAlgebraData() = default;
    explicit LieAlgebraData(int dim) : sc(dim) {}
    int dim() const { return sc.dim(); }

    void set_bracket(int k, int i, int j, double v) { sc.set(k, i, j, Cd(v)); }
    double bracket_coef(int k, int i, int j) const { return sc.at(k, i, j).re; }
};

double jacobi_residual(const LieAlgebraData& alg);

// Kahler data on the algebra: orthonormal frame, complex structure matrix,
// Kahler form omega = g(I., .).
struct KahlerStructure {
    LieAlgebraData alg;
    Eigen::MatrixXd Imat;
    Form<Cd> omega;

    int dim() const { return alg.dim(); }
    int n() const { return alg.dim() / 2; }
};

// omega defaults to g(I.,.), i.e. omega(e_i, e_j) = Imat(j, i).
KahlerStructure make_kahler(const LieAlgebraData& alg, const Eigen::MatrixXd& Imat,
                            const std::optional<Form<Cd>>& omega_override = std::nullopt);

struct KahlerReport {
    double d_omega = 0.0;     // max-abs of the Chevalley-Eilenberg d(omega)
    double nijenhuis = 0.0;   // max-abs component of N_I
    double compat = 0.0;      // I orthogonal, I^2 = -id, omega = g(I.,.)
    bool closed_ok = false;

    double worst() const { return std::max({d_omega, nijenhuis, compat}); }
};

KahlerReport kahler_check(const KahlerStructure& ks, double tol = 1e-9);

struct FrameAdaptError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Frame order making Imat the standard block form I e_{2k} = e_{2k+1}
// (0-based). Throws when some I-column is not a signed frame vector.
std::vector<int> adapt_frame_permutation(const Eigen::MatrixXd& Imat, double tol = 1e-9);
bool imat_is_standard(const Eigen::MatrixXd& Imat, double tol = 1e-9);
KahlerStructure apply_frame_permutation(const KahlerStructure& ks, const std::vector<int>& perm);

// Unitary coframe theta^k = u^{2k} + i u^{2k+1}; requires the standard block
// form (adapt first otherwise).
std::vector<Form<Cd>> unitary_coframe(const KahlerStructure& ks);

// Levi-Civita connection form of the orthonormal-frame metric (Koszul).
FormMatrix<Cd> levi_civita(const KahlerStructure& ks);

// End-valued curvature 2-form with its complex-block presentation computed on
// demand. Entries are real; the complex view exists when the tensor is a
// (1,1) complex-linear form (Kahler curvature).
struct CurvatureTensor {
    int n = 0;
    FormMatrix<Cd> real;
};

CurvatureTensor curvature(const FormMatrix<Cd>& conn, const LieAlgebraData& alg);
CurvatureTensor curvature_from_blocks(const CurvBlocks<Cd>& blocks);

// First-Bianchi residual sum_cyc Omega^l_k(e_i, e_j).
double bianchi_residual(const CurvatureTensor& R);

// Ricci tensor Ric_{jk} = sum_i Omega^i_k(e_i, e_j) and the dimension-
// normalized scalar tr(Ric)/dim. This scalar convention makes
// scal(P^n_C) = 2(n+1); multiply by dim for the usual scalar curvature.
std::pair<Eigen::MatrixXd, double> ricci_scalar(const CurvatureTensor& R);

// Complex-block view; throws NotKahlerCurvature when the non-(1,1) defect
// exceeds tol.
CurvBlocks<Cd> complexify(const CurvatureTensor& R, double tol = 1e-9);

} // namespace psk
