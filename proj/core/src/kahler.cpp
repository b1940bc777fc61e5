#include "psk/kahler.hpp"

namespace psk {

double jacobi_residual(const LieAlgebraData& alg) { return jacobi_residual(alg.sc); }

KahlerStructure make_kahler(const LieAlgebraData& alg, const Eigen::MatrixXd& Imat,
                            const std::optional<Form<Cd>>& omega_override) {
    KahlerStructure ks;
    ks.alg = alg;
    ks.Imat = Imat;
    int d = alg.dim();
    if (Imat.rows() != d || Imat.cols() != d)
        throw std::invalid_argument("make_kahler: Imat shape mismatch");
    if (omega_override) {
        ks.omega = *omega_override;
    } else {
        Form<Cd> w(d, 2);
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j)
                w.add_term((uint32_t(1) << i) | (uint32_t(1) << j), Cd(Imat(j, i)));
        ks.omega = w;
    }
    return ks;
}

KahlerReport kahler_check(const KahlerStructure& ks, double tol) {
    KahlerReport rep;
    int d = ks.dim();

    rep.d_omega = ce_differential(ks.omega, ks.alg.sc).max_abs();

    // Nijenhuis tensor on frame pairs:
    // N(X,Y) = [IX, IY] - I[IX, Y] - I[X, IY] - [X, Y]
    const Eigen::MatrixXd& I = ks.Imat;
    auto bracket_vec = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                if (x[i] == 0.0 || y[j] == 0.0) continue;
                for (int k = 0; k < d; ++k)
                    out[k] += x[i] * y[j] * ks.alg.bracket_coef(k, i, j);
            }
        return out;
    };
    double nij = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            Eigen::VectorXd ei = Eigen::VectorXd::Unit(d, i), ej = Eigen::VectorXd::Unit(d, j);
            Eigen::VectorXd v = bracket_vec(I * ei, I * ej) - I * bracket_vec(I * ei, ej) -
                                I * bracket_vec(ei, I * ej) - bracket_vec(ei, ej);
            nij = std::max(nij, v.cwiseAbs().maxCoeff());
        }
    rep.nijenhuis = nij;

    double compat = (I.transpose() * I - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
    compat = std::max(compat, (I * I + Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff());
    // omega = g(I.,.) in the orthonormal frame
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            compat = std::max(compat, std::abs(ks.omega.eval2(i, j).re - I(j, i)) +
                                          std::abs(ks.omega.eval2(i, j).im));
    rep.compat = compat;

    rep.closed_ok = rep.d_omega < tol;
    return rep;
}

bool imat_is_standard(const Eigen::MatrixXd& Imat, double tol) {
    int d = Imat.rows();
    for (int k = 0; 2 * k + 1 < d; ++k) {
        Eigen::VectorXd col = Imat.col(2 * k);
        Eigen::VectorXd want = Eigen::VectorXd::Unit(d, 2 * k + 1);
        if ((col - want).cwiseAbs().maxCoeff() > tol) return false;
    }
    return true;
}

std::vector<int> adapt_frame_permutation(const Eigen::MatrixXd& Imat, double tol) {
    int d = Imat.rows();
    std::vector<int> perm;
    std::vector<bool> used(d, false);
    for (int i = 0; i < d; ++i) {
        if (used[i]) continue;
        // I e_i must be a signed frame vector +-e_j
        int j = -1;
        double sign = 0.0;
        for (int r = 0; r < d; ++r) {
            double v = Imat(r, i);
            if (std::abs(v) > tol) {
                if (j != -1 || (std::abs(std::abs(v) - 1.0) > tol))
                    throw FrameAdaptError("complex structure does not pair frame vectors");
                j = r;
                sign = v;
            }
        }
        if (j < 0 || used[j]) throw FrameAdaptError("complex structure does not pair frame vectors");
        used[i] = used[j] = true;
        if (sign > 0) {
            perm.push_back(i);
            perm.push_back(j);
        } else {
            // I e_i = -e_j implies I e_j = +e_i
            perm.push_back(j);
            perm.push_back(i);
        }
    }
    return perm;
}

KahlerStructure apply_frame_permutation(const KahlerStructure& ks, const std::vector<int>& perm) {
    int d = ks.dim();
    std::vector<int> inv(d);
    for (int a = 0; a < d; ++a) inv[perm[a]] = a;

    LieAlgebraData alg(d);
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) {
                double v = ks.alg.bracket_coef(perm[k], perm[i], perm[j]);
                if (v != 0.0) alg.set_bracket(k, i, j, v);
            }
    Eigen::MatrixXd I(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) I(r, c) = ks.Imat(perm[r], perm[c]);

    Form<Cd> w(d, 2);
    for (const auto& [mask, coef] : ks.omega.terms()) {
        uint32_t mm = mask;
        int a = __builtin_ctz(mm);
        mm &= mm - 1;
        int b = __builtin_ctz(mm);
        int pa = inv[a], pb = inv[b];
        Cd c = coef;
        if (pa > pb) {
            std::swap(pa, pb);
            c = -c;
        }
        w.add_term((uint32_t(1) << pa) | (uint32_t(1) << pb), c);
    }
    KahlerStructure out;
    out.alg = alg;
    out.Imat = I;
    out.omega = w;
    return out;
}

std::vector<Form<Cd>> unitary_coframe(const KahlerStructure& ks) {
    if (!imat_is_standard(ks.Imat))
        throw FrameAdaptError("unitary_coframe: frame is not I-adapted; reorder first");
    std::vector<Form<Cd>> theta;
    for (int k = 0; k < ks.n(); ++k) theta.push_back(theta_form<Cd>(ks.n(), k));
    return theta;
}

FormMatrix<Cd> levi_civita(const KahlerStructure& ks) { return levi_civita_form(ks.alg.sc); }

CurvatureTensor curvature(const FormMatrix<Cd>& conn, const LieAlgebraData& alg) {
    CurvatureTensor R;
    R.n = alg.dim() / 2;
    R.real = curvature_form(conn, alg.sc);
    return R;
}

CurvatureTensor curvature_from_blocks(const CurvBlocks<Cd>& blocks) {
    CurvatureTensor R;
    R.n = blocks.n;
    R.real = realify_blocks(blocks);
    return R;
}

double bianchi_residual(const CurvatureTensor& R) {
    int d = 2 * R.n;
    double worst = 0.0;
    for (int l = 0; l < d; ++l)
        for (int k = 0; k < d; ++k)
            for (int i = k + 1; i < d; ++i)
                for (int j = i + 1; j < d; ++j) {
                    Cd s = R.real.at(l, k).eval2(i, j) + R.real.at(l, i).eval2(j, k) +
                           R.real.at(l, j).eval2(k, i);
                    worst = std::max(worst, max_abs(s));
                }
    return worst;
}

std::pair<Eigen::MatrixXd, double> ricci_scalar(const CurvatureTensor& R) {
    int d = 2 * R.n;
    Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(d, d);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
            double s = 0.0;
            for (int i = 0; i < d; ++i) s += R.real.at(i, k).eval2(i, j).re;
            ric(j, k) = s;
        }
    return {ric, ric.trace() / double(d)};
}

CurvBlocks<Cd> complexify(const CurvatureTensor& R, double tol) {
    double defect = 0.0;
    CurvBlocks<Cd> B = complexify_form(R.real, &defect);
    if (defect > tol)
        throw NotKahlerCurvature("curvature has a non-(1,1) component: " + std::to_string(defect));
    return B;
}

} // namespace psk
