#include "psk/verify.hpp"

#include <Eigen/SVD>

namespace psk {

namespace {

// theta^a and conj(theta^a) evaluated on the real frame vector e_p.
Cd theta_on(int a, int p) {
    if (p == 2 * a) return Cd(1.0);
    if (p == 2 * a + 1) return Cd(0.0, 1.0);
    return Cd(0.0);
}
Cd theta_bar_on(int a, int p) { return conj(theta_on(a, p)); }

// Complex connection forms A^k_h with nabla theta^k = -A^k_h (x) theta^h,
// read off the real Koszul matrix of an I-parallel connection.
std::vector<std::vector<Form<Cd>>> complex_connection(const FormMatrix<Cd>& conn, int n) {
    std::vector<std::vector<Form<Cd>>> A(n, std::vector<Form<Cd>>(n, Form<Cd>(2 * n, 1)));
    for (int k = 0; k < n; ++k)
        for (int h = 0; h < n; ++h) {
            Form<Cd> f = conn.at(2 * k, 2 * h);
            for (const auto& [mask, c] : conn.at(2 * k + 1, 2 * h).terms())
                f.add_term(mask, Cd(0.0, 1.0) * c);
            A[k][h] = f;
        }
    return A;
}

// (nabla_{e_p} sigma)_{abc} for constant-coefficient sigma.
Cd nabla_sigma(const std::vector<std::vector<Form<Cd>>>& A, const Deviance& d, int p, int a,
               int b, int c) {
    int n = d.n();
    Cd s(0);
    for (int k = 0; k < n; ++k) {
        s -= A[k][a].eval1(p) * d.sigma(k, b, c);
        s -= A[k][b].eval1(p) * d.sigma(a, k, c);
        s -= A[k][c].eval1(p) * d.sigma(a, b, k);
    }
    return s;
}

} // namespace

double d1_residual(const CurvatureTensor& Rlc, const Deviance& d, double tol) {
    CurvBlocks<Cd> sum = complexify(Rlc, tol) + proj_blocks<Cd>(Rlc.n) + eta_bracket_blocks(d);
    return sum.max_abs();
}

D2Result d2_check(const KahlerStructure& ks, const FormMatrix<Cd>& conn, const Deviance& d,
                  double tol) {
    const int n = ks.n();
    const int dim = 2 * n;
    auto A = complex_connection(conn, n);

    struct Row {
        Eigen::RowVectorXd coef;
        double rhs;
    };
    std::vector<Row> rows;
    auto push_complex = [&](const Eigen::RowVectorXcd& coef, Cd rhs) {
        Row re{Eigen::RowVectorXd(dim), rhs.re};
        Row im{Eigen::RowVectorXd(dim), rhs.im};
        for (int i = 0; i < dim; ++i) {
            re.coef[i] = coef[i].real();
            im.coef[i] = coef[i].imag();
        }
        rows.push_back(re);
        rows.push_back(im);
    };

    // d lambda = omega: -sum_i lambda_i c^i_{pq} = omega(e_p, e_q)
    for (int p = 0; p < dim; ++p)
        for (int q = p + 1; q < dim; ++q) {
            Eigen::RowVectorXcd coef = Eigen::RowVectorXcd::Zero(dim);
            for (int i = 0; i < dim; ++i) coef[i] = -ks.alg.bracket_coef(i, p, q);
            push_complex(coef, ks.omega.eval2(p, q));
        }

    // d^LC sigma + 4i lambda ^ sigma = 0 on frame pairs, legs (b <= c)
    for (int p = 0; p < dim; ++p)
        for (int q = p + 1; q < dim; ++q)
            for (int b = 0; b < n; ++b)
                for (int c = b; c < n; ++c) {
                    Cd t0(0);
                    Cd s_p(0), s_q(0);
                    for (int a = 0; a < n; ++a) {
                        t0 += nabla_sigma(A, d, p, a, b, c) * theta_on(a, q);
                        t0 -= nabla_sigma(A, d, q, a, b, c) * theta_on(a, p);
                        s_p += d.sigma(a, b, c) * theta_on(a, p);
                        s_q += d.sigma(a, b, c) * theta_on(a, q);
                    }
                    Eigen::RowVectorXcd coef = Eigen::RowVectorXcd::Zero(dim);
                    coef[p] += std::complex<double>(0.0, 4.0) * std::complex<double>(s_q.re, s_q.im);
                    coef[q] -= std::complex<double>(0.0, 4.0) * std::complex<double>(s_p.re, s_p.im);
                    push_complex(coef, -t0);
                }

    Eigen::MatrixXd M(rows.size(), dim);
    Eigen::VectorXd rhs(rows.size());
    for (size_t r = 0; r < rows.size(); ++r) {
        M.row(r) = rows[r].coef;
        rhs[r] = rows[r].rhs;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-12);
    Eigen::VectorXd lambda = svd.solve(rhs); // minimal-norm least-squares solution

    D2Result out;
    out.residual = (M * lambda - rhs).cwiseAbs().maxCoeff();
    out.feasible = out.residual < tol;
    if (out.feasible) {
        Form<Cd> lf(dim, 1);
        for (int i = 0; i < dim; ++i) lf.add_term(uint32_t(1) << i, Cd(lambda[i]));
        out.lambda = lf;
    }
    return out;
}

double ricci_identity(const Eigen::MatrixXd& ric, const Deviance& d) {
    int n = d.n();
    int dim = 2 * n;
    // P_{uk} = sum_{j,h} conj(eta^h_{u,j}) eta^j_{k,h}
    std::vector<Cd> P(size_t(n) * n, Cd(0));
    for (int u = 0; u < n; ++u)
        for (int k = 0; k < n; ++k) {
            Cd s(0);
            for (int j = 0; j < n; ++j)
                for (int h = 0; h < n; ++h) s += conj(d.eta(h, u, j)) * d.eta(j, k, h);
            P[size_t(u) * n + k] = s;
        }
    double worst = 0.0;
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
            Cd t(0);
            for (int u = 0; u < n; ++u)
                for (int k = 0; k < n; ++k) t += P[size_t(u) * n + k] * theta_bar_on(u, a) * theta_on(k, b);
            double h_term = 2.0 * t.re; // realify
            double lhs = ric(a, b) + 2.0 * (n + 1) * (a == b ? 1.0 : 0.0) - h_term;
            worst = std::max(worst, std::abs(lhs));
        }
    return worst;
}

double scalar_identity(double scal, int n, const Deviance& d) {
    return std::abs(scal + 2.0 * (n + 1) - (2.0 / n) * eta_norm(d));
}

double scalar_bound_check(int n, const Deviance& d) {
    return -2.0 * (n + 1) + (2.0 / n) * eta_norm(d);
}

PskVerdict verify(const KahlerStructure& ks, const Deviance& d, double tol) {
    PskVerdict v;
    FormMatrix<Cd> conn = levi_civita(ks);
    CurvatureTensor R = curvature(conn, ks.alg);
    v.d1_residual = d1_residual(R, d, tol);
    D2Result d2 = d2_check(ks, conn, d, tol);
    v.d2_feasible = d2.feasible;
    v.d2_lambda = d2.lambda;
    auto [ric, scal] = ricci_scalar(R);
    v.scal = scal;
    v.ricci_residual = ricci_identity(ric, d);
    v.scalar_residual = scalar_identity(scal, ks.n(), d);
    v.accepted = v.d1_residual < tol && v.d2_feasible;
    return v;
}

} // namespace psk
