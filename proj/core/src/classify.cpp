#include "psk/classify.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>

namespace psk {

const char* case_name(CaseId id) {
    switch (id) {
        case CaseId::I: return "I";
        case CaseId::II: return "II";
        case CaseId::III: return "III";
        case CaseId::IV: return "IV";
        case CaseId::V: return "V";
        case CaseId::VI: return "VI";
        case CaseId::VII: return "VII";
        case CaseId::VIII: return "VIII";
        case CaseId::IX: return "IX";
    }
    return "?";
}

KahlerStructure builtin_family(CaseId id, const FamilyParams& p) {
    const double a = p.a, b = p.b, delta = p.delta;
    if (a <= 0.0) throw std::domain_error("builtin_family: a must be positive");
    bool needs_delta = id == CaseId::IV || id == CaseId::V || id == CaseId::VIII || id == CaseId::IX;
    if (needs_delta && delta <= 0.0) throw std::domain_error("builtin_family: delta must be positive");
    if (id == CaseId::III && b <= 0.0) throw std::domain_error("builtin_family: b must be positive");

    LieAlgebraData alg(4);
    const double s = std::sqrt(delta);
    switch (id) {
        case CaseId::I:
            alg.set_bracket(1, 0, 1, a);
            break;
        case CaseId::II:
            alg.set_bracket(3, 0, 2, -1.0);
            alg.set_bracket(2, 0, 3, 1.0);
            break;
        case CaseId::III:
            alg.set_bracket(1, 0, 1, a);
            alg.set_bracket(3, 2, 3, b);
            break;
        case CaseId::IV:
            alg.set_bracket(1, 0, 1, a);
            alg.set_bracket(3, 0, 2, -delta * a);
            alg.set_bracket(2, 0, 3, delta * a);
            break;
        case CaseId::V:
            alg.set_bracket(1, 0, 1, a);
            alg.set_bracket(3, 0, 2, delta * a);
            alg.set_bracket(2, 0, 3, -delta * a);
            break;
        case CaseId::VI:
            alg.set_bracket(0, 0, 1, -2.0 * a);
            alg.set_bracket(3, 0, 2, 2.0 * a);
            alg.set_bracket(2, 1, 2, -a);
            alg.set_bracket(3, 1, 3, a);
            break;
        case CaseId::VII:
            alg.set_bracket(3, 0, 1, 2.0 * a);
            alg.set_bracket(0, 0, 2, -a);
            alg.set_bracket(1, 1, 2, -a);
            alg.set_bracket(3, 2, 3, 2.0 * a);
            break;
        case CaseId::VIII:
            alg.set_bracket(3, 0, 1, 2.0 * a * s);
            alg.set_bracket(0, 0, 2, -a * s);
            alg.set_bracket(1, 0, 2, 2.0 * a / s);
            alg.set_bracket(0, 1, 2, -2.0 * a / s);
            alg.set_bracket(1, 1, 2, -a * s);
            alg.set_bracket(3, 2, 3, 2.0 * a * s);
            break;
        case CaseId::IX:
            alg.set_bracket(2, 0, 1, -2.0 * a * s);
            alg.set_bracket(0, 0, 3, -a * s);
            alg.set_bracket(1, 0, 3, -2.0 * a / s);
            alg.set_bracket(0, 1, 3, 2.0 * a / s);
            alg.set_bracket(1, 1, 3, -a * s);
            alg.set_bracket(2, 2, 3, -2.0 * a * s);
            break;
    }
    Eigen::MatrixXd I = Eigen::MatrixXd::Zero(4, 4);
    I(1, 0) = 1;
    I(0, 1) = -1;
    I(3, 2) = 1;
    I(2, 3) = -1;
    return make_kahler(alg, I);
}

namespace {

// Degree-2 masks in dimension 4, fixed order.
const std::vector<uint32_t>& two_masks() {
    static std::vector<uint32_t> masks = [] {
        std::vector<uint32_t> m;
        for (uint32_t x = 0; x < 16; ++x)
            if (__builtin_popcount(x) == 2) m.push_back(x);
        return m;
    }();
    return masks;
}

Eigen::VectorXd vectorize(const FormMatrix<Cd>& m) {
    const auto& masks = two_masks();
    Eigen::VectorXd v(4 * 4 * masks.size());
    int at = 0;
    for (int l = 0; l < 4; ++l)
        for (int j = 0; j < 4; ++j)
            for (uint32_t mask : masks) v[at++] = m.at(l, j).coeff(mask).re;
    return v;
}

} // namespace

CurvatureFit fit_curvature(const CurvatureTensor& R) {
    Eigen::MatrixXd basis(4 * 4 * two_masks().size(), 3);
    basis.col(0) = vectorize(model_curvature(ModelKind::h1).real);
    basis.col(1) = vectorize(model_curvature(ModelKind::h2).real);
    basis.col(2) = vectorize(model_curvature(ModelKind::proj, 2).real);
    Eigen::VectorXd target = vectorize(R.real);
    Eigen::Vector3d coef = basis.colPivHouseholderQr().solve(target);
    CurvatureFit fit;
    fit.h1 = coef[0];
    fit.h2 = coef[1];
    fit.proj = coef[2];
    fit.residual = (basis * coef - target).cwiseAbs().maxCoeff();
    return fit;
}

std::vector<CurvatureTableRow> curvature_table(const std::vector<double>& delta_grid, double a) {
    std::vector<CurvatureTableRow> rows;
    auto push = [&](CaseId id, const FamilyParams& p) {
        CurvatureTableRow row{id, p, {}};
        KahlerStructure ks = builtin_family(id, p);
        row.fit = fit_curvature(curvature(levi_civita(ks), ks.alg));
        rows.push_back(row);
    };
    push(CaseId::I, {a, 1.0, 1.0});
    push(CaseId::II, {a, 1.0, 1.0});
    push(CaseId::III, {a, a, 1.0});
    push(CaseId::III, {std::sqrt(2.0), 2.0, 1.0});
    for (double dl : delta_grid) push(CaseId::IV, {a, 1.0, dl});
    for (double dl : delta_grid) push(CaseId::V, {a, 1.0, dl});
    push(CaseId::VI, {a, 1.0, 1.0});
    push(CaseId::VII, {a, 1.0, 1.0});
    for (double dl : delta_grid) push(CaseId::VIII, {a, 1.0, dl});
    for (double dl : delta_grid) push(CaseId::IX, {a, 1.0, dl});
    return rows;
}

SolutionFamily solve_type_i(double a, double b, double tol) {
    if (a < 0 || b < 0) throw std::domain_error("solve_type_i: a, b must be nonnegative");
    SolutionFamily fam;
    // Norm system: |x|^2 = 1 - a^2/2 + s, |y|^2 = 1 - s, |z|^2 = s,
    // |w|^2 = 2 - b^2/2 - s, s in [0,1]; orthogonality kills the mixed branch.
    // Branch z = 0 (s = 0): |y| = 1 forces x = w = 0, so a^2 = 2, b^2 = 4.
    if (std::abs(a * a - 2.0) < tol && std::abs(b * b - 4.0) < tol) {
        fam.kind = SolutionFamily::circle_family;
        fam.base = {Cd(0), Cd(1), Cd(0), Cd(0)};
        return fam;
    }
    // Branch y = 0 (s = 1): |z| = 1 forces x = w = 0, so a^2 = 4, b^2 = 2.
    if (std::abs(a * a - 4.0) < tol && std::abs(b * b - 2.0) < tol) {
        fam.kind = SolutionFamily::circle_family;
        fam.base = {Cd(0), Cd(0), Cd(1), Cd(0)};
        return fam;
    }
    // Branch y, z != 0 ends in 0 = -t^2/(s(1-s)) with t != 0: no solutions.
    fam.kind = SolutionFamily::empty;
    return fam;
}

SolutionFamily solve_type_ii(double a, int b, double tol) {
    if (a <= 0) throw std::domain_error("solve_type_ii: a must be positive");
    if (b != 0 && b != 1) throw std::domain_error("solve_type_ii: b must be 0 or 1");
    SolutionFamily fam;
    // Norm system: |x|^2 = 1 - a^2 + s, |y|^2 = 1 - a^2 - s, |z|^2 = s,
    // |w|^2 = 2 - 2a^2 + 3 a^2 b - s, s in [0, 1-a^2]. All branches force a = 1,
    // s = 0, x = y = z = 0, |w|^2 = 3b.
    if (std::abs(a - 1.0) < tol) {
        if (b == 1) {
            fam.kind = SolutionFamily::circle_family;
            fam.base = {Cd(0), Cd(0), Cd(0), Cd(std::sqrt(3.0))};
        } else {
            fam.kind = SolutionFamily::zero_only;
        }
        return fam;
    }
    fam.kind = SolutionFamily::empty;
    return fam;
}

namespace {

using C = std::complex<double>;

// [eta ^ conj(eta)] block entry in the (x,y,z,w) coordinates. Indices are
// 0/1, so eta^j_{k,t} = V[j+k+t].
inline C bracket_entry(const std::array<C, 4>& V, int k, int h, int j, int m) {
    C s = 0.0;
    for (int t = 0; t < 2; ++t) s += std::conj(V[j + k + t]) * V[t + h + m];
    return s;
}

struct LmProblem {
    std::array<C, 16> target; // T[k,h,j,m], flattened

    void residual(const std::array<C, 4>& V, Eigen::Matrix<double, 32, 1>& r) const {
        int at = 0;
        for (int k = 0; k < 2; ++k)
            for (int h = 0; h < 2; ++h)
                for (int j = 0; j < 2; ++j)
                    for (int m = 0; m < 2; ++m) {
                        C e = bracket_entry(V, k, h, j, m) + target[((k * 2 + h) * 2 + j) * 2 + m];
                        r[at++] = e.real();
                        r[at++] = e.imag();
                    }
    }

    void jacobian(const std::array<C, 4>& V, Eigen::Matrix<double, 32, 8>& J) const {
        J.setZero();
        int at = 0;
        for (int k = 0; k < 2; ++k)
            for (int h = 0; h < 2; ++h)
                for (int j = 0; j < 2; ++j)
                    for (int m = 0; m < 2; ++m) {
                        for (int g = 0; g < 4; ++g) {
                            C dre = 0.0, dim = 0.0;
                            for (int t = 0; t < 2; ++t) {
                                int alpha = j + k + t, beta = t + h + m;
                                if (g == alpha) {
                                    dre += V[beta];
                                    dim += C(0, -1) * V[beta];
                                }
                                if (g == beta) {
                                    dre += std::conj(V[alpha]);
                                    dim += std::conj(V[alpha]) * C(0, 1);
                                }
                            }
                            J(at, 2 * g) = dre.real();
                            J(at + 1, 2 * g) = dre.imag();
                            J(at, 2 * g + 1) = dim.real();
                            J(at + 1, 2 * g + 1) = dim.imag();
                        }
                        at += 2;
                    }
    }
};

} // namespace

BruteForceResult brute_force_solutions(const CurvatureTensor& Rlc, int trials, uint64_t seed) {
    if (trials < 1) throw std::domain_error("brute_force_solutions: trials must be >= 1");
    LmProblem prob;
    CurvBlocks<Cd> T = complexify(Rlc) + proj_blocks<Cd>(2);
    for (int k = 0; k < 2; ++k)
        for (int h = 0; h < 2; ++h)
            for (int j = 0; j < 2; ++j)
                for (int m = 0; m < 2; ++m) {
                    Cd t = T.at(k, h, j, m);
                    prob.target[((k * 2 + h) * 2 + j) * 2 + m] = C(t.re, t.im);
                }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.5);

    BruteForceResult out;
    out.floor = std::numeric_limits<double>::infinity();
    Eigen::Matrix<double, 32, 1> r, r_new;
    Eigen::Matrix<double, 32, 8> J;

    for (int trial = 0; trial < trials; ++trial) {
        std::array<C, 4> V;
        for (auto& v : V) v = C(gauss(rng), gauss(rng));
        prob.residual(V, r);
        double f = r.squaredNorm();
        double mu = 1e-3;
        for (int iter = 0; iter < 80; ++iter) {
            if (f < 1e-18) break;
            prob.jacobian(V, J);
            Eigen::Matrix<double, 8, 8> H = J.transpose() * J;
            Eigen::Matrix<double, 8, 1> g = J.transpose() * r;
            if (g.cwiseAbs().maxCoeff() < 1e-11) break;
            H.diagonal().array() += mu;
            Eigen::Matrix<double, 8, 1> step = H.ldlt().solve(-g);
            std::array<C, 4> Vn = V;
            for (int i = 0; i < 4; ++i) Vn[i] += C(step[2 * i], step[2 * i + 1]);
            prob.residual(Vn, r_new);
            double fn = r_new.squaredNorm();
            if (fn < f) {
                double gain = f - fn;
                V = Vn;
                r = r_new;
                f = fn;
                mu = std::max(mu / 3.0, 1e-12);
                if (step.cwiseAbs().maxCoeff() < 1e-14) break;
                if (gain < 1e-10 * f) break;
            } else {
                mu *= 4.0;
                if (mu > 1e8) break;
            }
        }
        double inf_norm = r.cwiseAbs().maxCoeff();
        out.floor = std::min(out.floor, inf_norm);
        if (inf_norm < 1e-6)
            out.points.push_back({Cd(V[0].real(), V[0].imag()), Cd(V[1].real(), V[1].imag()),
                                  Cd(V[2].real(), V[2].imag()), Cd(V[3].real(), V[3].imag())});
    }
    return out;
}

double family_distance(const SolutionFamily& fam, const std::array<Cd, 4>& point) {
    double p2 = 0.0;
    for (const auto& c : point) p2 += abs2(c);
    if (fam.kind == SolutionFamily::zero_only) return std::sqrt(p2);
    if (fam.kind == SolutionFamily::empty) return std::numeric_limits<double>::infinity();
    double b2 = 0.0;
    C inner = 0.0;
    for (int i = 0; i < 4; ++i) {
        b2 += abs2(fam.base[i]);
        inner += std::conj(C(fam.base[i].re, fam.base[i].im)) * C(point[i].re, point[i].im);
    }
    double d2 = p2 + b2 - 2.0 * std::abs(inner);
    return std::sqrt(std::max(0.0, d2));
}

namespace {

std::string sigma_text_from_base(const std::array<Cd, 4>& base, SolutionFamily::Kind kind) {
    if (kind != SolutionFamily::circle_family) return "0";
    // cubic coefficients c = (x/2, 3y/2, 3z/2, w/2)
    double c[4] = {base[0].re / 2.0, 1.5 * base[1].re, 1.5 * base[2].re, base[3].re / 2.0};
    const char* mono[4] = {"(theta1)^3", "(theta1)^2 theta2", "theta1 (theta2)^2", "(theta2)^3"};
    std::string out;
    for (int i = 0; i < 4; ++i) {
        if (c[i] == 0.0) continue;
        if (!out.empty()) out += " + ";
        char buf[64];
        snprintf(buf, sizeof buf, "%.12g", c[i]);
        out += std::string(buf) + " e^{i alpha} " + mono[i];
    }
    return out.empty() ? "0" : out;
}

} // namespace

StructureClassification classify_structure(const KahlerStructure& ks, double tol) {
    StructureClassification row;
    FormMatrix<Cd> conn = levi_civita(ks);
    CurvatureTensor R = curvature(conn, ks.alg);
    row.fit = fit_curvature(R);
    for (int k = 0; k < 2; ++k)
        row.dtheta.push_back(ce_differential(theta_form<Cd>(2, k), ks.alg.sc));

    // Dispatch on the fitted curvature type.
    SolutionFamily fam;
    if (std::abs(row.fit.proj) < tol) {
        double a_eff = std::sqrt(std::max(0.0, row.fit.h1));
        double b_eff = std::sqrt(std::max(0.0, row.fit.h2));
        fam = solve_type_i(a_eff, b_eff, tol);
    } else {
        double a_eff = std::sqrt(-row.fit.proj);
        double h2_over = -row.fit.h2 / (6.0 * a_eff * a_eff);
        int b_eff = std::abs(h2_over - 1.0) < tol ? 1 : 0;
        fam = solve_type_ii(a_eff, b_eff, tol);
    }
    row.family = fam;

    if (fam.kind == SolutionFamily::empty) {
        row.accepted = false;
        row.reason = "D1 unsolvable";
        return row;
    }
    Deviance dev = fam.kind == SolutionFamily::zero_only
                       ? Deviance::zero(2)
                       : Deviance::from_cubic4({fam.base[0] / Cd(2.0), Cd(1.5) * fam.base[1],
                                                Cd(1.5) * fam.base[2], fam.base[3] / Cd(2.0)});
    D2Result d2 = d2_check(ks, conn, dev, tol);
    if (!d2.feasible) {
        row.accepted = false;
        row.reason = "D2 infeasible";
        return row;
    }
    row.accepted = true;
    row.reason = "accepted";
    row.lambda = d2.lambda;
    row.sigma_text = sigma_text_from_base(fam.base, fam.kind);
    return row;
}

namespace {

ClassifyRow classify_cell(CaseId id, const FamilyParams& p, double tol) {
    ClassifyRow row;
    static_cast<StructureClassification&>(row) = classify_structure(builtin_family(id, p), tol);
    row.id = id;
    row.params = p;
    return row;
}

} // namespace

ClassifyReport classify(const std::vector<double>& delta_grid, double tol) {
    ClassifyReport rep;
    rep.delta_grid = delta_grid;
    rep.rows.push_back(classify_cell(CaseId::I, {1.0, 1.0, 1.0}, tol));
    rep.rows.push_back(classify_cell(CaseId::II, {1.0, 1.0, 1.0}, tol));
    rep.rows.push_back(classify_cell(CaseId::III, {std::sqrt(2.0), 2.0, 1.0}, tol));
    for (double dl : delta_grid) rep.rows.push_back(classify_cell(CaseId::IV, {1.0, 1.0, dl}, tol));
    for (double dl : delta_grid) rep.rows.push_back(classify_cell(CaseId::V, {1.0, 1.0, dl}, tol));
    rep.rows.push_back(classify_cell(CaseId::VI, {1.0, 1.0, 1.0}, tol));
    rep.rows.push_back(classify_cell(CaseId::VII, {1.0, 1.0, 1.0}, tol));
    for (double dl : delta_grid)
        rep.rows.push_back(classify_cell(CaseId::VIII, {1.0 / std::sqrt(dl), 1.0, dl}, tol));
    for (double dl : delta_grid)
        rep.rows.push_back(classify_cell(CaseId::IX, {1.0 / std::sqrt(dl), 1.0, dl}, tol));

    Eigen::MatrixXd I = Eigen::MatrixXd::Zero(4, 4);
    I(1, 0) = 1;
    I(0, 1) = -1;
    I(3, 2) = 1;
    I(2, 3) = -1;
    rep.abelian = classify_structure(make_kahler(LieAlgebraData(4), I), tol);
    return rep;
}

} // namespace psk
