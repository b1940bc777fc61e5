#include <doctest.h>

#include <random>

#include "psk/classify.hpp"
#include "psk/deviance.hpp"

using namespace psk;

namespace {

// Expected Levi-Civita matrices of the classification table at calibrated
// parameters. Entries are (coefficient, covector index 1..4) pairs.
struct E {
    int row, col;
    double coef;
    int cov;
};

FormMatrix<Cd> expected_matrix(const std::vector<E>& upper) {
    FormMatrix<Cd> m(4, 4, 4, 1);
    for (const auto& e : upper) {
        m.at(e.row - 1, e.col - 1).add_term(uint32_t(1) << (e.cov - 1), Cd(e.coef));
        m.at(e.col - 1, e.row - 1).add_term(uint32_t(1) << (e.cov - 1), Cd(-e.coef));
    }
    return m;
}

LieAlgebraData perturbed_case_iii() {
    KahlerStructure ks = builtin_family(CaseId::III, {std::sqrt(2.0), 2.0, 1.0});
    LieAlgebraData alg = ks.alg;
    // push a u2-component into [u3,u4]; this breaks Jacobi on (u1,u3,u4)
    alg.sc.add(1, 2, 3, Cd(0.1));
    return alg;
}

} // namespace

TEST_CASE("jacobi residual") {
    CHECK(jacobi_residual(LieAlgebraData(4)) == 0.0);
    KahlerStructure iii = builtin_family(CaseId::III, {std::sqrt(2.0), 2.0, 1.0});
    CHECK(jacobi_residual(iii.alg) == 0.0);
    // cyclic-sum oracle: the perturbation leaves [[u3,u4],u1] = 0.1 [u2,u1]
    double res = jacobi_residual(perturbed_case_iii());
    CHECK(res == doctest::Approx(0.1 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(res > 0.0);
}

TEST_CASE("kahler_check accepts the table families") {
    for (auto id : {CaseId::I, CaseId::II, CaseId::III, CaseId::IV, CaseId::V, CaseId::VI,
                    CaseId::VII, CaseId::VIII, CaseId::IX}) {
        FamilyParams p{1.0, 1.0, 1.0};
        KahlerStructure ks = builtin_family(id, p);
        CHECK(jacobi_residual(ks.alg) < 1e-12);
        KahlerReport rep = kahler_check(ks);
        CAPTURE(case_name(id));
        CHECK(rep.worst() < 1e-12);
        CHECK(rep.closed_ok);
    }
}

TEST_CASE("kahler_check flags a wrong complex structure") {
    KahlerStructure ks = builtin_family(CaseId::I, {1.0, 1.0, 1.0});
    // pair (u1,u4) and (u3,u2) instead of the standard pairing
    Eigen::MatrixXd I = Eigen::MatrixXd::Zero(4, 4);
    I(3, 0) = 1;
    I(0, 3) = -1;
    I(1, 2) = 1;
    I(2, 1) = -1;
    KahlerStructure broken = make_kahler(ks.alg, I);
    KahlerReport rep = kahler_check(broken);
    CHECK((rep.d_omega > 1e-6 || rep.nijenhuis > 1e-6));
}

TEST_CASE("levi-civita matrices match the pinned reference entries") {
    auto check_case = [](CaseId id, const FamilyParams& p, const std::vector<E>& upper) {
        KahlerStructure ks = builtin_family(id, p);
        FormMatrix<Cd> conn = levi_civita(ks);
        FormMatrix<Cd> want = expected_matrix(upper);
        CAPTURE(case_name(id));
        CHECK((conn - want).max_abs() < 1e-12);
    };
    double r2 = std::sqrt(2.0);
    check_case(CaseId::III, {r2, 2.0, 1.0}, {{1, 2, r2, 2}, {3, 4, 2.0, 4}});
    check_case(CaseId::VI, {1.0, 1.0, 1.0},
               {{1, 2, -2, 1}, {1, 3, 1, 4}, {1, 4, 1, 3}, {2, 3, -1, 3}, {2, 4, 1, 4}, {3, 4, -1, 1}});
    check_case(CaseId::VII, {1.0, 1.0, 1.0},
               {{1, 2, 1, 4}, {1, 3, -1, 1}, {1, 4, 1, 2}, {2, 3, -1, 2}, {2, 4, -1, 1}, {3, 4, 2, 4}});
    check_case(CaseId::VIII, {1.0, 1.0, 1.0},
               {{1, 2, 2, 3}, {1, 2, 1, 4}, {1, 3, -1, 1}, {1, 4, 1, 2}, {2, 3, -1, 2},
                {2, 4, -1, 1}, {3, 4, 2, 4}});
    check_case(CaseId::IX, {1.0, 1.0, 1.0},
               {{1, 2, -1, 3}, {1, 2, -2, 4}, {1, 3, -1, 2}, {1, 4, -1, 1}, {2, 3, 1, 1},
                {2, 4, -1, 2}, {3, 4, -2, 3}});

    // abelian: flat torus, zero connection
    Eigen::MatrixXd I = Eigen::MatrixXd::Zero(4, 4);
    I(1, 0) = 1;
    I(0, 1) = -1;
    I(3, 2) = 1;
    I(2, 3) = -1;
    KahlerStructure flat = make_kahler(LieAlgebraData(4), I);
    CHECK(levi_civita(flat).max_abs() == 0.0);
}

TEST_CASE("koszul output is torsion-free and metric on the nine table families") {
    for (auto id : {CaseId::I, CaseId::II, CaseId::III, CaseId::IV, CaseId::V, CaseId::VI,
                    CaseId::VII, CaseId::VIII, CaseId::IX}) {
        KahlerStructure ks = builtin_family(id, {1.0, 1.0, 1.0});
        FormMatrix<Cd> conn = levi_civita(ks);
        CAPTURE(case_name(id));
        CHECK(torsion_residual_form(conn, ks.alg.sc) < 1e-12);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) CHECK((conn.at(i, j) + conn.at(j, i)).max_abs() < 1e-12);
    }
}

TEST_CASE("unitary coframe reproduces the hermitian form") {
    // sum conj(theta^k) (x) theta^k = g + i omega on frame pairs
    KahlerStructure ks = builtin_family(CaseId::VIII, {1.0, 1.0, 1.0});
    auto theta = unitary_coframe(ks);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            Cd h(0);
            for (const auto& th : theta) h += conj(th.eval1(a)) * th.eval1(b);
            CHECK(h.re == doctest::Approx(a == b ? 1.0 : 0.0));
            CHECK(h.im == doctest::Approx(ks.omega.eval2(a, b).re));
        }
}

TEST_CASE("koszul output is torsion-free and metric on random metric algebras") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    int checked = 0;
    while (checked < 100) {
        StructureConstants<Cd> sc(4);
        for (int j = 1; j < 4; ++j)
            for (int k = 1; k < 4; ++k) sc.add(k, 0, j, Cd(coef(rng)));
        if (jacobi_residual(sc) >= 1e-12) continue;
        ++checked;
        FormMatrix<Cd> conn = levi_civita_form(sc);
        CHECK(torsion_residual_form(conn, sc) < 1e-12);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                CHECK((conn.at(i, j) + conn.at(j, i)).max_abs() < 1e-12);
    }
}

TEST_CASE("curvature of the table families") {
    // case I, a = 1: exactly H1
    KahlerStructure ks1 = builtin_family(CaseId::I, {1.0, 1.0, 1.0});
    CurvatureTensor R1 = curvature(levi_civita(ks1), ks1.alg);
    CHECK((R1.real - model_curvature(ModelKind::h1).real).max_abs() < 1e-14);

    // case III at (sqrt2, 2): 2 H1 + 4 H2
    KahlerStructure ks3 = builtin_family(CaseId::III, {std::sqrt(2.0), 2.0, 1.0});
    CurvatureTensor R3 = curvature(levi_civita(ks3), ks3.alg);
    CurvatureFit fit = fit_curvature(R3);
    CHECK(fit.h1 == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.h2 == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(std::abs(fit.proj) < 1e-12);
    CHECK(fit.residual < 1e-12);
    CHECK(bianchi_residual(R3) < 1e-12);

    // abelian: flat
    Eigen::MatrixXd I = Eigen::MatrixXd::Zero(4, 4);
    I(1, 0) = 1;
    I(0, 1) = -1;
    I(3, 2) = 1;
    I(2, 3) = -1;
    KahlerStructure flat = make_kahler(LieAlgebraData(4), I);
    CHECK(curvature(levi_civita(flat), flat.alg).real.max_abs() == 0.0);
}

TEST_CASE("ricci and the dimension-normalized scalar") {
    for (int n : {1, 2, 3}) {
        CurvatureTensor P = model_curvature(ModelKind::proj, n);
        auto [ric, scal] = ricci_scalar(P);
        CHECK((ric - 2.0 * (n + 1) * Eigen::MatrixXd::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff() <
              1e-12);
        CHECK(scal == doctest::Approx(2.0 * (n + 1)).epsilon(1e-12));
    }

    KahlerStructure ks3 = builtin_family(CaseId::III, {std::sqrt(2.0), 2.0, 1.0});
    auto [ric3, scal3] = ricci_scalar(curvature(levi_civita(ks3), ks3.alg));
    Eigen::Vector4d want(-2, -2, -4, -4);
    CHECK((ric3 - Eigen::MatrixXd(want.asDiagonal())).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(scal3 == doctest::Approx(-3.0).epsilon(1e-12));

    KahlerStructure ks7 = builtin_family(CaseId::VII, {1.0, 1.0, 1.0});
    auto [ric7, scal7] = ricci_scalar(curvature(levi_civita(ks7), ks7.alg));
    CHECK(scal7 == doctest::Approx(-6.0).epsilon(1e-12));
    CHECK((ric7 + 6.0 * Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("frame adaptation") {
    // standard structure: identity permutation, theta^1 = u1 + i u2
    KahlerStructure ks = builtin_family(CaseId::I, {1.0, 1.0, 1.0});
    CHECK(imat_is_standard(ks.Imat));
    auto theta = unitary_coframe(ks);
    CHECK(theta.size() == 2);
    CHECK(theta[0].eval1(0).re == 1.0);
    CHECK(theta[0].eval1(1).im == 1.0);

    // frame listed in the order (u1, u3, u2, u4): I e1 = e3, I e2 = e4
    Eigen::MatrixXd I = Eigen::MatrixXd::Zero(4, 4);
    I(2, 0) = 1;
    I(0, 2) = -1;
    I(3, 1) = 1;
    I(1, 3) = -1;
    auto perm = adapt_frame_permutation(I);
    KahlerStructure shuffled = make_kahler(LieAlgebraData(4), I);
    KahlerStructure fixed = apply_frame_permutation(shuffled, perm);
    CHECK(imat_is_standard(fixed.Imat));

    // a column that is not a signed frame vector cannot be adapted
    Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(4, 4);
    bad(1, 0) = 0.8;
    bad(2, 0) = 0.6;
    CHECK_THROWS_AS((void)adapt_frame_permutation(bad), FrameAdaptError);
}

TEST_CASE("complexify block extraction") {
    // H1 -> A_{11} = diag(1/2, 0)
    CurvBlocks<Cd> b1 = complexify(model_curvature(ModelKind::h1));
    CHECK(max_abs(b1.at(0, 0, 0, 0) - Cd(0.5)) < 1e-14);
    double rest = 0.0;
    for (size_t i = 1; i < b1.a.size(); ++i) rest = std::max(rest, max_abs(b1.a[i]));
    CHECK(rest < 1e-14);

    // Fubini-Study blocks as printed
    CurvBlocks<Cd> bp = complexify(model_curvature(ModelKind::proj, 2));
    CHECK(max_abs(bp.at(0, 0, 0, 0) - Cd(-2.0)) < 1e-14);
    CHECK(max_abs(bp.at(0, 0, 1, 1) - Cd(-1.0)) < 1e-14);
    CHECK(max_abs(bp.at(0, 1, 1, 0) - Cd(-1.0)) < 1e-14);
    CHECK(max_abs(bp.at(1, 0, 0, 1) - Cd(-1.0)) < 1e-14);
    CHECK(max_abs(bp.at(1, 1, 0, 0) - Cd(-1.0)) < 1e-14);
    CHECK(max_abs(bp.at(1, 1, 1, 1) - Cd(-2.0)) < 1e-14);
    CHECK(max_abs(bp.at(0, 1, 0, 0)) < 1e-14);
    CHECK(bp.hermitian_residual() < 1e-14);

    // zero tensor -> zero blocks
    CurvatureTensor Z;
    Z.n = 2;
    Z.real = FormMatrix<Cd>(4, 4, 4, 2);
    CHECK(complexify(Z).max_abs() == 0.0);

    // round trip on random Hermitian-consistent blocks
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    for (int rep = 0; rep < 20; ++rep) {
        CurvBlocks<Cd> B(2);
        for (int k = 0; k < 2; ++k)
            for (int h = 0; h < 2; ++h)
                for (int j = 0; j < 2; ++j)
                    for (int m = 0; m < 2; ++m) B.at(k, h, j, m) = Cd(coef(rng), coef(rng));
        // symmetrize to A_{kh} = (A_{hk})^dagger
        CurvBlocks<Cd> H(2);
        for (int k = 0; k < 2; ++k)
            for (int h = 0; h < 2; ++h)
                for (int j = 0; j < 2; ++j)
                    for (int m = 0; m < 2; ++m)
                        H.at(k, h, j, m) = Cd(0.5) * (B.at(k, h, j, m) + conj(B.at(h, k, m, j)));
        CHECK((complexify(curvature_from_blocks(H)) - H).max_abs() < 1e-12);
    }

    // a (2,0)-component is rejected
    FormMatrix<Cd> bad(4, 4, 4, 2);
    Form<Cd> t12 = wedge(theta_form<Cd>(2, 0), theta_form<Cd>(2, 1));
    for (const auto& [mask, c] : t12.terms()) {
        bad.at(0, 0).add_term(mask, Cd(c.re));
        bad.at(1, 1).add_term(mask, Cd(c.re));
        bad.at(1, 0).add_term(mask, Cd(c.im));
        bad.at(0, 1).add_term(mask, Cd(-c.im));
    }
    CurvatureTensor BadT;
    BadT.n = 2;
    BadT.real = bad;
    CHECK_THROWS_AS((void)complexify(BadT), NotKahlerCurvature);
}
