#include <doctest.h>

#include <random>

#include "psk/blocks.hpp"
#include "psk/lie.hpp"

using namespace psk;

namespace {

Form<Cd> u(int dim, int i) { return Form<Cd>::covector(dim, i - 1); } // 1-based like the notation

Form<Cd> random_form(std::mt19937_64& rng, int dim, int deg) {
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    Form<Cd> f(dim, deg);
    for (uint32_t mask = 0; mask < (uint32_t(1) << dim); ++mask)
        if (__builtin_popcount(mask) == deg) f.add_term(mask, Cd(coef(rng), coef(rng)));
    return f;
}

// Random solvable algebra: [e_1, e_j] = A_{jk} e_k for j, k >= 2. Jacobi holds
// because every bracket lands in the abelian ideal span{e_2, ..}.
StructureConstants<Cd> random_algebra(std::mt19937_64& rng, int dim) {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    StructureConstants<Cd> sc(dim);
    for (int j = 1; j < dim; ++j)
        for (int k = 1; k < dim; ++k) sc.add(k, 0, j, Cd(coef(rng)));
    return sc;
}

StructureConstants<Cd> case_iii_constants(double a, double b) {
    StructureConstants<Cd> sc(4);
    sc.set(1, 0, 1, Cd(a));
    sc.set(3, 2, 3, Cd(b));
    return sc;
}

} // namespace

TEST_CASE("wedge on basis covectors") {
    auto w = wedge(u(4, 1), u(4, 2));
    CHECK(w.degree() == 2);
    CHECK(w.coeff(0b0011).re == 1.0);
    CHECK(wedge(u(4, 1), u(4, 1)).is_zero());

    // ordering sign
    auto w21 = wedge(u(4, 2), u(4, 1));
    CHECK(w21.coeff(0b0011).re == -1.0);
}

TEST_CASE("wedge of conjugate complex covectors") {
    // (u1 + i u2) ^ (u1 - i u2) = -2i u12
    Form<Cd> theta = u(4, 1) + Cd(0, 1) * u(4, 2);
    auto w = wedge(theta, theta.conjugate());
    CHECK(w.coeff(0b0011).re == 0.0);
    CHECK(w.coeff(0b0011).im == -2.0);

    // convention anchor: conj(theta^1) ^ theta^1 = 2i u12
    auto w2 = wedge(theta_bar_form<Cd>(2, 0), theta_form<Cd>(2, 0));
    CHECK(w2.coeff(0b0011).im == 2.0);
}

TEST_CASE("wedge frame mismatch is rejected") {
    CHECK_THROWS_AS((void)wedge(u(4, 1), u(6, 1)), FrameMismatch);
}

TEST_CASE("wedge associativity and graded commutativity, randomized dim 6") {
    std::mt19937_64 rng(12345);
    for (int rep = 0; rep < 40; ++rep) {
        int da = 1 + int(rng() % 3), db = 1 + int(rng() % 3), dc = 1 + int(rng() % 2);
        auto a = random_form(rng, 6, da);
        auto b = random_form(rng, 6, db);
        auto c = random_form(rng, 6, dc);
        CHECK((wedge(wedge(a, b), c) - wedge(a, wedge(b, c))).max_abs() < 1e-12);
        auto ba = wedge(b, a);
        auto ab = wedge(a, b);
        if ((da * db) % 2 == 1) ba = -ba;
        CHECK((ab - ba).max_abs() < 1e-12);
    }
}

TEST_CASE("chevalley-eilenberg differential matches the reference structure equations") {
    auto sc = case_iii_constants(std::sqrt(2.0), 2.0);
    // du^2 = -sqrt(2) u^{12}
    auto du2 = ce_differential(Form<Cd>::covector(4, 1), sc);
    CHECK(du2.coeff(0b0011).re == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-15));
    CHECK(du2.terms().size() == 1);
    // du^1 = 0
    CHECK(ce_differential(Form<Cd>::covector(4, 0), sc).is_zero());
    // abelian: all differentials vanish
    StructureConstants<Cd> ab(4);
    for (int k = 0; k < 4; ++k) CHECK(ce_differential(Form<Cd>::covector(4, k), ab).is_zero());
}

TEST_CASE("d o d = 0 on random Lie algebras") {
    std::mt19937_64 rng(777);
    for (int rep = 0; rep < 25; ++rep) {
        int dim = 4 + 2 * int(rng() % 2);
        auto sc = random_algebra(rng, dim);
        REQUIRE(jacobi_residual(sc) < 1e-12);
        for (int deg = 1; deg <= 2; ++deg) {
            auto f = random_form(rng, dim, deg);
            CHECK(ce_differential(ce_differential(f, sc), sc).max_abs() < 1e-12);
        }
    }
}

TEST_CASE("matrix wedge") {
    // single entries u1, u2 -> u12
    FormMatrix<Cd> A(1, 1, 4, 1), B(1, 1, 4, 1);
    A.at(0, 0) = u(4, 1);
    B.at(0, 0) = u(4, 2);
    auto AB = matrix_wedge(A, B);
    CHECK(AB.at(0, 0).coeff(0b0011).re == 1.0);

    // scalar-form times identity behaves entrywise
    FormMatrix<Cd> S(2, 2, 4, 1);
    S.at(0, 0) = u(4, 1);
    S.at(1, 1) = u(4, 1);
    FormMatrix<Cd> T(2, 2, 4, 1);
    T.at(0, 0) = u(4, 3);
    T.at(1, 1) = u(4, 3);
    auto ST = matrix_wedge(S, T);
    CHECK(ST.at(0, 0).coeff(0b0101).re == 1.0);
    CHECK(ST.at(0, 1).is_zero());

    // case III Levi-Civita wedges to zero within each rotation block
    auto conn = levi_civita_form(case_iii_constants(std::sqrt(2.0), 2.0));
    CHECK(matrix_wedge(conn, conn).max_abs() == 0.0);

    FormMatrix<Cd> bad(1, 2, 4, 1);
    CHECK_THROWS_AS((void)matrix_wedge(bad, bad), std::invalid_argument);
}

TEST_CASE("realified block tensors have real entries") {
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    for (int rep = 0; rep < 20; ++rep) {
        CurvBlocks<Cd> B(2);
        for (auto& c : B.a) c = Cd(coef(rng), coef(rng));
        auto R = realify_blocks(B);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                for (const auto& [mask, c] : R.at(i, j).terms()) {
                    (void)mask;
                    CHECK(c.im == 0.0);
                }
    }
}
