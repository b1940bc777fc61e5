#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>

#include "psk/kahler.hpp"

namespace psk {

struct ParseError : std::runtime_error {
    int line = 0;
    int col = 0;
    ParseError(int l, int c, const std::string& msg)
        : std::runtime_error("line " + std::to_string(l) + ", col " + std::to_string(c) + ": " + msg),
          line(l), col(c) {}
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numeric value carrying an exact Q(sqrt2) representation when one exists.
// Exactness survives +,-,*,/ and sqrt of rational squares and their doubles;
// anything else degrades to the double value.
struct Num {
    double v = 0.0;
    std::optional<RootTwo> exact;

    static Num of(double x) { return {x, std::nullopt}; }
    static Num of_exact(const RootTwo& r) { return {r.to_double(), r}; }
};

// Expression evaluator for the coefficient grammar: numbers, parameters,
// + - * /, unary minus, sqrt(), parentheses.
Num eval_expression(const std::string& text, const std::map<std::string, Num>& params,
                    int line_no = 0);

// Parsed structure-definition file. Sections: [algebra] with dim, bracket
// lines "(i,j) -> coeff*e_k + ..." and optional "omega(i,j) = coeff" lines;
// [complex] with "I(e_i) = [-]e_j" lines; [deviance] with c1..c4; [lambda]
// with u1..u_dim.
struct AlgebraFile {
    int dim = 4;
    LieAlgebraData alg;
    Eigen::MatrixXd Imat;
    std::optional<Form<Cd>> omega_override;
    std::optional<std::array<Cd, 4>> deviance_c;
    std::optional<std::vector<double>> lambda;

    // exact mirrors (populated when every coefficient stayed in Q(sqrt2))
    bool exact = false;
    StructureConstants<Cq> alg_exact;
    std::vector<RootTwo> lambda_exact;
    std::array<Cq, 4> deviance_exact{};
};

AlgebraFile parse_algebra(const std::string& text, const std::map<std::string, Num>& params);

// Inverse of parse_algebra for a bare structure (no deviance/lambda blocks):
// emits the file grammar with 12-significant-digit coefficients. Feeding the
// output back through parse_algebra is a fixed point.
std::string to_file_text(const KahlerStructure& ks);

// Parse + validate: Jacobi and Kahler residuals must pass the tolerance.
struct LoadedStructure {
    AlgebraFile file;
    KahlerStructure ks;
};
LoadedStructure load_structure(const std::string& text, const std::map<std::string, Num>& params,
                               double tol = 1e-9);

} // namespace psk
