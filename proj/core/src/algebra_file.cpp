#include "psk/algebra_file.hpp"

#include "psk/report.hpp"
#include "psk/verify.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace psk {

namespace {

struct Token {
    enum Kind { number, ident, evec, op, end } kind = end;
    std::string text;
    double value = 0.0;
    int index = 0; // evec index (1-based as written)
    int col = 0;
};

std::vector<Token> tokenize(const std::string& s, int line_no) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < s.size()) {
        char ch = s[i];
        if (std::isspace((unsigned char)ch)) {
            ++i;
            continue;
        }
        int col = int(i) + 1;
        if (std::isdigit((unsigned char)ch) || ch == '.') {
            size_t j = i;
            while (j < s.size() && (std::isdigit((unsigned char)s[j]) || s[j] == '.' ||
                                    s[j] == 'e' && j + 1 < s.size() &&
                                        (std::isdigit((unsigned char)s[j + 1]) || s[j + 1] == '-' ||
                                         s[j + 1] == '+')))
                ++j;
            // plain digits, dots and exponents; the 'e' of a vector never
            // follows a digit because evec tokens start the alternative below
            std::string txt = s.substr(i, j - i);
            Token t;
            t.kind = Token::number;
            t.text = txt;
            t.value = std::stod(txt);
            t.col = col;
            out.push_back(t);
            i = j;
            continue;
        }
        if (std::isalpha((unsigned char)ch) || ch == '_') {
            size_t j = i;
            while (j < s.size() && (std::isalnum((unsigned char)s[j]) || s[j] == '_')) ++j;
            std::string txt = s.substr(i, j - i);
            Token t;
            t.col = col;
            if (txt.size() >= 2 && (txt[0] == 'e' || txt[0] == 'u') &&
                std::all_of(txt.begin() + 1, txt.end(), [](char c) { return std::isdigit((unsigned char)c); })) {
                t.kind = Token::evec;
                t.index = std::stoi(txt.substr(1));
            } else {
                t.kind = Token::ident;
            }
            t.text = txt;
            out.push_back(t);
            i = j;
            continue;
        }
        if (std::string("+-*/(),").find(ch) != std::string::npos) {
            Token t;
            t.kind = Token::op;
            t.text = std::string(1, ch);
            t.col = col;
            out.push_back(t);
            ++i;
            continue;
        }
        throw ParseError(line_no, col, std::string("unexpected character '") + ch + "'");
    }
    Token t;
    t.kind = Token::end;
    t.col = int(s.size()) + 1;
    out.push_back(t);
    return out;
}

// --- expression evaluation over Num -------------------------------------

Num num_add(const Num& a, const Num& b) {
    Num r;
    r.v = a.v + b.v;
    if (a.exact && b.exact) r.exact = *a.exact + *b.exact;
    return r;
}
Num num_sub(const Num& a, const Num& b) {
    Num r;
    r.v = a.v - b.v;
    if (a.exact && b.exact) r.exact = *a.exact - *b.exact;
    return r;
}
Num num_mul(const Num& a, const Num& b) {
    Num r;
    r.v = a.v * b.v;
    if (a.exact && b.exact) r.exact = *a.exact * *b.exact;
    return r;
}
Num num_div(const Num& a, const Num& b, int line, int col) {
    if (b.v == 0.0) throw ParseError(line, col, "division by zero");
    Num r;
    r.v = a.v / b.v;
    if (a.exact && b.exact && !b.exact->is_zero()) r.exact = *a.exact / *b.exact;
    return r;
}
Num num_neg(const Num& a) {
    Num r;
    r.v = -a.v;
    if (a.exact) r.exact = -*a.exact;
    return r;
}

bool perfect_square(long long n, long long& root) {
    if (n < 0) return false;
    long long r = (long long)std::llround(std::sqrt((double)n));
    for (long long c = std::max(0LL, r - 2); c <= r + 2; ++c)
        if (c * c == n) {
            root = c;
            return true;
        }
    return false;
}

Num num_sqrt(const Num& a, int line, int col) {
    if (a.v < 0.0) throw ParseError(line, col, "sqrt of a negative value");
    Num r;
    r.v = std::sqrt(a.v);
    if (a.exact && a.exact->coef_sqrt2().is_zero()) {
        Rational q = a.exact->rat();
        long long n = q.num(), d = q.den(), rn, rd;
        if (perfect_square(n, rn) && perfect_square(d, rd)) {
            r.exact = RootTwo(Rational(rn, rd));
        } else if (n % 2 == 0 && perfect_square(n / 2, rn) && perfect_square(d, rd)) {
            // sqrt(2 k^2 / m^2) = (k/m) sqrt(2)
            r.exact = RootTwo(Rational(0), Rational(rn, rd));
        } else if (d % 2 == 0 && perfect_square(n, rn) && perfect_square(d / 2, rd)) {
            // sqrt(k^2 / (2 m^2)) = (k / (2 m)) sqrt(2)
            r.exact = RootTwo(Rational(0), Rational(rn, 2 * rd));
        }
    }
    return r;
}

class ExprParser {
public:
    ExprParser(const std::vector<Token>& toks, const std::map<std::string, Num>& params, int line)
        : toks_(toks), params_(params), line_(line) {}

    Num parse() {
        Num v = sum();
        expect_end();
        return v;
    }
    Num parse_prefix(size_t* pos) {
        pos_ = *pos;
        Num v = sum();
        *pos = pos_;
        return v;
    }

private:
    const Token& cur() const { return toks_[pos_]; }
    void advance() { ++pos_; }
    bool is_op(const char* t) const { return cur().kind == Token::op && cur().text == t; }
    void expect_end() {
        if (cur().kind != Token::end) throw ParseError(line_, cur().col, "trailing input");
    }

    Num sum() {
        Num v = term();
        while (is_op("+") || is_op("-")) {
            bool plus = cur().text == "+";
            advance();
            Num w = term();
            v = plus ? num_add(v, w) : num_sub(v, w);
        }
        return v;
    }
    Num term() {
        Num v = unary();
        while (is_op("*") || is_op("/")) {
            bool mul = cur().text == "*";
            int col = cur().col;
            advance();
            Num w = unary();
            v = mul ? num_mul(v, w) : num_div(v, w, line_, col);
        }
        return v;
    }
    Num unary() {
        if (is_op("-")) {
            advance();
            return num_neg(unary());
        }
        if (is_op("+")) {
            advance();
            return unary();
        }
        return primary();
    }
    Num primary() {
        const Token& t = cur();
        if (t.kind == Token::number) {
            advance();
            Num r;
            r.v = t.value;
            // integers and finite decimals are exact rationals
            r.exact = decimal_to_rational(t.text);
            return r;
        }
        if (t.kind == Token::ident) {
            if (t.text == "sqrt") {
                advance();
                if (!is_op("(")) throw ParseError(line_, cur().col, "expected '(' after sqrt");
                advance();
                Num inner = sum();
                if (!is_op(")")) throw ParseError(line_, cur().col, "expected ')'");
                int col = cur().col;
                advance();
                return num_sqrt(inner, line_, col);
            }
            auto it = params_.find(t.text);
            if (it == params_.end())
                throw ParseError(line_, t.col, "unbound parameter '" + t.text + "'");
            advance();
            return it->second;
        }
        if (is_op("(")) {
            advance();
            Num v = sum();
            if (!is_op(")")) throw ParseError(line_, cur().col, "expected ')'");
            advance();
            return v;
        }
        throw ParseError(line_, t.col, "expected a value");
    }

    static std::optional<RootTwo> decimal_to_rational(const std::string& text) {
        // reject exponents; accept "123" and "12.5"
        if (text.find('e') != std::string::npos || text.find('E') != std::string::npos)
            return std::nullopt;
        auto dot = text.find('.');
        try {
            if (dot == std::string::npos) return RootTwo(Rational(std::stoll(text)));
            std::string digits = text.substr(0, dot) + text.substr(dot + 1);
            if (digits.empty()) return std::nullopt;
            long long den = 1;
            for (size_t k = 0; k < text.size() - dot - 1; ++k) {
                if (den > (1LL << 50)) return std::nullopt;
                den *= 10;
            }
            return RootTwo(Rational(std::stoll(digits), den));
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }

    const std::vector<Token>& toks_;
    const std::map<std::string, Num>& params_;
    int line_;
    size_t pos_ = 0;
};

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

} // namespace

Num eval_expression(const std::string& text, const std::map<std::string, Num>& params, int line_no) {
    return ExprParser(tokenize(text, line_no), params, line_no).parse();
}

namespace {

// One bracket term: optional coefficient expression times a frame vector.
// Terms are split on top-level +/-; the e_k factor may sit anywhere in the
// product chain.
struct BracketTerm {
    int target = 0; // 0-based
    Num coeff;
};

std::vector<BracketTerm> parse_bracket_rhs(const std::string& rhs,
                                           const std::map<std::string, Num>& params, int dim,
                                           int line_no) {
    auto toks = tokenize(rhs, line_no);
    std::vector<BracketTerm> terms;

    size_t i = 0;
    int depth = 0;
    std::vector<Token> current;
    int sign = 1;
    auto flush = [&](int next_sign) {
        if (current.empty()) {
            if (!terms.empty() || next_sign == 0)
                throw ParseError(line_no, 1, "empty bracket term");
            sign = next_sign;
            return;
        }
        // extract the single e_k factor
        int target = -1;
        std::vector<Token> coef_toks;
        for (size_t k = 0; k < current.size(); ++k) {
            if (current[k].kind == Token::evec) {
                if (target != -1) throw ParseError(line_no, current[k].col, "two frame vectors in one term");
                if (current[k].index < 1 || current[k].index > dim)
                    throw ParseError(line_no, current[k].col, "frame index out of range");
                target = current[k].index - 1;
                // swallow one adjacent '*'
                if (!coef_toks.empty() && coef_toks.back().kind == Token::op &&
                    coef_toks.back().text == "*")
                    coef_toks.pop_back();
                else if (k + 1 < current.size() && current[k + 1].kind == Token::op &&
                         current[k + 1].text == "*")
                    ++k;
                continue;
            }
            coef_toks.push_back(current[k]);
        }
        if (target == -1) throw ParseError(line_no, 1, "bracket term without a frame vector");
        Num c;
        if (coef_toks.empty()) {
            c.v = 1.0;
            c.exact = RootTwo(Rational(1));
        } else {
            Token endt;
            endt.kind = Token::end;
            coef_toks.push_back(endt);
            c = ExprParser(coef_toks, params, line_no).parse();
        }
        if (sign < 0) c = num_neg(c);
        terms.push_back({target, c});
        current.clear();
        sign = next_sign;
    };

    for (; toks[i].kind != Token::end; ++i) {
        const Token& t = toks[i];
        if (t.kind == Token::op && t.text == "(") ++depth;
        if (t.kind == Token::op && t.text == ")") --depth;
        if (depth == 0 && t.kind == Token::op && (t.text == "+" || t.text == "-")) {
            // unary sign at term start is handled by flush bookkeeping
            if (current.empty() && terms.empty() && t.text == "-" && sign == 1) {
                sign = -1;
                continue;
            }
            if (!current.empty()) {
                flush(t.text == "+" ? 1 : -1);
                continue;
            }
        }
        current.push_back(t);
    }
    flush(0);
    return terms;
}

} // namespace

AlgebraFile parse_algebra(const std::string& text, const std::map<std::string, Num>& params) {
    AlgebraFile out;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    std::string section;

    struct PendingBracket {
        int i, j;
        std::vector<BracketTerm> terms;
    };
    std::vector<PendingBracket> brackets;
    std::vector<std::tuple<int, int, Num>> omega_terms;
    std::map<int, int> ipairs; // i -> j with I e_i = e_j (signed via value sign)
    std::map<int, int> isigns;
    std::map<std::string, Num> dev;
    std::map<int, Num> lam;

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(line_no, 1, "unterminated section header");
            section = line.substr(1, line.size() - 2);
            if (section != "algebra" && section != "complex" && section != "deviance" &&
                section != "lambda")
                throw ParseError(line_no, 2, "unknown section '" + section + "'");
            continue;
        }
        if (section.empty()) throw ParseError(line_no, 1, "content before any section header");

        if (section == "algebra") {
            if (line.rfind("dim", 0) == 0) {
                auto eq = line.find('=');
                if (eq == std::string::npos) throw ParseError(line_no, 1, "expected dim = <even integer>");
                out.dim = int(eval_expression(line.substr(eq + 1), params, line_no).v);
                if (out.dim <= 0 || out.dim % 2 != 0)
                    throw ParseError(line_no, int(eq) + 2, "dim must be a positive even integer");
                continue;
            }
            if (line.rfind("omega", 0) == 0) {
                auto open = line.find('('), close = line.find(')'), eq = line.find('=');
                if (open == std::string::npos || close == std::string::npos || eq == std::string::npos)
                    throw ParseError(line_no, 1, "expected omega(i,j) = <expr>");
                std::string inside = line.substr(open + 1, close - open - 1);
                auto comma = inside.find(',');
                if (comma == std::string::npos) throw ParseError(line_no, int(open) + 2, "expected omega(i,j)");
                int i = std::stoi(trim(inside.substr(0, comma)));
                int j = std::stoi(trim(inside.substr(comma + 1)));
                omega_terms.emplace_back(i - 1, j - 1,
                                         eval_expression(line.substr(eq + 1), params, line_no));
                continue;
            }
            if (line.front() == '(') {
                auto arrow = line.find("->");
                if (arrow == std::string::npos) throw ParseError(line_no, 1, "expected (i,j) -> <terms>");
                std::string lhs = trim(line.substr(0, arrow));
                auto close = lhs.find(')');
                auto comma = lhs.find(',');
                if (close == std::string::npos || comma == std::string::npos || lhs.front() != '(')
                    throw ParseError(line_no, 1, "expected (i,j) on the left of ->");
                int i = std::stoi(trim(lhs.substr(1, comma - 1)));
                int j = std::stoi(trim(lhs.substr(comma + 1, close - comma - 1)));
                brackets.push_back(
                    {i - 1, j - 1, parse_bracket_rhs(line.substr(arrow + 2), params, 64, line_no)});
                continue;
            }
            throw ParseError(line_no, 1, "unrecognized [algebra] line");
        }
        if (section == "complex") {
            // I(e_i) = [-]e_j   or   I e_i = [-]e_j
            auto eq = line.find('=');
            if (line.front() != 'I' || eq == std::string::npos)
                throw ParseError(line_no, 1, "expected I(e_i) = e_j");
            std::string lhs = line.substr(1, eq - 1), rhs = trim(line.substr(eq + 1));
            auto digits = [&](const std::string& s, int line, int col) {
                std::string d;
                for (char ch : s)
                    if (std::isdigit((unsigned char)ch)) d += ch;
                if (d.empty()) throw ParseError(line, col, "expected a frame index");
                return std::stoi(d);
            };
            int i = digits(lhs, line_no, 2);
            int sgn = 1;
            if (!rhs.empty() && rhs.front() == '-') {
                sgn = -1;
                rhs = trim(rhs.substr(1));
            }
            if (rhs.empty() || (rhs.front() != 'e' && rhs.front() != 'u'))
                throw ParseError(line_no, int(eq) + 2, "expected a frame vector");
            int j = digits(rhs, line_no, int(eq) + 2);
            ipairs[i - 1] = j - 1;
            isigns[i - 1] = sgn;
            continue;
        }
        if (section == "deviance" || section == "lambda") {
            auto eq = line.find('=');
            if (eq == std::string::npos) throw ParseError(line_no, 1, "expected key = <expr>");
            std::string key = trim(line.substr(0, eq));
            Num val = eval_expression(line.substr(eq + 1), params, line_no);
            if (section == "deviance") {
                if (key.size() != 2 || key[0] != 'c' || key[1] < '1' || key[1] > '4')
                    throw ParseError(line_no, 1, "deviance keys are c1..c4");
                dev[key] = val;
            } else {
                if ((key.front() != 'u' && key.front() != 'e') || key.size() < 2)
                    throw ParseError(line_no, 1, "lambda keys are u1..u<dim>");
                lam[std::stoi(key.substr(1)) - 1] = val;
            }
            continue;
        }
    }

    const int d = out.dim;
    out.alg = LieAlgebraData(d);
    out.alg_exact = StructureConstants<Cq>(d);
    out.exact = true;
    auto note_exact = [&](const Num& n) {
        if (!n.exact) out.exact = false;
    };

    for (const auto& br : brackets) {
        if (br.i < 0 || br.j < 0 || br.i >= d || br.j >= d)
            throw ValidationError("bracket indices out of range for dim " + std::to_string(d));
        for (const auto& t : br.terms) {
            if (t.target >= d) throw ValidationError("bracket target out of range");
            out.alg.sc.add(t.target, br.i, br.j, Cd(t.coeff.v));
            note_exact(t.coeff);
            if (t.coeff.exact)
                out.alg_exact.add(t.target, br.i, br.j, Cq(*t.coeff.exact));
        }
    }

    out.Imat = Eigen::MatrixXd::Zero(d, d);
    if (ipairs.empty()) {
        for (int k = 0; 2 * k + 1 < d; ++k) {
            out.Imat(2 * k + 1, 2 * k) = 1;
            out.Imat(2 * k, 2 * k + 1) = -1;
        }
    } else {
        for (const auto& [i, j] : ipairs) {
            if (i >= d || j >= d) throw ValidationError("complex structure index out of range");
            int s = isigns[i];
            out.Imat(j, i) = s;
            out.Imat(i, j) = -s;
        }
    }

    if (!omega_terms.empty()) {
        Form<Cd> w(d, 2);
        for (const auto& [i, j, val] : omega_terms) {
            if (i < 0 || j < 0 || i >= d || j >= d || i == j)
                throw ValidationError("omega indices out of range");
            int a = i, b = j;
            double v = val.v;
            if (a > b) {
                std::swap(a, b);
                v = -v;
            }
            w.add_term((uint32_t(1) << a) | (uint32_t(1) << b), Cd(v));
            note_exact(val);
        }
        out.omega_override = w;
    }

    if (!dev.empty()) {
        if (d != 4) throw ValidationError("deviance block requires dim = 4");
        std::array<Cd, 4> c{};
        for (int k = 0; k < 4; ++k) {
            auto it = dev.find("c" + std::to_string(k + 1));
            if (it != dev.end()) {
                c[k] = Cd(it->second.v);
                note_exact(it->second);
                if (it->second.exact) out.deviance_exact[k] = Cq(*it->second.exact);
            }
        }
        out.deviance_c = c;
    }

    if (!lam.empty()) {
        std::vector<double> l(d, 0.0);
        out.lambda_exact.assign(d, RootTwo());
        for (const auto& [i, val] : lam) {
            if (i < 0 || i >= d) throw ValidationError("lambda index out of range");
            l[i] = val.v;
            note_exact(val);
            if (val.exact) out.lambda_exact[i] = *val.exact;
        }
        out.lambda = l;
    }
    return out;
}

std::string to_file_text(const KahlerStructure& ks) {
    const int d = ks.dim();
    std::string out = "[algebra]\ndim = " + std::to_string(d) + "\n";
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            std::string rhs;
            for (int k = 0; k < d; ++k) {
                double v = ks.alg.bracket_coef(k, i, j);
                if (v == 0.0) continue;
                if (!rhs.empty()) rhs += v < 0 ? " - " : " + ";
                else if (v < 0) rhs += "-";
                rhs += fmt_double(std::abs(v)) + "*e" + std::to_string(k + 1);
            }
            if (!rhs.empty())
                out += "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") -> " + rhs + "\n";
        }
    out += "[complex]\n";
    for (int i = 0; i < d; ++i)
        for (int r = 0; r < d; ++r) {
            double v = ks.Imat(r, i);
            if (v > 0.5)
                out += "I(e" + std::to_string(i + 1) + ") = e" + std::to_string(r + 1) + "\n";
        }
    return out;
}

LoadedStructure load_structure(const std::string& text, const std::map<std::string, Num>& params,
                               double tol) {
    LoadedStructure out;
    out.file = parse_algebra(text, params);
    double jac = jacobi_residual(out.file.alg);
    if (jac >= tol)
        throw ValidationError("Jacobi residual " + std::to_string(jac) + " exceeds tolerance");
    out.ks = make_kahler(out.file.alg, out.file.Imat, out.file.omega_override);
    KahlerReport rep = kahler_check(out.ks, tol);
    if (rep.worst() >= tol)
        throw ValidationError("Kahler validation failed: d(omega) " + std::to_string(rep.d_omega) +
                              ", Nijenhuis " + std::to_string(rep.nijenhuis) + ", compatibility " +
                              std::to_string(rep.compat));
    return out;
}

} // namespace psk
