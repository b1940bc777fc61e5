#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "psk/blocks.hpp"
#include "psk/lie.hpp"

namespace psk {

// ---------------------------------------------------------------------------
// Exterior calculus on the conic total space M x R+ x S^1 over a Lie-group
// base. Coefficients live in the Laurent-Fourier ring span{ r^k e^{im phi} };
// generators of the lifted coframe are pi*u^1..pi*u^{2n}, dr, dphi. With an
// exact coefficient field every identity of the construction closes to a
// literal zero, not a small float.
// ---------------------------------------------------------------------------

template <class C>
class RingElem {
public:
    using Key = std::pair<int, int>; // (r power, Fourier mode)

    RingElem() = default;
    static RingElem monomial(int k, int m, const C& c) {
        RingElem e;
        e.add(k, m, c);
        return e;
    }
    static RingElem constant(const C& c) { return monomial(0, 0, c); }
    static RingElem one() { return constant(C(1)); }

    const std::map<Key, C>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }

    void add(int k, int m, const C& c) {
        if (psk::is_zero(c)) return;
        auto it = t_.find({k, m});
        if (it == t_.end()) {
            t_.emplace(Key{k, m}, c);
        } else {
            it->second += c;
            if (psk::is_zero(it->second)) t_.erase(it);
        }
    }

    friend RingElem operator+(const RingElem& a, const RingElem& b) {
        RingElem out = a;
        for (const auto& [key, c] : b.t_) out.add(key.first, key.second, c);
        return out;
    }
    friend RingElem operator-(const RingElem& a, const RingElem& b) {
        RingElem out = a;
        for (const auto& [key, c] : b.t_) out.add(key.first, key.second, -c);
        return out;
    }
    friend RingElem operator*(const RingElem& a, const RingElem& b) {
        RingElem out;
        for (const auto& [ka, ca] : a.t_)
            for (const auto& [kb, cb] : b.t_)
                out.add(ka.first + kb.first, ka.second + kb.second, ca * cb);
        return out;
    }
    RingElem operator-() const {
        RingElem out;
        for (const auto& [key, c] : t_) out.t_.emplace(key, -c);
        return out;
    }
    RingElem& operator+=(const RingElem& b) { return *this = *this + b; }
    RingElem& operator-=(const RingElem& b) { return *this = *this - b; }

    RingElem conjugate() const {
        RingElem out;
        for (const auto& [key, c] : t_) out.t_.emplace(Key{key.first, -key.second}, conj(c));
        return out;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& [_, c] : t_) m = std::max(m, psk::max_abs(c));
        return m;
    }
    // value at r = 1, phi = 0
    Cd eval_unit() const {
        Cd v(0);
        for (const auto& [_, c] : t_) v += Cd(to_double(c.re), to_double(c.im));
        return v;
    }

private:
    std::map<Key, C> t_;
};

template <class C>
class LiftedForm {
public:
    LiftedForm() = default;
    LiftedForm(int gens, int degree) : gens_(gens), deg_(degree) {}

    static LiftedForm generator(int gens, int i) {
        LiftedForm f(gens, 1);
        f.add_term(uint32_t(1) << i, RingElem<C>::one());
        return f;
    }
    static LiftedForm monomial(int gens, uint32_t mask, const RingElem<C>& c) {
        LiftedForm f(gens, detail::popcount32(mask));
        f.add_term(mask, c);
        return f;
    }

    int gens() const { return gens_; }
    int degree() const { return deg_; }
    const std::map<uint32_t, RingElem<C>>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(uint32_t mask, const RingElem<C>& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(mask);
        if (it == terms_.end()) {
            terms_.emplace(mask, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    friend LiftedForm operator+(const LiftedForm& a, const LiftedForm& b) {
        LiftedForm out = a;
        for (const auto& [m, c] : b.terms_) out.add_term(m, c);
        return out;
    }
    friend LiftedForm operator-(const LiftedForm& a, const LiftedForm& b) {
        LiftedForm out = a;
        for (const auto& [m, c] : b.terms_) out.add_term(m, -c);
        return out;
    }
    LiftedForm operator-() const {
        LiftedForm out(gens_, deg_);
        for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
        return out;
    }
    friend LiftedForm operator*(const RingElem<C>& s, const LiftedForm& f) {
        LiftedForm out(f.gens_, f.deg_);
        for (const auto& [m, c] : f.terms_) out.add_term(m, s * c);
        return out;
    }
    LiftedForm& operator+=(const LiftedForm& b) { return *this = *this + b; }
    LiftedForm& operator-=(const LiftedForm& b) { return *this = *this - b; }

    double max_abs() const {
        double m = 0.0;
        for (const auto& [_, c] : terms_) m = std::max(m, c.max_abs());
        return m;
    }

private:
    int gens_ = 0;
    int deg_ = 0;
    std::map<uint32_t, RingElem<C>> terms_;
};

template <class C>
LiftedForm<C> wedge(const LiftedForm<C>& a, const LiftedForm<C>& b) {
    int deg = a.degree() + b.degree();
    LiftedForm<C> out(a.gens(), std::min(deg, a.gens()));
    if (deg > a.gens()) return out;
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) {
            if (ma & mb) continue;
            int s = detail::merge_sign(ma, mb);
            RingElem<C> prod = ca * cb;
            out.add_term(ma | mb, s > 0 ? prod : -prod);
        }
    return out;
}

// d of a ring function, as a lifted 1-form:
// d(r^k e^{im phi}) = k r^{k-1} e^{im phi} dr + i m r^k e^{im phi} dphi.
template <class C>
LiftedForm<C> ring_d(const RingElem<C>& f, int gens) {
    LiftedForm<C> out(gens, 1);
    const int dr = gens - 2, dphi = gens - 1;
    for (const auto& [key, c] : f.terms()) {
        auto [k, m] = key;
        if (k != 0) out.add_term(uint32_t(1) << dr, RingElem<C>::monomial(k - 1, m, C(k) * c));
        if (m != 0)
            out.add_term(uint32_t(1) << dphi, RingElem<C>::monomial(k, m, C::i() * C(m) * c));
    }
    return out;
}

// Exterior derivative; gen_du supplies d of each generator (pullbacks of the
// base structure equations for pi*u^i, zero for dr and dphi).
template <class C>
LiftedForm<C> lifted_d(const LiftedForm<C>& f, const std::vector<LiftedForm<C>>& gen_du) {
    int gens = f.gens();
    LiftedForm<C> out(gens, std::min(f.degree() + 1, gens));
    if (f.degree() + 1 > gens) return out;
    for (const auto& [mask, coef] : f.terms()) {
        LiftedForm<C> mono = LiftedForm<C>::monomial(gens, mask, RingElem<C>::one());
        out += wedge(ring_d(coef, gens), mono);
        int pos = 0;
        for (uint32_t mm = mask; mm; mm &= mm - 1, ++pos) {
            int t = __builtin_ctz(mm);
            if (gen_du[t].is_zero()) continue;
            uint32_t rest = mask & ~(uint32_t(1) << t);
            uint32_t before = mask & ((uint32_t(1) << t) - 1);
            int sgn = (detail::popcount32(before) & 1) ? -1 : 1;
            LiftedForm<C> contrib =
                wedge(gen_du[t], LiftedForm<C>::monomial(gens, rest, RingElem<C>::one()));
            contrib = coef * contrib;
            out += sgn > 0 ? contrib : -contrib;
        }
    }
    return out;
}

// Interior product against a vector described by its pairings with the
// generator coframe (ring-valued functions).
template <class C>
LiftedForm<C> contract(const LiftedForm<C>& f, const std::vector<RingElem<C>>& pairing) {
    LiftedForm<C> out(f.gens(), std::max(0, f.degree() - 1));
    if (f.degree() == 0) return out;
    for (const auto& [mask, coef] : f.terms()) {
        int pos = 0;
        for (uint32_t mm = mask; mm; mm &= mm - 1, ++pos) {
            int t = __builtin_ctz(mm);
            if (pairing[t].is_zero()) continue;
            uint32_t before = mask & ((uint32_t(1) << t) - 1);
            int sgn = (detail::popcount32(before) & 1) ? -1 : 1;
            RingElem<C> c = pairing[t] * coef;
            out.add_term(mask & ~(uint32_t(1) << t), sgn > 0 ? c : -c);
        }
    }
    return out;
}

template <class C>
struct LiftedMatrix {
    int rows = 0, cols = 0;
    std::vector<LiftedForm<C>> m;

    LiftedMatrix() = default;
    LiftedMatrix(int r, int c, int gens, int deg)
        : rows(r), cols(c), m(size_t(r) * c, LiftedForm<C>(gens, deg)) {}

    LiftedForm<C>& at(int r, int c) { return m[size_t(r) * cols + c]; }
    const LiftedForm<C>& at(int r, int c) const { return m[size_t(r) * cols + c]; }

    friend LiftedMatrix operator+(const LiftedMatrix& a, const LiftedMatrix& b) {
        LiftedMatrix out = a;
        for (size_t i = 0; i < out.m.size(); ++i) out.m[i] += b.m[i];
        return out;
    }
    friend LiftedMatrix operator-(const LiftedMatrix& a, const LiftedMatrix& b) {
        LiftedMatrix out = a;
        for (size_t i = 0; i < out.m.size(); ++i) out.m[i] -= b.m[i];
        return out;
    }
    double max_abs() const {
        double w = 0.0;
        for (const auto& e : m) w = std::max(w, e.max_abs());
        return w;
    }
    bool is_zero() const {
        for (const auto& e : m)
            if (!e.is_zero()) return false;
        return true;
    }
};

// pairing of a lifted 1-form with a vector given by generator pairings
template <class C>
RingElem<C> contract_scalar(const LiftedForm<C>& f, const std::vector<RingElem<C>>& pairing) {
    RingElem<C> out;
    for (const auto& [mask, coef] : f.terms()) {
        int t = __builtin_ctz(mask);
        out += pairing[t] * coef;
    }
    return out;
}

template <class C>
LiftedMatrix<C> matrix_wedge(const LiftedMatrix<C>& a, const LiftedMatrix<C>& b) {
    if (a.m.empty() || b.m.empty()) return LiftedMatrix<C>(a.rows, b.cols, 0, 0);
    int gens = a.m.front().gens();
    int deg = a.m.front().degree() + b.m.front().degree();
    LiftedMatrix<C> out(a.rows, b.cols, gens, std::min(deg, gens));
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < b.cols; ++k) {
            LiftedForm<C> acc(gens, std::min(deg, gens));
            for (int j = 0; j < a.cols; ++j) acc += wedge(a.at(i, j), b.at(j, k));
            out.at(i, k) = acc;
        }
    return out;
}

struct LiftPreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input data of one lift: base bracket table in the standard unitary frame,
// an invariant potential lambda with d lambda = omega, and the deviance cubic.
template <class C>
struct LiftData {
    int n = 0;
    StructureConstants<C> sc;
    std::vector<C> lambda;   // 2n real coefficients
    std::vector<C> sigma;    // symmetric cubic, n^3 entries (may be empty for zero)

    const C& sig(int k, int j, int h) const {
        static const C zero(0);
        if (sigma.empty()) return zero;
        return sigma[(size_t(k) * n + j) * n + h];
    }
    void set_sigma_sym(int k, int j, int h, const C& v) {
        if (sigma.empty()) sigma.assign(size_t(n) * n * n, C(0));
        int a[3] = {k, j, h};
        int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
        for (auto& p : perms) sigma[(size_t(a[p[0]]) * n + a[p[1]]) * n + a[p[2]]] = v;
    }
    C eta(int j, int k, int h) const { return C(2) * sig(k, j, h); }
};

struct LiftCheck {
    double residual = 0.0;
    bool exact_zero = false;
};

template <class C>
class ConicLift {
public:
    // When enforce_potential is set (the normal path) the constructor rejects
    // lambda with d lambda != omega; tests may disable it to probe failure
    // modes of the construction.
    explicit ConicLift(LiftData<C> data, bool enforce_potential = true) : d_(std::move(data)) {
        n_ = d_.n;
        gens_ = 2 * n_ + 2;
        dr_ = 2 * n_;
        dphi_ = 2 * n_ + 1;
        build_base();
        if (enforce_potential && !dlambda_is_omega())
            throw LiftPreconditionError("lift_coframe: d lambda != omega on the base");
        build_lift();
    }

    int n() const { return n_; }

    // --- residual checks; exact_zero means literal zero in the ring --------

    // d phi~ + 2 pi* omega
    LiftCheck dphi_residual() const { return check(dphi_defect_); }

    // d theta~ + omega~ ^ theta~ over all 2n+2 components
    LiftCheck torsion_residual() const {
        LiftedMatrix<C> dth(gens_, 1, gens_, 2);
        for (int i = 0; i < gens_; ++i) dth.at(i, 0) = lifted_d(coframe_[i], gen_du_);
        return check(dth + matrix_wedge(lc_, theta_col_));
    }

    // d omega~ + omega~ ^ omega~ - pi*(Omega^LC + Omega_P)
    LiftCheck curvature_check() const {
        LiftedMatrix<C> curv = d_of_matrix(lc_) + matrix_wedge(lc_, lc_);
        return check(curv - curvature_target_);
    }

    // d^LC eta~ as a matrix, against realify(z^2 pi*(d^LC eta - 2i tau ^ eta))
    LiftCheck dlc_eta_identity() const {
        LiftedMatrix<C> lhs = d_of_matrix(eta_) + matrix_wedge(lc_, eta_) + matrix_wedge(eta_, lc_);
        return check(lhs - dlc_eta_target_);
    }

    // eta~ ^ eta~ against pi*[eta ^ conj(eta)]
    LiftCheck eta_square_identity() const {
        return check(matrix_wedge(eta_, eta_) - bracket_target_);
    }

    // flatness of nabla = LC + eta~
    LiftCheck flat_connection_check() const {
        LiftedMatrix<C> conn = lc_ + eta_;
        return check(d_of_matrix(conn) + matrix_wedge(conn, conn));
    }

    // every ring coefficient of eta~ carries the Fourier mode of z^2 (the
    // r-powers sit in the coframe normalization)
    bool eta_modes_are_squares() const {
        for (const auto& entry : eta_.m)
            for (const auto& [mask, coef] : entry.terms()) {
                (void)mask;
                for (const auto& [key, c] : coef.terms()) {
                    (void)c;
                    if (key.first != 0 || (key.second != 2 && key.second != -2)) return false;
                }
            }
        return true;
    }

    struct DefinitionReport {
        LiftCheck nabla_lc_xi;   // nabla^LC xi = id
        LiftCheck nabla_xi;      // (nabla^LC + eta~) xi = id
        LiftCheck nabla_I_xi;    // nabla (I xi) = I
        LiftCheck lie_xi_metric; // L_xi g~ = 2 g~
        LiftCheck moment_map;    // d(r^2/2) = iota_{I xi} omega~ and xi-flat = -r dr
        int sig_positive = 0;    // signature of g~ at r = 1
        int sig_negative = 0;

        bool all_exact() const {
            return nabla_lc_xi.exact_zero && nabla_xi.exact_zero && nabla_I_xi.exact_zero &&
                   lie_xi_metric.exact_zero && moment_map.exact_zero;
        }
        double worst() const {
            return std::max({nabla_lc_xi.residual, nabla_xi.residual, nabla_I_xi.residual,
                             lie_xi_metric.residual, moment_map.residual});
        }
    };
    DefinitionReport definition_invariants() const;

    // exterior derivative on the total space
    LiftedForm<C> d(const LiftedForm<C>& f) const { return lifted_d(f, gen_du_); }

    // pieces exposed for tests
    const std::vector<LiftedForm<C>>& coframe() const { return coframe_; }
    const LiftedMatrix<C>& levi_civita() const { return lc_; }
    const LiftedMatrix<C>& eta_matrix() const { return eta_; }
    const LiftedForm<C>& phi_form() const { return phi_; }
    const LiftedForm<C>& kahler_form() const { return omega_lift_; }

private:
    LiftData<C> d_;
    int n_ = 0, gens_ = 0, dr_ = 0, dphi_ = 0;

    // base data (frame forms over dimension 2n)
    std::vector<Form<C>> base_du_;
    FormMatrix<C> base_conn_;
    FormMatrix<C> base_curv_plus_proj_;
    FormMatrix<C> base_bracket_real_;

    // lifted data
    std::vector<LiftedForm<C>> gen_du_; // d of each generator
    std::vector<LiftedForm<C>> coframe_;
    LiftedMatrix<C> theta_col_;
    LiftedForm<C> phi_;
    LiftedForm<C> omega_lift_;
    LiftedMatrix<C> lc_;
    LiftedMatrix<C> eta_;
    LiftedMatrix<C> curvature_target_;
    LiftedMatrix<C> dlc_eta_target_;
    LiftedMatrix<C> bracket_target_;
    LiftedMatrix<C> dphi_defect_;

    template <class M>
    static LiftCheck check(const M& defect) {
        return LiftCheck{defect.max_abs(), defect.is_zero()};
    }
    static LiftCheck check(const LiftedForm<C>& defect) {
        return LiftCheck{defect.max_abs(), defect.is_zero()};
    }

    LiftedMatrix<C> d_of_matrix(const LiftedMatrix<C>& a) const {
        LiftedMatrix<C> out(a.rows, a.cols, gens_, std::min(a.m.front().degree() + 1, gens_));
        for (int i = 0; i < a.rows; ++i)
            for (int j = 0; j < a.cols; ++j) out.at(i, j) = lifted_d(a.at(i, j), gen_du_);
        return out;
    }

    // pullback of a base frame form to a constant-ring lifted form
    LiftedForm<C> pullback(const Form<C>& f, const RingElem<C>& scale = RingElem<C>::one()) const {
        LiftedForm<C> out(gens_, f.degree());
        for (const auto& [mask, c] : f.terms()) out.add_term(mask, scale * RingElem<C>::constant(c));
        return out;
    }

    bool dlambda_is_omega() const {
        if (n_ == 0) return true;
        Form<C> lam(2 * n_, 1);
        for (int i = 0; i < 2 * n_; ++i) lam.add_term(uint32_t(1) << i, d_.lambda[i]);
        Form<C> defect = ce_differential(lam, d_.sc) - base_omega();
        return defect.is_zero() || defect.max_abs() < 1e-12;
    }

    Form<C> base_omega() const {
        Form<C> w(2 * n_, 2);
        for (int k = 0; k < n_; ++k)
            w.add_term((uint32_t(1) << (2 * k)) | (uint32_t(1) << (2 * k + 1)), C(1));
        return w;
    }

    void build_base();
    void build_lift();
};

// ------------------------------------------------------------------------

template <class C>
void ConicLift<C>::build_base() {
    const int dim = 2 * n_;
    base_du_.assign(dim, Form<C>(dim, 2));
    for (int i = 0; i < dim; ++i) base_du_[i] = ce_differential(Form<C>::covector(dim, i), d_.sc);
    base_conn_ = levi_civita_form(d_.sc);

    FormMatrix<C> curv = curvature_form(base_conn_, d_.sc);
    base_curv_plus_proj_ = curv + realify_blocks(proj_blocks<C>(n_));

    // [eta ^ conj(eta)] blocks from the cubic
    CurvBlocks<C> B(n_);
    for (int k = 0; k < n_; ++k)
        for (int h = 0; h < n_; ++h)
            for (int j = 0; j < n_; ++j)
                for (int m = 0; m < n_; ++m) {
                    C s(0);
                    for (int t = 0; t < n_; ++t) s += conj(d_.eta(j, k, t)) * d_.eta(t, h, m);
                    B.at(k, h, j, m) = s;
                }
    base_bracket_real_ = realify_blocks(B);
}

template <class C>
void ConicLift<C>::build_lift() {
    const int dim = 2 * n_;
    auto r1 = RingElem<C>::monomial(1, 0, C(1));

    gen_du_.assign(gens_, LiftedForm<C>(gens_, 2));
    for (int i = 0; i < dim; ++i) gen_du_[i] = pullback(base_du_[i]);

    // phi~ = dphi - 2 pi* lambda
    phi_ = LiftedForm<C>::generator(gens_, dphi_);
    for (int i = 0; i < dim; ++i)
        phi_.add_term(uint32_t(1) << i, RingElem<C>::constant(C(-2) * d_.lambda[i]));

    // real lifted coframe: r pi*u^i, dr, r phi~
    coframe_.clear();
    for (int i = 0; i < dim; ++i)
        coframe_.push_back(
            LiftedForm<C>::monomial(gens_, uint32_t(1) << i, r1));
    coframe_.push_back(LiftedForm<C>::generator(gens_, dr_));
    coframe_.push_back(r1 * phi_);

    theta_col_ = LiftedMatrix<C>(gens_, 1, gens_, 1);
    for (int i = 0; i < gens_; ++i) theta_col_.at(i, 0) = coframe_[i];

    // d phi~ + 2 pi* omega (zero precisely when d lambda = omega)
    dphi_defect_ = LiftedMatrix<C>(1, 1, gens_, 2);
    dphi_defect_.at(0, 0) = lifted_d(phi_, gen_du_) + pullback(C(2) * base_omega());

    // Kahler form of the cone: r^2 pi*omega + r phi~ ^ dr
    omega_lift_ = pullback(base_omega(), RingElem<C>::monomial(2, 0, C(1))) +
                  wedge(r1 * phi_, LiftedForm<C>::generator(gens_, dr_));

    // Levi-Civita connection in the realified block layout
    lc_ = LiftedMatrix<C>(gens_, gens_, gens_, 1);
    for (int k = 0; k < n_; ++k)
        for (int h = 0; h < n_; ++h) {
            lc_.at(2 * k, 2 * h) += pullback(base_conn_.at(2 * k, 2 * h));
            lc_.at(2 * k + 1, 2 * h + 1) += pullback(base_conn_.at(2 * k + 1, 2 * h + 1));
            lc_.at(2 * k + 1, 2 * h) += pullback(base_conn_.at(2 * k + 1, 2 * h));
            lc_.at(2 * k, 2 * h + 1) += pullback(base_conn_.at(2 * k, 2 * h + 1));
        }
    for (int k = 0; k < n_; ++k) {
        lc_.at(2 * k, 2 * k + 1) -= phi_;
        lc_.at(2 * k + 1, 2 * k) += phi_;
        // last two columns: pi*theta^k realified
        lc_.at(2 * k, dr_) += LiftedForm<C>::generator(gens_, 2 * k);
        lc_.at(2 * k, dphi_) -= LiftedForm<C>::generator(gens_, 2 * k + 1);
        lc_.at(2 * k + 1, dr_) += LiftedForm<C>::generator(gens_, 2 * k + 1);
        lc_.at(2 * k + 1, dphi_) += LiftedForm<C>::generator(gens_, 2 * k);
        // last two rows: pi*conj(theta^k) realified
        lc_.at(dr_, 2 * k) += LiftedForm<C>::generator(gens_, 2 * k);
        lc_.at(dr_, 2 * k + 1) += LiftedForm<C>::generator(gens_, 2 * k + 1);
        lc_.at(dphi_, 2 * k) -= LiftedForm<C>::generator(gens_, 2 * k + 1);
        lc_.at(dphi_, 2 * k + 1) += LiftedForm<C>::generator(gens_, 2 * k);
    }
    lc_.at(dr_, dphi_) -= phi_;
    lc_.at(dphi_, dr_) += phi_;

    // eta~ = realify(z^2 pi* eta); in the lifted frame every entry carries the
    // pure Fourier mode e^{2 i phi}
    eta_ = LiftedMatrix<C>(gens_, gens_, gens_, 1);
    if (!d_.sigma.empty()) {
        C half = C(1) / C(2);
        for (int j = 0; j < n_; ++j)
            for (int k = 0; k < n_; ++k)
                for (int h = 0; h < n_; ++h) {
                    C e = d_.eta(j, k, h);
                    if (psk::is_zero(e)) continue;
                    // legs: vector conj(theta_j), covector theta^h, form theta^k
                    for (int lv = 0; lv < 2; ++lv)
                        for (int mv = 0; mv < 2; ++mv) {
                            C vc = lv == 0 ? half : C::i() * half;
                            C tc = mv == 0 ? C(1) : C::i();
                            C w = e * vc * tc;
                            int row = 2 * j + lv, col = 2 * h + mv;
                            // z^2-part on theta^k = u^{2k} + i u^{2k+1}
                            eta_.at(row, col).add_term(uint32_t(1) << (2 * k),
                                                       RingElem<C>::monomial(0, 2, w));
                            eta_.at(row, col).add_term(uint32_t(1) << (2 * k + 1),
                                                       RingElem<C>::monomial(0, 2, C::i() * w));
                            // conjugate part
                            eta_.at(row, col).add_term(uint32_t(1) << (2 * k),
                                                       RingElem<C>::monomial(0, -2, conj(w)));
                            eta_.at(row, col).add_term(
                                uint32_t(1) << (2 * k + 1),
                                RingElem<C>::monomial(0, -2, -(C::i() * conj(w))));
                        }
                }
    }

    // curvature target pi*(Omega^LC + Omega_P) in the lifted frame
    curvature_target_ = LiftedMatrix<C>(gens_, gens_, gens_, 2);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) curvature_target_.at(i, j) = pullback(base_curv_plus_proj_.at(i, j));

    // bracket target pi*[eta ^ conj(eta)]
    bracket_target_ = LiftedMatrix<C>(gens_, gens_, gens_, 2);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) bracket_target_.at(i, j) = pullback(base_bracket_real_.at(i, j));

    // d^LC eta target: realify(z^2 pi*(d^LC eta - 2 i tau ^ eta)), tau = -2 lambda
    dlc_eta_target_ = LiftedMatrix<C>(gens_, gens_, gens_, 2);
    if (!d_.sigma.empty()) {
        // complex connection legs A^k_h with nabla theta^k = -A^k_h theta^h
        std::vector<Form<C>> A(size_t(n_) * n_, Form<C>(dim, 1));
        for (int k = 0; k < n_; ++k)
            for (int h = 0; h < n_; ++h) {
                Form<C> f = base_conn_.at(2 * k, 2 * h);
                for (const auto& [mask, c] : base_conn_.at(2 * k + 1, 2 * h).terms())
                    f.add_term(mask, C::i() * c);
                A[size_t(k) * n_ + h] = f;
            }
        auto theta_on = [&](int a, int p) {
            if (p == 2 * a) return C(1);
            if (p == 2 * a + 1) return C::i();
            return C(0);
        };
        auto nabla_sig = [&](int p, int a, int b, int c) {
            C s(0);
            for (int k = 0; k < n_; ++k) {
                s -= A[size_t(k) * n_ + a].eval1(p) * d_.sig(k, b, c);
                s -= A[size_t(k) * n_ + b].eval1(p) * d_.sig(a, k, c);
                s -= A[size_t(k) * n_ + c].eval1(p) * d_.sig(a, b, k);
            }
            return s;
        };
        C half = C(1) / C(2);
        for (int j = 0; j < n_; ++j)
            for (int h = 0; h < n_; ++h) {
                // T^j_h = (d^LC eta - 2 i tau ^ eta)^j_h as a base 2-form
                Form<C> T(dim, 2);
                for (int p = 0; p < dim; ++p)
                    for (int q = p + 1; q < dim; ++q) {
                        C dlc(0);
                        for (int a = 0; a < n_; ++a) {
                            dlc += C(2) * nabla_sig(p, a, j, h) * theta_on(a, q);
                            dlc -= C(2) * nabla_sig(q, a, j, h) * theta_on(a, p);
                        }
                        C tau_p = C(-2) * d_.lambda[p], tau_q = C(-2) * d_.lambda[q];
                        C eta_q(0), eta_p(0);
                        for (int a = 0; a < n_; ++a) {
                            eta_q += d_.eta(j, a, h) * theta_on(a, q);
                            eta_p += d_.eta(j, a, h) * theta_on(a, p);
                        }
                        C val = dlc - C(2) * C::i() * (tau_p * eta_q - tau_q * eta_p);
                        if (!psk::is_zero(val))
                            T.add_term((uint32_t(1) << p) | (uint32_t(1) << q), val);
                    }
                // realify with the same leg normalization as eta~
                for (int lv = 0; lv < 2; ++lv)
                    for (int mv = 0; mv < 2; ++mv) {
                        C vc = lv == 0 ? half : C::i() * half;
                        C tc = mv == 0 ? C(1) : C::i();
                        int row = 2 * j + lv, col = 2 * h + mv;
                        for (const auto& [mask, c] : T.terms()) {
                            dlc_eta_target_.at(row, col).add_term(
                                mask, RingElem<C>::monomial(0, 2, c * vc * tc));
                            dlc_eta_target_.at(row, col).add_term(
                                mask, RingElem<C>::monomial(0, -2, conj(c * vc * tc)));
                        }
                    }
            }
    }
}

template <class C>
typename ConicLift<C>::DefinitionReport ConicLift<C>::definition_invariants() const {
    DefinitionReport rep;
    auto r1 = RingElem<C>::monomial(1, 0, C(1));

    // xi = r d/dr and I xi = r d/dphi-direction; as component vectors in the
    // lifted orthonormal frame: xi = r e~_{2n}, I xi = r e~_{2n+1}
    auto connection_applied = [&](const LiftedMatrix<C>& conn, int comp) {
        // nabla (r e~_comp) = dr (x) e~_comp + r conn^l_comp (x) e~_l
        LiftedMatrix<C> out(gens_, 1, gens_, 1);
        for (int l = 0; l < gens_; ++l) {
            LiftedForm<C> entry = r1 * conn.at(l, comp);
            if (l == comp) entry += LiftedForm<C>::generator(gens_, dr_);
            out.at(l, 0) = entry;
        }
        return out;
    };
    auto identity_cols = [&]() {
        LiftedMatrix<C> out(gens_, 1, gens_, 1);
        for (int l = 0; l < gens_; ++l) out.at(l, 0) = coframe_[l];
        return out;
    };

    rep.nabla_lc_xi = check(connection_applied(lc_, dr_) - identity_cols());
    LiftedMatrix<C> full = lc_ + eta_;
    rep.nabla_xi = check(connection_applied(full, dr_) - identity_cols());

    // nabla(I xi) = I: the complex structure sends e~_{2k} -> e~_{2k+1},
    // e~_{2k+1} -> -e~_{2k}; written in components of the coframe
    LiftedMatrix<C> Icols(gens_, 1, gens_, 1);
    for (int k = 0; k <= n_; ++k) {
        int a = 2 * k, b = 2 * k + 1;
        Icols.at(b, 0) += coframe_[a];
        Icols.at(a, 0) -= coframe_[b];
    }
    rep.nabla_I_xi = check(connection_applied(full, dphi_) - Icols);

    // L_xi g~ = 2 g~ via Cartan on the coframe legs
    std::vector<RingElem<C>> xi_pair(gens_);
    xi_pair[dr_] = r1;
    std::vector<RingElem<C>> ixi_pair(gens_);
    ixi_pair[dphi_] = RingElem<C>::one();

    auto lie_xi = [&](const LiftedForm<C>& a) {
        return contract(lifted_d(a, gen_du_), xi_pair) + lifted_d(contract(a, xi_pair), gen_du_);
    };
    // symmetric 2-tensor as generator-pair coefficients
    auto sym_accum = [&](std::vector<RingElem<C>>& G, const LiftedForm<C>& a, const LiftedForm<C>& b,
                         const C& sign) {
        for (const auto& [ma, ca] : a.terms())
            for (const auto& [mb, cb] : b.terms()) {
                int i = __builtin_ctz(ma), j = __builtin_ctz(mb);
                RingElem<C> c = RingElem<C>::constant(sign) * (ca * cb);
                G[size_t(i) * gens_ + j] += c;
                G[size_t(j) * gens_ + i] += c;
            }
    };
    std::vector<RingElem<C>> defect(size_t(gens_) * gens_);
    for (int i = 0; i < gens_; ++i) {
        C eps = i < 2 * n_ ? C(1) : C(-1);
        LiftedForm<C> li = lie_xi(coframe_[i]);
        // L(u (x) u) - 2 u (x) u = (Lu - u) (x) u + u (x) (Lu - u)
        LiftedForm<C> diff = li - coframe_[i];
        sym_accum(defect, diff, coframe_[i], eps);
    }
    double worst = 0.0;
    bool exact = true;
    for (const auto& g : defect) {
        worst = std::max(worst, g.max_abs());
        exact = exact && g.is_zero();
    }
    rep.lie_xi_metric = LiftCheck{worst, exact};

    // moment map: d(r^2/2) - iota_{I xi} omega~ = 0 and g~(xi, .) = -r dr
    LiftedForm<C> dmu = ring_d(RingElem<C>::monomial(2, 0, C(1) / C(2)), gens_);
    LiftedForm<C> mm_defect = dmu - contract(omega_lift_, ixi_pair);

    // xi-flat from the coframe: g~(xi,.) = sum eps_i u~^i(xi) u~^i = -r dr
    LiftedForm<C> xi_flat(gens_, 1);
    for (int i = 0; i < gens_; ++i) {
        C eps = i < 2 * n_ ? C(1) : C(-1);
        RingElem<C> comp = contract_scalar(coframe_[i], xi_pair);
        xi_flat += RingElem<C>::constant(eps) * (comp * coframe_[i]);
    }
    xi_flat += LiftedForm<C>::monomial(gens_, uint32_t(1) << dr_, r1);
    rep.moment_map = LiftCheck{std::max(mm_defect.max_abs(), xi_flat.max_abs()),
                               mm_defect.is_zero() && xi_flat.is_zero()};

    // signature of the Gram matrix at r = 1, phi = 0 over the generator basis
    std::vector<RingElem<C>> G(size_t(gens_) * gens_);
    for (int i = 0; i < gens_; ++i) {
        C eps = i < 2 * n_ ? C(1) : C(-1);
        sym_accum(G, coframe_[i], coframe_[i], eps);
    }
    Eigen::MatrixXd gram(gens_, gens_);
    for (int i = 0; i < gens_; ++i)
        for (int j = 0; j < gens_; ++j) gram(i, j) = G[size_t(i) * gens_ + j].eval_unit().re / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    for (int i = 0; i < gens_; ++i) {
        if (es.eigenvalues()[i] > 1e-9) ++rep.sig_positive;
        if (es.eigenvalues()[i] < -1e-9) ++rep.sig_negative;
    }
    return rep;
}

} // namespace psk
