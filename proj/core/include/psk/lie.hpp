#pragma once

#include <vector>

#include "psk/forms.hpp"

namespace psk {

// Structure constants c^k_{ij} of a frame bracket table, [e_i, e_j] = c^k_{ij} e_k,
// stored with the antisymmetry c^k_{ij} = -c^k_{ji} enforced on write.
template <class C>
class StructureConstants {
public:
    StructureConstants() = default;
    explicit StructureConstants(int dim) : dim_(dim), c_(size_t(dim) * dim * dim, C(0)) {}

    int dim() const { return dim_; }

    const C& at(int k, int i, int j) const { return c_[idx(k, i, j)]; }

    void set(int k, int i, int j, const C& v) {
        if (i == j) throw std::invalid_argument("StructureConstants: [e_i,e_i] must vanish");
        c_[idx(k, i, j)] = v;
        c_[idx(k, j, i)] = -v;
    }
    void add(int k, int i, int j, const C& v) { set(k, i, j, at(k, i, j) + v); }

    // Bracket of frame vectors as a component vector.
    std::vector<C> bracket(int i, int j) const {
        std::vector<C> out(dim_, C(0));
        for (int k = 0; k < dim_; ++k) out[k] = at(k, i, j);
        return out;
    }

private:
    size_t idx(int k, int i, int j) const {
        return (size_t(k) * dim_ + i) * dim_ + j;
    }
    int dim_ = 0;
    std::vector<C> c_;
};

// Max-abs residual of the cyclic Jacobi sum [[e_i,e_j],e_k] + cyclic.
template <class C>
double jacobi_residual(const StructureConstants<C>& sc) {
    int n = sc.dim();
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    C s(0);
                    for (int m = 0; m < n; ++m) {
                        s += sc.at(m, i, j) * sc.at(l, m, k);
                        s += sc.at(m, j, k) * sc.at(l, m, i);
                        s += sc.at(m, k, i) * sc.at(l, m, j);
                    }
                    worst = std::max(worst, max_abs(s));
                }
    return worst;
}

// Chevalley-Eilenberg differential of a constant-coefficient form, fixed by
// du^k(e_i, e_j) = -u^k([e_i, e_j]).
template <class C>
Form<C> ce_differential(const Form<C>& a, const StructureConstants<C>& sc) {
    int dim = a.dim();
    if (dim != sc.dim()) throw FrameMismatch("ce_differential: frame dimension mismatch");
    Form<C> out(dim, std::min(a.degree() + 1, dim));
    if (a.degree() + 1 > dim) return out;

    // d(u^t) table
    std::vector<Form<C>> du(dim, Form<C>(dim, 2));
    for (int t = 0; t < dim; ++t)
        for (int i = 0; i < dim; ++i)
            for (int j = i + 1; j < dim; ++j)
                du[t].add_term((uint32_t(1) << i) | (uint32_t(1) << j), -sc.at(t, i, j));

    for (const auto& [mask, c] : a.terms()) {
        int pos = 0;
        for (uint32_t mm = mask; mm; mm &= mm - 1, ++pos) {
            int t = __builtin_ctz(mm);
            uint32_t rest = mask & ~(uint32_t(1) << t);
            // (-1)^{pos} u^{<t-part stays in place>}: move du^t to front of the
            // remaining monomial and let wedge handle the reordering sign.
            uint32_t before = mask & ((uint32_t(1) << t) - 1);
            int sgn = (detail::popcount32(before) & 1) ? -1 : 1;
            Form<C> contrib = wedge(du[t], Form<C>::monomial(dim, rest, C(1)));
            out += (sgn > 0 ? c : -c) * contrib;
        }
    }
    return out;
}

// Koszul connection of the left-invariant metric making the frame orthonormal:
// omega^l_j = Gamma^l_{ij} u^i with 2 Gamma^l_{ij} = c^l_{ij} - c^i_{jl} + c^j_{li}.
template <class C>
FormMatrix<C> levi_civita_form(const StructureConstants<C>& sc) {
    int n = sc.dim();
    FormMatrix<C> conn(n, n, n, 1);
    C half = C(1) / C(2);
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                C g = half * (sc.at(l, i, j) - sc.at(i, j, l) + sc.at(j, l, i));
                if (!is_zero(g)) conn.at(l, j).add_term(uint32_t(1) << i, g);
            }
    return conn;
}

// Curvature form of a connection matrix on a left-invariant frame,
// Omega = d omega + omega ^ omega.
template <class C>
FormMatrix<C> curvature_form(const FormMatrix<C>& conn, const StructureConstants<C>& sc) {
    int n = conn.rows();
    FormMatrix<C> out = matrix_wedge(conn, conn);
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j)
            out.at(l, j) += ce_differential(conn.at(l, j), sc);
    return out;
}

// Torsion residual de^k + omega^k_j ^ e^j of a connection against the frame
// coframe; zero for the Koszul connection.
template <class C>
double torsion_residual_form(const FormMatrix<C>& conn, const StructureConstants<C>& sc) {
    int n = conn.rows();
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
        Form<C> t = ce_differential(Form<C>::covector(n, k), sc);
        for (int j = 0; j < n; ++j) t += wedge(conn.at(k, j), Form<C>::covector(n, j));
        worst = std::max(worst, t.max_abs());
    }
    return worst;
}

} // namespace psk
