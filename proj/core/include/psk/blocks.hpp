#pragma once

#include <vector>

#include "psk/forms.hpp"

namespace psk {

// -------------------------------------------------------------------------
// Complex (1,1)-block presentation of curvature-type tensors on an I-adapted
// orthonormal frame (I e_{2k} = e_{2k+1}, 0-based). A tensor R is written as
//     R = realify( sum_{k,h} (conj(theta^k) ^ theta^h) (x) A_{kh} )
// with theta^k = u^{2k} + i u^{2k+1} and A_{kh} complex n x n matrices acting
// on the holomorphic frame. realify(t) = t + conj(t).
// -------------------------------------------------------------------------

template <class C>
struct CurvBlocks {
    int n = 0;
    std::vector<C> a; // n^4 entries

    CurvBlocks() = default;
    explicit CurvBlocks(int n_) : n(n_), a(size_t(n_) * n_ * n_ * n_, C(0)) {}

    C& at(int kbar, int h, int j, int m) {
        return a[size_t(((kbar * n + h) * n + j)) * n + m];
    }
    const C& at(int kbar, int h, int j, int m) const {
        return a[size_t(((kbar * n + h) * n + j)) * n + m];
    }

    friend CurvBlocks operator+(const CurvBlocks& x, const CurvBlocks& y) {
        CurvBlocks out = x;
        for (size_t i = 0; i < out.a.size(); ++i) out.a[i] += y.a[i];
        return out;
    }
    friend CurvBlocks operator-(const CurvBlocks& x, const CurvBlocks& y) {
        CurvBlocks out = x;
        for (size_t i = 0; i < out.a.size(); ++i) out.a[i] -= y.a[i];
        return out;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& c : a) m = std::max(m, psk::max_abs(c));
        return m;
    }

    // Residual of the metric-curvature symmetry A_{kh} = (A_{hk})^dagger.
    double hermitian_residual() const {
        double worst = 0.0;
        for (int k = 0; k < n; ++k)
            for (int h = 0; h < n; ++h)
                for (int j = 0; j < n; ++j)
                    for (int m = 0; m < n; ++m)
                        worst = std::max(worst, psk::max_abs(at(k, h, j, m) - conj(at(h, k, m, j))));
        return worst;
    }
};

// theta^k as a frame form (complex coefficients over the real frame).
template <class C>
Form<C> theta_form(int n, int k) {
    Form<C> f(2 * n, 1);
    f.add_term(uint32_t(1) << (2 * k), C(1));
    f.add_term(uint32_t(1) << (2 * k + 1), C::i());
    return f;
}

template <class C>
Form<C> theta_bar_form(int n, int k) {
    return theta_form<C>(n, k).conjugate();
}

// Real 2n x 2n view of a block tensor. Each complex matrix entry w of the
// 2-form-valued endomorphism contributes the block [[Re w, -Im w], [Im w, Re w]].
template <class C>
FormMatrix<C> realify_blocks(const CurvBlocks<C>& B) {
    int n = B.n;
    FormMatrix<C> out(2 * n, 2 * n, 2 * n, 2);
    std::vector<Form<C>> basis(size_t(n) * n, Form<C>(2 * n, 2));
    for (int k = 0; k < n; ++k)
        for (int h = 0; h < n; ++h)
            basis[size_t(k) * n + h] = wedge(theta_bar_form<C>(n, k), theta_form<C>(n, h));

    for (int j = 0; j < n; ++j)
        for (int m = 0; m < n; ++m) {
            Form<C> p(2 * n, 2);
            for (int k = 0; k < n; ++k)
                for (int h = 0; h < n; ++h)
                    p += B.at(k, h, j, m) * basis[size_t(k) * n + h];
            Form<C> re_p(2 * n, 2), im_p(2 * n, 2);
            for (const auto& [mask, c] : p.terms()) {
                re_p.add_term(mask, C(c.re));
                im_p.add_term(mask, C(c.im));
            }
            out.at(2 * j, 2 * m) += re_p;
            out.at(2 * j + 1, 2 * m + 1) += re_p;
            out.at(2 * j + 1, 2 * m) += im_p;
            out.at(2 * j, 2 * m + 1) -= im_p;
        }
    return out;
}

namespace detail {

// Evaluate a frame 2-form on a pair of complexified frame vectors.
template <class C>
C eval2_complex(const Form<C>& f, const std::vector<C>& v, const std::vector<C>& w) {
    C out(0);
    for (const auto& [mask, c] : f.terms()) {
        uint32_t mm = mask;
        int i = __builtin_ctz(mm);
        mm &= mm - 1;
        int j = __builtin_ctz(mm);
        out += c * (v[i] * w[j] - v[j] * w[i]);
    }
    return out;
}

template <class C>
std::vector<C> holo_frame_vector(int n, int k, bool barred) {
    // theta_k = (e_{2k} - i e_{2k+1})/2, conj for the barred vector
    std::vector<C> v(2 * n, C(0));
    C half = C(1) / C(2);
    v[2 * k] = half;
    v[2 * k + 1] = barred ? C::i() * half : -(C::i() * half);
    return v;
}

} // namespace detail

struct NotKahlerCurvature : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Inverse of realify_blocks: read the blocks off a real curvature matrix by
// evaluating on holomorphic frame pairs. `defect` receives the largest
// component incompatible with a (1,1), complex-linear tensor; callers with a
// tolerance decide whether to throw.
template <class C>
CurvBlocks<C> complexify_form(const FormMatrix<C>& R, double* defect = nullptr) {
    int n2 = R.rows();
    int n = n2 / 2;
    double worst = 0.0;

    // complex-linearity of the endomorphism part
    for (int j = 0; j < n; ++j)
        for (int m = 0; m < n; ++m) {
            worst = std::max(worst, (R.at(2 * j, 2 * m) - R.at(2 * j + 1, 2 * m + 1)).max_abs());
            worst = std::max(worst, (R.at(2 * j + 1, 2 * m) + R.at(2 * j, 2 * m + 1)).max_abs());
        }

    CurvBlocks<C> B(n);
    for (int j = 0; j < n; ++j)
        for (int m = 0; m < n; ++m) {
            Form<C> omega_c = R.at(2 * j, 2 * m);
            const Form<C>& im_part = R.at(2 * j + 1, 2 * m);
            for (const auto& [mask, c] : im_part.terms()) omega_c.add_term(mask, C::i() * c);
            for (int k = 0; k < n; ++k)
                for (int h = 0; h < n; ++h) {
                    auto tb = detail::holo_frame_vector<C>(n, k, true);
                    auto th = detail::holo_frame_vector<C>(n, h, false);
                    B.at(k, h, j, m) = detail::eval2_complex(omega_c, tb, th);
                }
            // (2,0) and (0,2) components must vanish for a Kahler curvature
            for (int a = 0; a < n; ++a)
                for (int b = a; b < n; ++b) {
                    auto ta = detail::holo_frame_vector<C>(n, a, false);
                    auto tb2 = detail::holo_frame_vector<C>(n, b, false);
                    worst = std::max(worst, psk::max_abs(detail::eval2_complex(omega_c, ta, tb2)));
                    auto tab = detail::holo_frame_vector<C>(n, a, true);
                    auto tbb = detail::holo_frame_vector<C>(n, b, true);
                    worst = std::max(worst, psk::max_abs(detail::eval2_complex(omega_c, tab, tbb)));
                }
        }
    if (defect) *defect = worst;
    return B;
}

// Fubini-Study model curvature of P^n_C in block form; Ric = 2(n+1) g.
template <class C>
CurvBlocks<C> proj_blocks(int n) {
    CurvBlocks<C> B(n);
    for (int k = 0; k < n; ++k)
        for (int h = 0; h < n; ++h)
            for (int j = 0; j < n; ++j)
                for (int m = 0; m < n; ++m) {
                    C v(0);
                    if (m == k && j == h) v -= C(1);
                    if (j == m && k == h) v -= C(1);
                    if (!is_zero(v)) B.at(k, h, j, m) = v;
                }
    return B;
}

// Elementary coordinate-plane curvatures in dimension 4.
template <class C>
CurvBlocks<C> h_blocks(int which) {
    CurvBlocks<C> B(2);
    C half = C(1) / C(2);
    if (which == 1)
        B.at(0, 0, 0, 0) = half;
    else
        B.at(1, 1, 1, 1) = half;
    return B;
}

} // namespace psk
