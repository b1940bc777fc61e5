#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "psk/numbers.hpp"

namespace psk {

struct FrameMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline int popcount32(uint32_t m) { return __builtin_popcount(m); }

// Sign of u^A ^ u^B for disjoint increasing index sets: parity of the merge
// permutation. Counts, for each index of B, the indices of A above it.
inline int merge_sign(uint32_t a, uint32_t b) {
    int inversions = 0;
    for (uint32_t bb = b; bb; bb &= bb - 1) {
        int j = __builtin_ctz(bb);
        uint32_t above = a >> (j + 1);
        inversions += popcount32(above);
    }
    return (inversions & 1) ? -1 : 1;
}

} // namespace detail

// Alternating form of fixed degree over a frame of dimension `dim`.
// Components are stored against strictly increasing index sets, encoded as
// bitmasks over the frame covectors u^0..u^{dim-1} (0-based internally).
template <class C>
class Form {
public:
    Form() = default;
    Form(int dim, int degree) : dim_(dim), deg_(degree) {
        if (degree < 0 || dim < 0) throw std::invalid_argument("Form: bad shape");
    }

    static Form covector(int dim, int i) {
        Form f(dim, 1);
        f.add_term(uint32_t(1) << i, C(1));
        return f;
    }
    static Form monomial(int dim, uint32_t mask, const C& c) {
        Form f(dim, detail::popcount32(mask));
        f.add_term(mask, c);
        return f;
    }

    int dim() const { return dim_; }
    int degree() const { return deg_; }
    const std::map<uint32_t, C>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    C coeff(uint32_t mask) const {
        auto it = terms_.find(mask);
        return it == terms_.end() ? C(0) : it->second;
    }

    void add_term(uint32_t mask, const C& c) {
        if (detail::popcount32(mask) != deg_) throw std::invalid_argument("Form: degree mismatch");
        if (mask >= (uint32_t(1) << dim_)) throw std::invalid_argument("Form: index out of frame");
        auto it = terms_.find(mask);
        if (it == terms_.end()) {
            if (!psk::is_zero(c)) terms_.emplace(mask, c);
        } else {
            it->second += c;
            if (psk::is_zero(it->second)) terms_.erase(it);
        }
    }

    friend Form operator+(const Form& a, const Form& b) {
        a.check_same(b);
        Form out = a;
        for (const auto& [m, c] : b.terms_) out.add_term(m, c);
        return out;
    }
    friend Form operator-(const Form& a, const Form& b) {
        a.check_same(b);
        Form out = a;
        for (const auto& [m, c] : b.terms_) out.add_term(m, -c);
        return out;
    }
    Form operator-() const {
        Form out(dim_, deg_);
        for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
        return out;
    }
    friend Form operator*(const C& s, const Form& f) {
        Form out(f.dim_, f.deg_);
        if (psk::is_zero(s)) return out;
        for (const auto& [m, c] : f.terms_) out.add_term(m, s * c);
        return out;
    }
    Form& operator+=(const Form& b) { return *this = *this + b; }
    Form& operator-=(const Form& b) { return *this = *this - b; }

    Form conjugate() const {
        Form out(dim_, deg_);
        for (const auto& [m, c] : terms_) out.terms_.emplace(m, conj(c));
        return out;
    }

    // Evaluation on frame vectors e_i, e_j (degree 2).
    C eval2(int i, int j) const {
        if (deg_ != 2) throw std::logic_error("Form: eval2 on wrong degree");
        if (i == j) return C(0);
        uint32_t m = (uint32_t(1) << i) | (uint32_t(1) << j);
        C c = coeff(m);
        return i < j ? c : -c;
    }
    // Evaluation on a single frame vector (degree 1).
    C eval1(int i) const {
        if (deg_ != 1) throw std::logic_error("Form: eval1 on wrong degree");
        return coeff(uint32_t(1) << i);
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& [_, c] : terms_) m = std::max(m, psk::max_abs(c));
        return m;
    }

    void check_same(const Form& b) const {
        if (dim_ != b.dim_) throw FrameMismatch("Form: frame dimension mismatch");
        if (deg_ != b.deg_) throw std::invalid_argument("Form: degree mismatch");
    }

private:
    int dim_ = 0;
    int deg_ = 0;
    std::map<uint32_t, C> terms_;
};

// Exterior product. Degrees add; degree above the frame dimension collapses
// to the zero form.
template <class C>
Form<C> wedge(const Form<C>& a, const Form<C>& b) {
    if (a.dim() != b.dim()) throw FrameMismatch("wedge: frame dimension mismatch");
    int deg = a.degree() + b.degree();
    if (deg > a.dim()) return Form<C>(a.dim(), std::min(deg, a.dim()));
    Form<C> out(a.dim(), deg);
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) {
            if (ma & mb) continue;
            int s = detail::merge_sign(ma, mb);
            out.add_term(ma | mb, s > 0 ? ca * cb : -(ca * cb));
        }
    return out;
}

// Matrix with alternating-form entries, all of one degree and frame.
template <class C>
class FormMatrix {
public:
    FormMatrix() = default;
    FormMatrix(int rows, int cols, int dim, int degree)
        : rows_(rows), cols_(cols), entries_(size_t(rows) * cols, Form<C>(dim, degree)) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Form<C>& at(int r, int c) { return entries_[size_t(r) * cols_ + c]; }
    const Form<C>& at(int r, int c) const { return entries_[size_t(r) * cols_ + c]; }

    friend FormMatrix operator+(const FormMatrix& a, const FormMatrix& b) {
        a.check_shape(b);
        FormMatrix out = a;
        for (size_t k = 0; k < out.entries_.size(); ++k) out.entries_[k] += b.entries_[k];
        return out;
    }
    friend FormMatrix operator-(const FormMatrix& a, const FormMatrix& b) {
        a.check_shape(b);
        FormMatrix out = a;
        for (size_t k = 0; k < out.entries_.size(); ++k) out.entries_[k] -= b.entries_[k];
        return out;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& e : entries_) m = std::max(m, e.max_abs());
        return m;
    }

    void check_shape(const FormMatrix& b) const {
        if (rows_ != b.rows_ || cols_ != b.cols_)
            throw std::invalid_argument("FormMatrix: shape mismatch");
    }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<Form<C>> entries_;
};

// Entrywise wedge-product contraction (A ^ B)_{ik} = sum_j A_{ij} ^ B_{jk}.
template <class C>
FormMatrix<C> matrix_wedge(const FormMatrix<C>& a, const FormMatrix<C>& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix_wedge: shape mismatch");
    if (a.rows() == 0 || a.cols() == 0 || b.cols() == 0)
        return FormMatrix<C>(a.rows(), b.cols(), 0, 0);
    int dim = a.at(0, 0).dim();
    int deg = a.at(0, 0).degree() + b.at(0, 0).degree();
    FormMatrix<C> out(a.rows(), b.cols(), dim, std::min(deg, dim));
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < b.cols(); ++k) {
            Form<C> acc(dim, std::min(deg, dim));
            for (int j = 0; j < a.cols(); ++j) acc += wedge(a.at(i, j), b.at(j, k));
            out.at(i, k) = acc;
        }
    return out;
}

} // namespace psk
