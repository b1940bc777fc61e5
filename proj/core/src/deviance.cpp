#include "psk/deviance.hpp"

#include <cmath>

namespace psk {

void Deviance::set_sym(int k, int j, int h, const Cd& v) {
    int a[3] = {k, j, h};
    int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (auto& p : perms) sigma_[idx(a[p[0]], a[p[1]], a[p[2]])] = v;
}

void Deviance::add_monomial(int k, int j, int h, const Cd& coeff) {
    // number of distinct arrangements of the multiset {k,j,h}
    int mult = (k == j && j == h) ? 1 : (k == j || j == h || k == h) ? 3 : 6;
    Cd v = sigma_[idx(k, j, h)] + coeff / Cd(double(mult));
    set_sym(k, j, h, v);
}

Deviance Deviance::from_cubic4(const std::array<Cd, 4>& c) {
    Deviance d(2);
    d.add_monomial(0, 0, 0, c[0]);
    d.add_monomial(0, 0, 1, c[1]);
    d.add_monomial(0, 1, 1, c[2]);
    d.add_monomial(1, 1, 1, c[3]);
    return d;
}

bool Deviance::is_zero() const {
    for (const auto& s : sigma_)
        if (!psk::is_zero(s)) return false;
    return true;
}

std::array<Cd, 4> Deviance::cubic4() const {
    if (n_ != 2) throw UnsupportedDimension("cubic4: only defined for n = 2");
    return {sigma(0, 0, 0), Cd(3.0) * sigma(0, 0, 1), Cd(3.0) * sigma(0, 1, 1), sigma(1, 1, 1)};
}

Deviance cubic_to_eta(const std::array<Cd, 4>& c) { return Deviance::from_cubic4(c); }

std::array<std::array<Cd, 2>, 3> v_vectors(const Deviance& d) {
    if (d.n() != 2) throw UnsupportedDimension("v_vectors: only defined for n = 2");
    Cd x = d.eta(0, 0, 0), y = d.eta(0, 0, 1), z = d.eta(0, 1, 1), w = d.eta(1, 1, 1);
    return {{{x, y}, {y, z}, {z, w}}};
}

CurvBlocks<Cd> eta_bracket_blocks(const Deviance& d) {
    int n = d.n();
    CurvBlocks<Cd> B(n);
    for (int k = 0; k < n; ++k)
        for (int h = 0; h < n; ++h)
            for (int j = 0; j < n; ++j)
                for (int m = 0; m < n; ++m) {
                    Cd s(0);
                    for (int t = 0; t < n; ++t) s += conj(d.eta(j, k, t)) * d.eta(t, h, m);
                    B.at(k, h, j, m) = s;
                }
    return B;
}

CurvatureTensor eta_bracket(const Deviance& d) { return curvature_from_blocks(eta_bracket_blocks(d)); }

double eta_norm(const Deviance& d) {
    int n = d.n();
    Cd mixed(0);
    double plain = 0.0;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int h = 0; h < n; ++h) {
                mixed += d.eta(j, k, h) * conj(d.eta(h, k, j));
                plain += abs2(d.eta(j, k, h));
            }
    // the mixed index pairing and the plain sum agree for totally symmetric eta
    if (std::abs(mixed.re - plain) > 1e-9 * (1.0 + plain) || std::abs(mixed.im) > 1e-9)
        throw std::logic_error("eta_norm: symmetry identity violated");
    return mixed.re;
}

Deviance phase_rotate(const Deviance& d, double alpha) {
    Cd phase(std::cos(alpha), std::sin(alpha));
    Deviance r(d.n());
    for (int k = 0; k < d.n(); ++k)
        for (int j = k; j < d.n(); ++j)
            for (int h = j; h < d.n(); ++h) {
                int mult = (k == j && j == h) ? 1 : (k == j || j == h || k == h) ? 3 : 6;
                r.add_monomial(k, j, h, Cd(double(mult)) * phase * d.sigma(k, j, h));
            }
    return r;
}

CurvatureTensor model_curvature(ModelKind kind, int n) {
    switch (kind) {
        case ModelKind::proj:
            return curvature_from_blocks(proj_blocks<Cd>(n));
        case ModelKind::h1:
            if (n != 2) throw UnsupportedDimension("h1 is a dim-4 model tensor");
            return curvature_from_blocks(h_blocks<Cd>(1));
        case ModelKind::h2:
            if (n != 2) throw UnsupportedDimension("h2 is a dim-4 model tensor");
            return curvature_from_blocks(h_blocks<Cd>(2));
    }
    throw std::logic_error("model_curvature: bad kind");
}

} // namespace psk
