#pragma once

#include <array>
#include <vector>

#include "psk/kahler.hpp"

namespace psk {

// Totally symmetric cubic sigma in the unitary coframe, sigma_{kjh} theta^k
// theta^j theta^h, together with the raised coefficients eta^j_{k,h} = 2 sigma_{kjh}.
// For n = 2 the cubic is (c1 (theta^1)^3 + c2 (theta^1)^2 theta^2
// + c3 theta^1 (theta^2)^2 + c4 (theta^2)^3).
class Deviance {
public:
    Deviance() = default;
    explicit Deviance(int n) : n_(n), sigma_(size_t(n) * n * n, Cd(0)) {}

    static Deviance from_cubic4(const std::array<Cd, 4>& c);
    static Deviance zero(int n) { return Deviance(n); }

    int n() const { return n_; }
    bool is_zero() const;

    const Cd& sigma(int k, int j, int h) const { return sigma_[idx(k, j, h)]; }
    Cd eta(int j, int k, int h) const { return Cd(2.0) * sigma_[idx(k, j, h)]; }

    // Accumulate the coefficient of the symmetric monomial theta^k theta^j theta^h
    // (value spread evenly over the distinct index arrangements).
    void add_monomial(int k, int j, int h, const Cd& coeff);

    std::array<Cd, 4> cubic4() const;

private:
    size_t idx(int k, int j, int h) const { return (size_t(k) * n_ + j) * n_ + h; }
    void set_sym(int k, int j, int h, const Cd& v);

    int n_ = 0;
    std::vector<Cd> sigma_;
};

struct UnsupportedDimension : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Deviance cubic_to_eta(const std::array<Cd, 4>& c); // n = 2 constructor

// v1 = (x,y), v2 = (y,z), v3 = (z,w) with x = 2c1, y = 2c2/3, z = 2c3/3, w = 2c4.
std::array<std::array<Cd, 2>, 3> v_vectors(const Deviance& d);

// [eta ^ conj(eta)] in block form, A_{kh}[j][m] = sum_t conj(eta^j_{k,t}) eta^t_{h,m}.
// For n = 2 this reduces to the pairwise Hermitian products of v1, v2, v3.
CurvBlocks<Cd> eta_bracket_blocks(const Deviance& d);
CurvatureTensor eta_bracket(const Deviance& d);

// |eta|^2_h = sum eta^j_{kh} conj(eta^h_{kj}); equals the plain sum of squared
// moduli by total symmetry (both are computed and compared).
double eta_norm(const Deviance& d);

Deviance phase_rotate(const Deviance& d, double alpha);

enum class ModelKind { proj, h1, h2 };
CurvatureTensor model_curvature(ModelKind kind, int n = 2);

} // namespace psk
