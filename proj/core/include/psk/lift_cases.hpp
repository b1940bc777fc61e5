#pragma once

#include "psk/deviance.hpp"
#include "psk/lift.hpp"

namespace psk {

// Exact lift inputs of the accepted classification cases. All constants at
// the calibrated parameters live in Q(sqrt2): case III carries sqrt2 itself,
// the d'-family cases reduce to rationals once a = 1/sqrt(delta).

inline LiftData<Cq> lift_data_case_iii() {
    LiftData<Cq> d;
    d.n = 2;
    d.sc = StructureConstants<Cq>(4);
    RootTwo s2 = RootTwo::sqrt2();
    d.sc.set(1, 0, 1, Cq(s2));
    d.sc.set(3, 2, 3, Cq(RootTwo(2)));
    d.lambda = {Cq(0), Cq(-(s2 * RootTwo(Rational(1, 2)))), Cq(0), Cq(RootTwo(Rational(-1, 2)))};
    d.sigma.assign(8, Cq(0));
    d.set_sigma_sym(0, 0, 1, Cq(RootTwo(Rational(1, 2)))); // sigma = (3/2)(theta1)^2 theta2
    return d;
}

inline LiftData<Cq> lift_data_case_vii() {
    LiftData<Cq> d;
    d.n = 2;
    d.sc = StructureConstants<Cq>(4);
    d.sc.set(3, 0, 1, Cq(2));
    d.sc.set(0, 0, 2, Cq(-1));
    d.sc.set(1, 1, 2, Cq(-1));
    d.sc.set(3, 2, 3, Cq(2));
    d.lambda = {Cq(0), Cq(0), Cq(0), Cq(RootTwo(Rational(-1, 2)))};
    return d;
}

// a = 1/sqrt(delta) makes every bracket coefficient rational: a sqrt(delta) = 1
// and 2a/sqrt(delta) = 2/delta.
inline LiftData<Cq> lift_data_case_viii(const Rational& delta) {
    LiftData<Cq> d;
    d.n = 2;
    d.sc = StructureConstants<Cq>(4);
    Rational two_over(Rational(2) / delta);
    d.sc.set(3, 0, 1, Cq(2));
    d.sc.set(0, 0, 2, Cq(-1));
    d.sc.set(1, 0, 2, Cq(RootTwo(two_over)));
    d.sc.set(0, 1, 2, Cq(-RootTwo(two_over)));
    d.sc.set(1, 1, 2, Cq(-1));
    d.sc.set(3, 2, 3, Cq(2));
    d.lambda = {Cq(0), Cq(0), Cq(0), Cq(RootTwo(Rational(-1, 2)))};
    return d;
}

inline LiftData<Cq> lift_data_case_ix(const Rational& delta) {
    LiftData<Cq> d;
    d.n = 2;
    d.sc = StructureConstants<Cq>(4);
    Rational two_over(Rational(2) / delta);
    d.sc.set(2, 0, 1, Cq(-2));
    d.sc.set(0, 0, 3, Cq(-1));
    d.sc.set(1, 0, 3, Cq(-RootTwo(two_over)));
    d.sc.set(0, 1, 3, Cq(RootTwo(two_over)));
    d.sc.set(1, 1, 3, Cq(-1));
    d.sc.set(2, 2, 3, Cq(-2));
    d.lambda = {Cq(0), Cq(0), Cq(RootTwo(Rational(1, 2))), Cq(0)};
    return d;
}

// Double-precision lift inputs from a validated structure, a potential and a
// deviance (the CLI path for files that leave Q(sqrt2)).
inline LiftData<Cd> lift_data(const KahlerStructure& ks, const std::vector<double>& lambda,
                              const Deviance& dev) {
    LiftData<Cd> d;
    d.n = ks.n();
    d.sc = ks.alg.sc;
    d.lambda.clear();
    for (double v : lambda) d.lambda.push_back(Cd(v));
    if (!dev.is_zero()) {
        d.sigma.assign(size_t(d.n) * d.n * d.n, Cd(0));
        for (int k = 0; k < d.n; ++k)
            for (int j = 0; j < d.n; ++j)
                for (int h = 0; h < d.n; ++h)
                    d.sigma[(size_t(k) * d.n + j) * d.n + h] = dev.sigma(k, j, h);
    }
    return d;
}

// Exact data from a parsed file whose coefficients all stayed in Q(sqrt2).
inline LiftData<Cq> lift_data_exact(int n, const StructureConstants<Cq>& sc,
                                    const std::vector<RootTwo>& lambda,
                                    const std::array<Cq, 4>& cubic, bool has_deviance) {
    LiftData<Cq> d;
    d.n = n;
    d.sc = sc;
    for (const auto& l : lambda) d.lambda.push_back(Cq(l));
    if (d.lambda.empty()) d.lambda.assign(2 * n, Cq(0));
    if (has_deviance && n == 2) {
        bool nonzero = false;
        for (const auto& c : cubic) nonzero = nonzero || !is_zero(c);
        if (nonzero) {
            d.sigma.assign(8, Cq(0));
            Cq third = Cq(RootTwo(Rational(1, 3)));
            d.set_sigma_sym(0, 0, 0, cubic[0]);
            d.set_sigma_sym(0, 0, 1, third * cubic[1]);
            d.set_sigma_sym(0, 1, 1, third * cubic[2]);
            d.set_sigma_sym(1, 1, 1, cubic[3]);
        }
    }
    return d;
}

} // namespace psk
