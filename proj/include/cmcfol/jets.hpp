#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace cmcfol {

// Truncated bivariate Taylor expansion of total order N in two chart
// directions (theta, lambda). Coefficients are stored in Taylor form,
// c[(a,b)] = d^a_theta d^b_lambda f / (a! b!), so products are plain
// convolutions. Quantities assembled from partially known inputs stay
// valid up to the smallest input order; higher coefficients are never
// read in that case. N = 2 covers first and second fundamental forms,
// N = 4 leaves room for two more derivatives on top of those.
template <int N>
struct JetT {
    static constexpr int Order = N;
    static constexpr int Size = (N + 1) * (N + 2) / 2;
    std::array<double, Size> c{};

    static constexpr int tri(int s) { return s * (s + 1) / 2; }
    static constexpr int idx(int a, int b) { return tri(a + b) + b; }

    static constexpr std::array<double, N + 1> factorials() {
        std::array<double, N + 1> f{};
        f[0] = 1.0;
        for (int k = 1; k <= N; ++k) f[k] = f[k - 1] * k;
        return f;
    }

    JetT() = default;
    explicit JetT(double v) { c[0] = v; }

    static JetT variable(double v, int which) {
        JetT j(v);
        j.c[which == 0 ? idx(1, 0) : idx(0, 1)] = 1.0;
        return j;
    }

    // Seed from derivative values d[a][b] = d^a_theta d^b_lambda f.
    static JetT from_derivs(const std::array<std::array<double, N + 1>, N + 1>& d) {
        constexpr auto fact = factorials();
        JetT j;
        for (int a = 0; a <= Order; ++a)
            for (int b = 0; b + a <= Order; ++b)
                j.c[idx(a, b)] = d[a][b] / (fact[a] * fact[b]);
        return j;
    }

    double value() const { return c[0]; }
    double deriv(int a, int b) const {
        constexpr auto fact = factorials();
        return c[idx(a, b)] * fact[a] * fact[b];
    }

    // Taylor derivative along theta (which = 0) or lambda (which = 1).
    // The order-N coefficients of the result would need order N+1 input
    // and are left at zero; callers track validity the same way they do
    // for partially known products.
    JetT d(int which) const {
        JetT r;
        for (int a = 0; a + 1 <= Order; ++a)
            for (int b = 0; a + b + 1 <= Order; ++b) {
                if (which == 0)
                    r.c[idx(a, b)] = (a + 1) * c[idx(a + 1, b)];
                else
                    r.c[idx(a, b)] = (b + 1) * c[idx(a, b + 1)];
            }
        return r;
    }

    JetT& operator+=(const JetT& o) {
        for (int i = 0; i < Size; ++i) c[i] += o.c[i];
        return *this;
    }
    JetT& operator-=(const JetT& o) {
        for (int i = 0; i < Size; ++i) c[i] -= o.c[i];
        return *this;
    }
    JetT& operator*=(double s) {
        for (int i = 0; i < Size; ++i) c[i] *= s;
        return *this;
    }

    friend JetT operator+(JetT a, const JetT& b) { return a += b; }
    friend JetT operator-(JetT a, const JetT& b) { return a -= b; }
    friend JetT operator-(const JetT& a) {
        JetT r;
        for (int i = 0; i < Size; ++i) r.c[i] = -a.c[i];
        return r;
    }
    friend JetT operator*(JetT a, double s) { return a *= s; }
    friend JetT operator*(double s, JetT a) { return a *= s; }
    friend JetT operator+(JetT a, double s) {
        a.c[0] += s;
        return a;
    }
    friend JetT operator+(double s, JetT a) {
        a.c[0] += s;
        return a;
    }
    friend JetT operator-(JetT a, double s) {
        a.c[0] -= s;
        return a;
    }
    friend JetT operator-(double s, const JetT& a) {
        JetT r = -a;
        r.c[0] += s;
        return r;
    }

    friend JetT operator*(const JetT& x, const JetT& y) {
        JetT r;
        for (int s1 = 0; s1 <= Order; ++s1) {
            for (int b1 = 0; b1 <= s1; ++b1) {
                const double xv = x.c[tri(s1) + b1];
                if (xv == 0.0) continue;
                const int a1 = s1 - b1;
                for (int s2 = 0; s1 + s2 <= Order; ++s2)
                    for (int b2 = 0; b2 <= s2; ++b2)
                        r.c[idx(a1 + (s2 - b2), b1 + b2)] += xv * y.c[tri(s2) + b2];
            }
        }
        return r;
    }
};

// F(u) for scalar F with function derivatives df[k] = F^(k)(u.value()).
template <int N>
JetT<N> compose(const std::array<double, N + 1>& df, const JetT<N>& u) {
    JetT<N> du = u;
    du.c[0] = 0.0;
    JetT<N> pw(1.0);
    JetT<N> r(df[0]);
    constexpr auto fact = JetT<N>::factorials();
    for (int k = 1; k <= N; ++k) {
        pw = pw * du;
        r += pw * (df[k] / fact[k]);
    }
    return r;
}

template <int N>
JetT<N> recip(const JetT<N>& u) {
    const double v = u.value();
    std::array<double, N + 1> df;
    df[0] = 1.0 / v;
    for (int k = 1; k <= N; ++k) df[k] = -k * df[k - 1] / v;
    return compose(df, u);
}

template <int N>
JetT<N> operator/(const JetT<N>& a, const JetT<N>& b) {
    return a * recip(b);
}
template <int N>
JetT<N> operator/(const JetT<N>& a, double s) {
    return a * (1.0 / s);
}
template <int N>
JetT<N> operator/(double s, const JetT<N>& b) {
    return recip(b) * s;
}

template <int N>
JetT<N> sqrt(const JetT<N>& u) {
    const double v = u.value();
    std::array<double, N + 1> df;
    df[0] = std::sqrt(v);
    for (int k = 1; k <= N; ++k) df[k] = (1.5 - k) * df[k - 1] / v;
    return compose(df, u);
}

template <int N>
JetT<N> sin(const JetT<N>& u) {
    const double s = std::sin(u.value());
    const double c = std::cos(u.value());
    const double cyc[4] = {s, c, -s, -c};
    std::array<double, N + 1> df;
    for (int k = 0; k <= N; ++k) df[k] = cyc[k % 4];
    return compose(df, u);
}

template <int N>
JetT<N> cos(const JetT<N>& u) {
    const double s = std::sin(u.value());
    const double c = std::cos(u.value());
    const double cyc[4] = {c, -s, -c, s};
    std::array<double, N + 1> df;
    for (int k = 0; k <= N; ++k) df[k] = cyc[k % 4];
    return compose(df, u);
}

using Jet = JetT<4>;
using Jet2 = JetT<2>;

// Adapters so the geometry kernel can be instantiated with plain doubles.
inline double value_of(double x) { return x; }
template <int N>
double value_of(const JetT<N>& x) {
    return x.value();
}
inline double recip(double x) { return 1.0 / x; }

}  // namespace cmcfol
