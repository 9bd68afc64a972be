#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <tuple>
#include <vector>

#include "cmcfol/errors.hpp"

namespace cmcfol {

using T3 = std::array<double, 3>;
using T33 = std::array<T3, 3>;
using T333 = std::array<T33, 3>;
using T3333 = std::array<T333, 3>;
using T33333 = std::array<T3333, 3>;

inline double dot3(const T3& a, const T3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm3(const T3& a) { return std::sqrt(dot3(a, a)); }

// Multi-indices (a1,a2,a3) with |a| <= 3, graded order. midx() inverts the table.
inline constexpr int n_midx = 20;
inline constexpr std::array<std::array<int, 3>, n_midx> midx_list = {{
    {0, 0, 0},
    {1, 0, 0}, {0, 1, 0}, {0, 0, 1},
    {2, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 2, 0}, {0, 1, 1}, {0, 0, 2},
    {3, 0, 0}, {2, 1, 0}, {2, 0, 1}, {1, 2, 0}, {1, 1, 1}, {1, 0, 2},
    {0, 3, 0}, {0, 2, 1}, {0, 1, 2}, {0, 0, 3},
}};

inline int midx(int a1, int a2, int a3) {
    for (int q = 0; q < n_midx; ++q)
        if (midx_list[q][0] == a1 && midx_list[q][1] == a2 && midx_list[q][2] == a3) return q;
    return -1;
}

// One metric-component term: coef * y^mono * |y|^(-power), y = x - offset.
// Closed under partial derivatives, which is the whole point.
struct Atom {
    int i = 0, j = 0;  // 0-based component indices
    double coef = 0.0;
    std::array<int, 3> mono{0, 0, 0};
    double power = 0.0;
    T3 offset{0.0, 0.0, 0.0};
};

// g, dg[k](i,j) = d_k g_ij, ddg[k][l], dddg[k][l][m]; filled up to `order`.
struct MetricJet {
    T3 x{};
    int order = 0;
    T33 g{};
    T333 dg{};
    T3333 ddg{};
    T33333 dddg{};
};

struct CurvatureSample {
    T333 gamma;  // gamma[k](i,j) = Gamma^k_ij
    T33 ric;
    double scal = 0.0;
};

struct GammaJet {
    int order = 0;
    T333 G{};      // G[k](i,j)
    T3333 dG{};    // dG[d][k](i,j) = d_d Gamma^k_ij
    T33333 ddG{};  // ddG[e][d][k](i,j)
};

struct RicciJet {
    int order = 0;
    T33 ric{};
    double scal = 0.0;
    T333 dric{};  // dric[d](i,j) = d_d Ric_ij
    T3 dscal{};
};

struct ArtificialData {
    T33 kbar{};  // (g_S - g)/2
    T3 jbar{};   // components of div_g(tr kbar g - kbar)
};

namespace detail {

struct PTerm {
    double c;
    std::array<int, 3> a;
    double p;  // exponent of |y|^{-p}
};

inline void diff_pterm(const PTerm& t, int d, std::vector<PTerm>& out) {
    if (t.a[d] > 0) {
        PTerm u = t;
        u.c *= t.a[d];
        u.a[d] -= 1;
        out.push_back(u);
    }
    if (t.p != 0.0) {
        PTerm u = t;
        u.c *= -t.p;
        u.a[d] += 1;
        u.p += 2.0;
        out.push_back(u);
    }
}

inline void merge_pterms(std::vector<PTerm>& v) {
    std::map<std::tuple<int, int, int, double>, double> acc;
    for (const auto& t : v) acc[{t.a[0], t.a[1], t.a[2], t.p}] += t.c;
    v.clear();
    for (const auto& [key, c] : acc)
        if (c != 0.0) v.push_back({c, {std::get<0>(key), std::get<1>(key), std::get<2>(key)}, std::get<3>(key)});
}

struct CompiledAtom {
    int i, j;
    T3 offset;
    std::array<std::vector<PTerm>, n_midx> d;  // plain partials per multi-index
    bool half_integer = true;                  // every p a multiple of 1/2
    int max_hp = 0;                            // max 2*p over all terms
};

inline CompiledAtom compile_atom(const Atom& a) {
    CompiledAtom ca;
    ca.i = a.i;
    ca.j = a.j;
    ca.offset = a.offset;
    ca.d[0] = {{a.coef, a.mono, a.power}};
    for (int q = 1; q < n_midx; ++q) {
        auto g = midx_list[q];
        int dd = g[0] > 0 ? 0 : (g[1] > 0 ? 1 : 2);
        g[dd] -= 1;
        int src = midx(g[0], g[1], g[2]);
        for (const auto& t : ca.d[src]) diff_pterm(t, dd, ca.d[q]);
        merge_pterms(ca.d[q]);
    }
    for (const auto& lst : ca.d)
        for (const auto& t : lst) {
            double hp = 2.0 * t.p;
            if (std::abs(hp - std::round(hp)) > 1e-12 || hp < 0.0) ca.half_integer = false;
            ca.max_hp = std::max(ca.max_hp, (int)std::lround(hp));
        }
    return ca;
}

inline double powi(double x, int n) {
    double r = 1.0;
    for (int k = 0; k < n; ++k) r *= x;
    return r;
}

// symmetric 3x3 eigenvalues, analytic (trig method); ascending
inline T3 sym_eigenvalues(const T33& A) {
    double p1 = A[0][1] * A[0][1] + A[0][2] * A[0][2] + A[1][2] * A[1][2];
    if (p1 == 0.0) {
        T3 e{A[0][0], A[1][1], A[2][2]};
        std::sort(e.begin(), e.end());
        return e;
    }
    double q = (A[0][0] + A[1][1] + A[2][2]) / 3.0;
    double p2 = 2.0 * p1;
    for (int i = 0; i < 3; ++i) p2 += (A[i][i] - q) * (A[i][i] - q);
    double p = std::sqrt(p2 / 6.0);
    T33 B{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) B[i][j] = (A[i][j] - (i == j ? q : 0.0)) / p;
    double detB = B[0][0] * (B[1][1] * B[2][2] - B[1][2] * B[2][1]) -
                  B[0][1] * (B[1][0] * B[2][2] - B[1][2] * B[2][0]) +
                  B[0][2] * (B[1][0] * B[2][1] - B[1][1] * B[2][0]);
    double r = std::clamp(detB / 2.0, -1.0, 1.0);
    double phi = std::acos(r) / 3.0;
    double e1 = q + 2.0 * p * std::cos(phi);
    double e3 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
    return {e3, 3.0 * q - e1 - e3, e1};
}

}  // namespace detail

// deterministic low-discrepancy direction k of n (Fibonacci lattice on S^2)
inline T3 fibonacci_direction(int k, int n) {
    const double ga = std::numbers::pi * (3.0 - std::sqrt(5.0));
    double z = 1.0 - (2.0 * k + 1.0) / n;
    double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    double ph = ga * k;
    return {s * std::cos(ph), s * std::sin(ph), z};
}

class MetricModel {
  public:
    std::string type = "euclidean";  // euclidean | schwarzschild | sum
    double mass = 0.0;
    T3 center{0.0, 0.0, 0.0};
    double r_min = 0.0;
    double epsilon = 0.5;
    std::vector<Atom> terms;  // explicit atoms on top of the builtin base

    MetricModel() = default;

    static MetricModel euclidean() {
        MetricModel m;
        m.type = "euclidean";
        m.compile();
        return m;
    }

    static MetricModel schwarzschild(double mass, const T3& z = {0.0, 0.0, 0.0}) {
        MetricModel m;
        m.type = "schwarzschild";
        m.mass = mass;
        m.center = z;
        m.r_min = std::max(1.0, std::abs(mass));
        m.compile();
        return m;
    }

    // Schwarzschild plus odd (reflection-asymmetric) decaying terms; in the
    // epsilon = 1/2 class with scalar curvature ~ r^{-7/2}.
    static MetricModel schwarzschild_perturbed_odd(double mass, double amp) {
        MetricModel m;
        m.type = "sum";
        m.mass = mass;
        m.r_min = std::max(1.0, std::abs(mass));
        m.terms = {
            {0, 0, amp, {1, 0, 0}, 2.5, {0, 0, 0}},
            {1, 1, 0.6 * amp, {0, 0, 1}, 2.5, {0, 0, 0}},
            {0, 1, 0.4 * amp, {0, 1, 0}, 2.5, {0, 0, 0}},
        };
        m.compile();
        return m;
    }

    // Schwarzschild plus even terms: exactly reflection-symmetric, so the
    // Regge-Teitelboim defects vanish identically.
    static MetricModel schwarzschild_perturbed_rt(double mass, double amp) {
        MetricModel m;
        m.type = "sum";
        m.mass = mass;
        m.r_min = std::max(1.0, std::abs(mass));
        m.terms = {
            {0, 0, amp, {1, 1, 0}, 3.5, {0, 0, 0}},
            {1, 1, -amp, {1, 1, 0}, 3.5, {0, 0, 0}},
            {0, 2, 0.6 * amp, {2, 0, 0}, 3.5, {0, 0, 0}},
            {0, 2, -0.6 * amp, {0, 2, 0}, 3.5, {0, 0, 0}},
        };
        m.compile();
        return m;
    }

    // Schwarzschild plus a pure trace term a/r^2 * delta.
    static MetricModel trace_perturbed(double mass, double a) {
        MetricModel m;
        m.type = "sum";
        m.mass = mass;
        m.r_min = std::max(1.0, std::abs(mass));
        for (int d = 0; d < 3; ++d) m.terms.push_back({d, d, a, {0, 0, 0}, 2.0, {0, 0, 0}});
        m.compile();
        return m;
    }

    // Expand the builtin base and precompute symbolic derivative tables.
    void compile() {
        if (type != "euclidean" && type != "schwarzschild" && type != "sum")
            throw ConfigError("metric model: unknown type '" + type + "'");
        atoms_.clear();
        if (type == "schwarzschild" || type == "sum") {
            // (1 + m/2|y|)^4 = 1 + sum_k binom(4,k)(m/2)^k |y|^{-k}
            const double binom[5] = {1, 4, 6, 4, 1};
            for (int k = 1; k <= 4; ++k) {
                double c = binom[k] * detail::powi(0.5 * mass, k);
                if (c == 0.0) continue;
                for (int d = 0; d < 3; ++d) atoms_.push_back({d, d, c, {0, 0, 0}, (double)k, center});
            }
        }
        for (const auto& t : terms) {
            if (t.i < 0 || t.i > 2 || t.j < 0 || t.j > 2) throw ConfigError("metric term: index out of range");
            if (t.mono[0] < 0 || t.mono[1] < 0 || t.mono[2] < 0)
                throw ConfigError("metric term: negative monomial exponent");
            atoms_.push_back(t);
        }
        compiled_.clear();
        compiled_.reserve(atoms_.size());
        for (const auto& a : atoms_) compiled_.push_back(detail::compile_atom(a));
    }

    // g, dg, ddg, dddg at x by term-wise calculus; order in [0,3]
    MetricJet jet(const T3& x, int order = 2) const {
        if (order < 0 || order > 3) throw ConfigError("metric jet: order must be in [0,3]");
        if (norm3(x) < r_min * (1.0 - 1e-12)) throw DomainError("metric evaluation inside exclusion radius");
        MetricJet J;
        J.x = x;
        J.order = order;
        for (int i = 0; i < 3; ++i) J.g[i][i] = 1.0;
        int qmax = order == 0 ? 1 : (order == 1 ? 4 : (order == 2 ? 10 : n_midx));
        std::array<double, 48> spow;  // |y|^{-k/2} table for the half-integer fast path
        for (const auto& ca : compiled_) {
            T3 y{x[0] - ca.offset[0], x[1] - ca.offset[1], x[2] - ca.offset[2]};
            double s2 = dot3(y, y);
            if (s2 <= 0.0) throw DomainError("metric evaluation at an atom singularity");
            double val[n_midx];
            if (ca.half_integer && ca.max_hp < 48) {
                double h = 1.0 / std::sqrt(std::sqrt(s2));  // |y|^{-1/2}
                spow[0] = 1.0;
                for (int k = 1; k <= ca.max_hp; ++k) spow[k] = spow[k - 1] * h;
                for (int q = 0; q < qmax; ++q) {
                    double v = 0.0;
                    for (const auto& t : ca.d[q])
                        v += t.c * detail::powi(y[0], t.a[0]) * detail::powi(y[1], t.a[1]) *
                             detail::powi(y[2], t.a[2]) * spow[(int)std::lround(2.0 * t.p)];
                    val[q] = v;
                }
            } else {
                for (int q = 0; q < qmax; ++q) {
                    double v = 0.0;
                    for (const auto& t : ca.d[q])
                        v += t.c * detail::powi(y[0], t.a[0]) * detail::powi(y[1], t.a[1]) *
                             detail::powi(y[2], t.a[2]) * std::pow(s2, -0.5 * t.p);
                    val[q] = v;
                }
            }
            int i = ca.i, j = ca.j;
            auto put = [&](double v, auto&& set) {
                set(i, j, v);
                if (i != j) set(j, i, v);
            };
            put(val[0], [&](int a, int b, double v) { J.g[a][b] += v; });
            if (order >= 1)
                for (int d = 0; d < 3; ++d)
                    put(val[1 + d], [&](int a, int b, double v) { J.dg[d][a][b] += v; });
            if (order >= 2)
                for (int d = 0; d < 3; ++d)
                    for (int e = d; e < 3; ++e) {
                        std::array<int, 3> m{0, 0, 0};
                        m[d] += 1;
                        m[e] += 1;
                        double v = val[midx(m[0], m[1], m[2])];
                        put(v, [&](int a, int b, double w) {
                            J.ddg[d][e][a][b] += w;
                            if (d != e) J.ddg[e][d][a][b] += w;
                        });
                    }
            if (order >= 3)
                for (int d = 0; d < 3; ++d)
                    for (int e = d; e < 3; ++e)
                        for (int f = e; f < 3; ++f) {
                            std::array<int, 3> m{0, 0, 0};
                            m[d] += 1;
                            m[e] += 1;
                            m[f] += 1;
                            double v = val[midx(m[0], m[1], m[2])];
                            int perm[6][3] = {{d, e, f}, {d, f, e}, {e, d, f}, {e, f, d}, {f, d, e}, {f, e, d}};
                            bool seen[27] = {};
                            for (auto& p : perm) {
                                int key = p[0] * 9 + p[1] * 3 + p[2];
                                if (seen[key]) continue;
                                seen[key] = true;
                                put(v, [&](int a, int b, double w) { J.dddg[p[0]][p[1]][p[2]][a][b] += w; });
                            }
                        }
        }
        return J;
    }

    bool positive_definite_on_shell(double r, int n = 1000, double* min_eig = nullptr) const {
        double lo = 1e300;
        for (int k = 0; k < n; ++k) {
            T3 u = fibonacci_direction(k, n);
            MetricJet J = jet({r * u[0], r * u[1], r * u[2]}, 0);
            lo = std::min(lo, detail::sym_eigenvalues(J.g)[0]);
        }
        if (min_eig) *min_eig = lo;
        return lo > 0.0;
    }

    void validate() const {
        double base = r_min > 0.0 ? r_min : 1.0;
        for (double r : {base, 2.0 * base, 4.0 * base, 8.0 * base}) {
            double lo;
            if (!positive_definite_on_shell(r, 1000, &lo))
                throw DomainError("metric not positive definite on shell r=" + std::to_string(r) +
                                  " (min eigenvalue " + std::to_string(lo) + ")");
        }
    }

    const std::vector<Atom>& atoms() const { return atoms_; }

  private:
    std::vector<Atom> atoms_;  // base expansion + explicit terms
    std::vector<detail::CompiledAtom> compiled_;
};

inline T33 invert_sym3(const T33& g) {
    double det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) -
                 g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
                 g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
    double scale = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) scale = std::max(scale, std::abs(g[i][j]));
    if (std::abs(det) < 1e-14 * scale * scale * scale)
        throw SolverError("singular metric: det=" + std::to_string(det) + ", max entry " + std::to_string(scale));
    double id = 1.0 / det;
    T33 inv;
    inv[0][0] = (g[1][1] * g[2][2] - g[1][2] * g[2][1]) * id;
    inv[0][1] = (g[0][2] * g[2][1] - g[0][1] * g[2][2]) * id;
    inv[0][2] = (g[0][1] * g[1][2] - g[0][2] * g[1][1]) * id;
    inv[1][1] = (g[0][0] * g[2][2] - g[0][2] * g[2][0]) * id;
    inv[1][2] = (g[0][2] * g[1][0] - g[0][0] * g[1][2]) * id;
    inv[2][2] = (g[0][0] * g[1][1] - g[0][1] * g[1][0]) * id;
    inv[1][0] = inv[0][1];
    inv[2][0] = inv[0][2];
    inv[2][1] = inv[1][2];
    return inv;
}

// Gamma^k_ij = 1/2 g^{kl}(d_i g_jl + d_j g_il - d_l g_ij), with spatial
// derivatives up to ddG when the jet carries enough orders.
inline GammaJet christoffel_jet(const MetricJet& J, int order = 0) {
    if (order > J.order - 1) throw ConfigError("christoffel_jet: jet order too low");
    GammaJet out;
    out.order = order;
    T33 gi = invert_sym3(J.g);

    auto A = [&](int l, int i, int j) { return J.dg[i][j][l] + J.dg[j][i][l] - J.dg[l][i][j]; };
    auto dA = [&](int d, int l, int i, int j) {
        return J.ddg[d][i][j][l] + J.ddg[d][j][i][l] - J.ddg[d][l][i][j];
    };
    auto ddA = [&](int e, int d, int l, int i, int j) {
        return J.dddg[e][d][i][j][l] + J.dddg[e][d][j][i][l] - J.dddg[e][d][l][i][j];
    };

    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int l = 0; l < 3; ++l) s += gi[k][l] * A(l, i, j);
                out.G[k][i][j] = 0.5 * s;
            }
    if (order < 1) return out;

    T333 dgi{};  // d_d g^{kl} = -g^{ka} d_d g_ab g^{bl}
    for (int d = 0; d < 3; ++d)
        for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l) {
                double s = 0.0;
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b) s += gi[k][a] * J.dg[d][a][b] * gi[b][l];
                dgi[d][k][l] = -s;
            }
    for (int d = 0; d < 3; ++d)
        for (int k = 0; k < 3; ++k)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    double s = 0.0;
                    for (int l = 0; l < 3; ++l) s += dgi[d][k][l] * A(l, i, j) + gi[k][l] * dA(d, l, i, j);
                    out.dG[d][k][i][j] = 0.5 * s;
                }
    if (order < 2) return out;

    for (int e = 0; e < 3; ++e)
        for (int d = 0; d < 3; ++d) {
            T33 ddgi;  // d_e d_d g^{-1}
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    double v = 0.0;
                    for (int a = 0; a < 3; ++a)
                        for (int b = 0; b < 3; ++b) {
                            v -= gi[k][a] * J.ddg[e][d][a][b] * gi[b][l];
                            v -= dgi[e][k][a] * J.dg[d][a][b] * gi[b][l];
                            v -= gi[k][a] * J.dg[d][a][b] * dgi[e][b][l];
                        }
                    ddgi[k][l] = v;
                }
            for (int k = 0; k < 3; ++k)
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) {
                        double s = 0.0;
                        for (int l = 0; l < 3; ++l)
                            s += ddgi[k][l] * A(l, i, j) + dgi[e][k][l] * dA(d, l, i, j) +
                                 dgi[d][k][l] * dA(e, l, i, j) + gi[k][l] * ddA(e, d, l, i, j);
                        out.ddG[e][d][k][i][j] = 0.5 * s;
                    }
        }
    return out;
}

// Ric_ij = d_l Gamma^l_ij - d_i Gamma^l_lj + Gamma^l_lm Gamma^m_ij - Gamma^l_im Gamma^m_lj
inline RicciJet ricci_jet(const MetricJet& J, const GammaJet& C, int order = 0) {
    if (order > C.order - 1) throw ConfigError("ricci_jet: christoffel order too low");
    RicciJet out;
    out.order = order;
    T33 gi = invert_sym3(J.g);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int l = 0; l < 3; ++l) {
                s += C.dG[l][l][i][j] - C.dG[i][l][l][j];
                for (int m = 0; m < 3; ++m) s += C.G[l][l][m] * C.G[m][i][j] - C.G[l][i][m] * C.G[m][l][j];
            }
            out.ric[i][j] = s;
        }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out.scal += gi[i][j] * out.ric[i][j];
    if (order < 1) return out;

    T333 dgi{};
    for (int d = 0; d < 3; ++d)
        for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l) {
                double s = 0.0;
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b) s += gi[k][a] * J.dg[d][a][b] * gi[b][l];
                dgi[d][k][l] = -s;
            }
    for (int d = 0; d < 3; ++d)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int l = 0; l < 3; ++l) {
                    s += C.ddG[d][l][l][i][j] - C.ddG[d][i][l][l][j];
                    for (int m = 0; m < 3; ++m)
                        s += C.dG[d][l][l][m] * C.G[m][i][j] + C.G[l][l][m] * C.dG[d][m][i][j] -
                             C.dG[d][l][i][m] * C.G[m][l][j] - C.G[l][i][m] * C.dG[d][m][l][j];
                }
                out.dric[d][i][j] = s;
            }
    for (int d = 0; d < 3; ++d) {
        double s = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) s += dgi[d][i][j] * out.ric[i][j] + gi[i][j] * out.dric[d][i][j];
        out.dscal[d] = s;
    }
    return out;
}

inline CurvatureSample christoffels(const MetricJet& J) {
    CurvatureSample c{};
    c.gamma = christoffel_jet(J, 0).G;
    return c;
}

inline CurvatureSample curvature(const MetricJet& J) {
    CurvatureSample c{};
    GammaJet C = christoffel_jet(J, 1);
    RicciJet R = ricci_jet(J, C, 0);
    c.gamma = C.G;
    c.ric = R.ric;
    c.scal = R.scal;
    return c;
}

// residual of the contracted second Bianchi identity div(Ric - S g / 2) = 0,
// max over the free index; exact derivative route
inline double bianchi_residual(const MetricModel& model, const T3& x) {
    MetricJet J = model.jet(x, 3);
    GammaJet C = christoffel_jet(J, 2);
    RicciJet R = ricci_jet(J, C, 1);
    T33 gi = invert_sym3(J.g);
    // E_ij = Ric_ij - 1/2 S g_ij; res_j = g^{ab}(d_a E_bj - Gamma^c_ab E_cj - Gamma^c_aj E_bc)
    T33 E;
    T333 dE;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            E[i][j] = R.ric[i][j] - 0.5 * R.scal * J.g[i][j];
            for (int d = 0; d < 3; ++d)
                dE[d][i][j] = R.dric[d][i][j] - 0.5 * (R.dscal[d] * J.g[i][j] + R.scal * J.dg[d][i][j]);
        }
    double worst = 0.0;
    for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                double t = dE[a][b][j];
                for (int c = 0; c < 3; ++c) t -= C.G[c][a][b] * E[c][j] + C.G[c][a][j] * E[b][c];
                s += gi[a][b] * t;
            }
        worst = std::max(worst, std::abs(s));
    }
    return worst;
}

// g_tau = g_S + tau (g_target - g_S), term-wise; shares the Schwarzschild base
inline MetricModel interpolate(const MetricModel& schw, const MetricModel& target, double tau) {
    if (tau < 0.0 || tau > 1.0) throw ConfigError("interpolate: tau outside [0,1]");
    if (schw.type != "schwarzschild") throw ConfigError("interpolate: base model must be schwarzschild");
    if (schw.mass != target.mass || schw.center != target.center)
        throw ConfigError("interpolate: models must share the Schwarzschild base");
    if (schw.r_min != target.r_min) throw ConfigError("interpolate: models must share r_min");
    MetricModel out;
    out.type = "sum";
    out.mass = schw.mass;
    out.center = schw.center;
    out.r_min = schw.r_min;
    out.epsilon = std::min(schw.epsilon, target.epsilon);
    // implicit base contributes the full Schwarzschild atoms; add
    // tau * target_atoms - tau * schw_atoms, merging like atoms exactly
    std::map<std::tuple<int, int, int, int, int, double, double, double, double>, double> acc;
    auto add = [&](const std::vector<Atom>& atoms, double w) {
        for (const auto& a : atoms)
            acc[{a.i, a.j, a.mono[0], a.mono[1], a.mono[2], a.power, a.offset[0], a.offset[1], a.offset[2]}] +=
                w * a.coef;
    };
    add(target.atoms(), tau);
    add(schw.atoms(), -tau);
    for (const auto& [k, c] : acc) {
        if (c == 0.0) continue;
        Atom a;
        a.i = std::get<0>(k);
        a.j = std::get<1>(k);
        a.mono = {std::get<2>(k), std::get<3>(k), std::get<4>(k)};
        a.power = std::get<5>(k);
        a.offset = {std::get<6>(k), std::get<7>(k), std::get<8>(k)};
        a.coef = c;
        out.terms.push_back(a);
    }
    out.compile();
    return out;
}

// kbar = (g_S - g)/2 and jbar = div_g(tr_g kbar g - kbar), both exact
inline ArtificialData artificial_data(const MetricModel& target, const MetricModel& schw, const T3& x) {
    MetricJet Jt = target.jet(x, 1);
    MetricJet Js = schw.jet(x, 1);
    GammaJet C = christoffel_jet(target.jet(x, 2), 0);
    T33 gi = invert_sym3(Jt.g);
    ArtificialData out;
    T33 kb;
    T333 dkb;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            kb[i][j] = 0.5 * (Js.g[i][j] - Jt.g[i][j]);
            for (int d = 0; d < 3; ++d) dkb[d][i][j] = 0.5 * (Js.dg[d][i][j] - Jt.dg[d][i][j]);
        }
    out.kbar = kb;
    T333 dgi{};
    for (int d = 0; d < 3; ++d)
        for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l) {
                double s = 0.0;
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b) s += gi[k][a] * Jt.dg[d][a][b] * gi[b][l];
                dgi[d][k][l] = -s;
            }
    double tr = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) tr += gi[a][b] * kb[a][b];
    T3 dtr{};
    for (int d = 0; d < 3; ++d)
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) dtr[d] += dgi[d][a][b] * kb[a][b] + gi[a][b] * dkb[d][a][b];
    // pi_ij = tr g_ij - kb_ij
    T33 P;
    T333 dP;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            P[i][j] = tr * Jt.g[i][j] - kb[i][j];
            for (int d = 0; d < 3; ++d)
                dP[d][i][j] = dtr[d] * Jt.g[i][j] + tr * Jt.dg[d][i][j] - dkb[d][i][j];
        }
    for (int i = 0; i < 3; ++i) {
        double s = 0.0;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                double t = dP[a][b][i];
                for (int c = 0; c < 3; ++c) t -= C.G[c][a][b] * P[c][i] + C.G[c][a][i] * P[b][c];
                s += gi[a][b] * t;
            }
        out.jbar[i] = s;
    }
    return out;
}

// Weighted suprema of the decay quantities over low-discrepancy shell samples,
// plus the reflection-difference analogues (note the + sign on Gamma).
struct DecayShell {
    double r = 0.0;
    double c_g = 0.0, c_gamma = 0.0, c_ric = 0.0, c_scal = 0.0;
    double rt_g = 0.0, rt_gamma = 0.0, rt_ric = 0.0, rt_scal = 0.0;
};

struct DecayReport {
    std::vector<DecayShell> shells;
    DecayShell overall;
};

inline DecayReport decay_report(const MetricModel& model, const std::vector<double>& radii, int nsamples = 200) {
    DecayReport rep;
    double eps = model.epsilon;
    for (double r : radii) {
        if (r < model.r_min) throw DomainError("decay_report: shell inside exclusion radius");
        DecayShell sh;
        sh.r = r;
        for (int k = 0; k < nsamples; ++k) {
            T3 u = fibonacci_direction(k, nsamples);
            T3 xp{r * u[0], r * u[1], r * u[2]};
            T3 xm{-xp[0], -xp[1], -xp[2]};
            MetricJet Jp = model.jet(xp, 2);
            MetricJet Jm = model.jet(xm, 2);
            CurvatureSample cp = curvature(Jp);
            CurvatureSample cm = curvature(Jm);
            double g_dev = 0.0, g_ref = 0.0, ga_max = 0.0, ga_ref = 0.0, ric_max = 0.0, ric_ref = 0.0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    g_dev = std::max(g_dev, std::abs(Jp.g[i][j] - (i == j ? 1.0 : 0.0)));
                    g_ref = std::max(g_ref, std::abs(Jp.g[i][j] - Jm.g[i][j]));
                    ric_max = std::max(ric_max, std::abs(cp.ric[i][j]));
                    ric_ref = std::max(ric_ref, std::abs(cp.ric[i][j] - cm.ric[i][j]));
                    for (int k2 = 0; k2 < 3; ++k2) {
                        ga_max = std::max(ga_max, std::abs(cp.gamma[k2][i][j]));
                        ga_ref = std::max(ga_ref, std::abs(cp.gamma[k2][i][j] + cm.gamma[k2][i][j]));
                    }
                }
            sh.c_g = std::max(sh.c_g, std::pow(r, 0.5 + eps) * g_dev);
            sh.c_gamma = std::max(sh.c_gamma, std::pow(r, 1.5 + eps) * ga_max);
            sh.c_ric = std::max(sh.c_ric, std::pow(r, 2.5 + eps) * ric_max);
            sh.c_scal = std::max(sh.c_scal, std::pow(r, 3.0 + eps) * std::abs(cp.scal));
            sh.rt_g = std::max(sh.rt_g, std::pow(r, 1.0 + eps) * g_ref);
            sh.rt_gamma = std::max(sh.rt_gamma, std::pow(r, 2.0 + eps) * ga_ref);
            sh.rt_ric = std::max(sh.rt_ric, std::pow(r, 3.0 + eps) * ric_ref);
            sh.rt_scal = std::max(sh.rt_scal, std::pow(r, 3.5 + eps) * std::abs(cp.scal - cm.scal));
        }
        rep.shells.push_back(sh);
    }
    for (const auto& sh : rep.shells) {
        rep.overall.c_g = std::max(rep.overall.c_g, sh.c_g);
        rep.overall.c_gamma = std::max(rep.overall.c_gamma, sh.c_gamma);
        rep.overall.c_ric = std::max(rep.overall.c_ric, sh.c_ric);
        rep.overall.c_scal = std::max(rep.overall.c_scal, sh.c_scal);
        rep.overall.rt_g = std::max(rep.overall.rt_g, sh.rt_g);
        rep.overall.rt_gamma = std::max(rep.overall.rt_gamma, sh.rt_gamma);
        rep.overall.rt_ric = std::max(rep.overall.rt_ric, sh.rt_ric);
        rep.overall.rt_scal = std::max(rep.overall.rt_scal, sh.rt_scal);
    }
    return rep;
}

}  // namespace cmcfol
