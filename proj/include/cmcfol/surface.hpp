#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "cmcfol/errors.hpp"
#include "cmcfol/jets.hpp"
#include "cmcfol/metric.hpp"
#include "cmcfol/sphere.hpp"

namespace cmcfol {

// ---------------------------------------------------------------------------
// Radial graph surface X(omega) = z + (rho + f(omega)) omega_hat. The graph
// function f is stored as real spherical-harmonic coefficients in the grid
// layout; an empty vector is a round sphere. Surfaces stay valid graphs as
// long as rho + min f > 0.
struct GraphSurface {
    T3 center{0.0, 0.0, 0.0};
    double rho = 1.0;
    std::vector<double> f;

    static GraphSurface round(double rho_, const T3& center_ = {0.0, 0.0, 0.0}) {
        GraphSurface s;
        s.center = center_;
        s.rho = rho_;
        return s;
    }

    // coefficients zero-padded onto the target grid; shrinking is only
    // allowed when the dropped tail is identically zero
    std::vector<double> coeffs_on(const SphereGrid& grid) const {
        std::vector<double> c(grid.nbasis(), 0.0);
        if (f.size() > c.size())
            for (std::size_t p = c.size(); p < f.size(); ++p)
                if (f[p] != 0.0) throw ConfigError("surface coefficients exceed grid bandlimit");
        const std::size_t n = std::min(f.size(), c.size());
        std::copy(f.begin(), f.begin() + n, c.begin());
        return c;
    }
};

namespace detail {

template <class T>
using Mat3 = std::array<std::array<T, 3>, 3>;

// symmetric 3x3 inverse through the adjugate; T is double or a jet
template <class T>
Mat3<T> inv3(const Mat3<T>& m) {
    Mat3<T> a;
    a[0][0] = m[1][1] * m[2][2] - m[1][2] * m[2][1];
    a[0][1] = m[0][2] * m[2][1] - m[0][1] * m[2][2];
    a[0][2] = m[0][1] * m[1][2] - m[0][2] * m[1][1];
    a[1][1] = m[0][0] * m[2][2] - m[0][2] * m[2][0];
    a[1][2] = m[0][2] * m[1][0] - m[0][0] * m[1][2];
    a[2][2] = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    a[1][0] = a[0][1];
    a[2][0] = a[0][2];
    a[2][1] = a[1][2];
    T det = m[0][0] * a[0][0] + m[0][1] * (m[1][2] * m[2][0] - m[1][0] * m[2][2]) +
            m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    const T idet = recip(det);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a[i][j] = a[i][j] * idet;
    return a;
}

// monomial jets of the displacement dX, for Taylor composition of ambient
// fields along the chart
template <int N>
struct Monomials {
    int order = 0;
    std::array<JetT<N>, 3> m1;
    std::array<std::array<JetT<N>, 3>, 3> m2;
    std::array<std::array<std::array<JetT<N>, 3>, 3>, 3> m3;
};

template <int N>
Monomials<N> monomials(const std::array<JetT<N>, 3>& dx, int order) {
    Monomials<N> M;
    M.order = order;
    if (order >= 1) M.m1 = dx;
    if (order >= 2)
        for (int k = 0; k < 3; ++k)
            for (int l = k; l < 3; ++l) {
                M.m2[k][l] = dx[k] * dx[l];
                M.m2[l][k] = M.m2[k][l];
            }
    if (order >= 3)
        for (int k = 0; k < 3; ++k)
            for (int l = k; l < 3; ++l)
                for (int m = l; m < 3; ++m) {
                    JetT<N> v = M.m2[k][l] * dx[m];
                    M.m3[k][l][m] = v;
                    M.m3[k][m][l] = v;
                    M.m3[l][k][m] = v;
                    M.m3[l][m][k] = v;
                    M.m3[m][k][l] = v;
                    M.m3[m][l][k] = v;
                }
    return M;
}

template <int N>
Mat3<JetT<N>> compose_metric(const Monomials<N>& M, const MetricJet& J) {
    Mat3<JetT<N>> r;
    const int order = std::min(M.order, J.order);
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            JetT<N> v(J.g[i][j]);
            if (order >= 1)
                for (int k = 0; k < 3; ++k) v += M.m1[k] * J.dg[k][i][j];
            if (order >= 2)
                for (int k = 0; k < 3; ++k)
                    for (int l = 0; l < 3; ++l) v += M.m2[k][l] * (0.5 * J.ddg[k][l][i][j]);
            if (order >= 3)
                for (int k = 0; k < 3; ++k)
                    for (int l = 0; l < 3; ++l)
                        for (int m = 0; m < 3; ++m)
                            v += M.m3[k][l][m] * (J.dddg[k][l][m][i][j] / 6.0);
            r[i][j] = v;
            r[j][i] = v;
        }
    return r;
}

template <int N>
std::array<Mat3<JetT<N>>, 3> compose_gamma(const Monomials<N>& M, const GammaJet& C) {
    std::array<Mat3<JetT<N>>, 3> r;
    const int order = std::min(M.order, C.order);
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) {
                JetT<N> v(C.G[k][i][j]);
                if (order >= 1)
                    for (int d = 0; d < 3; ++d) v += M.m1[d] * C.dG[d][k][i][j];
                if (order >= 2)
                    for (int d = 0; d < 3; ++d)
                        for (int e = 0; e < 3; ++e) v += M.m2[d][e] * (0.5 * C.ddG[e][d][k][i][j]);
                r[k][i][j] = v;
                r[k][j][i] = v;
            }
    return r;
}

template <int N>
Mat3<JetT<N>> compose_ricci(const Monomials<N>& M, const RicciJet& R, JetT<N>* scal = nullptr) {
    Mat3<JetT<N>> r;
    const int order = std::min(M.order, R.order);
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            JetT<N> v(R.ric[i][j]);
            if (order >= 1)
                for (int d = 0; d < 3; ++d) v += M.m1[d] * R.dric[d][i][j];
            r[i][j] = v;
            r[j][i] = v;
        }
    if (scal) {
        JetT<N> s(R.scal);
        if (order >= 1)
            for (int d = 0; d < 3; ++d) s += M.m1[d] * R.dscal[d];
        *scal = s;
    }
    return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Synthesized chart-derivative tables of u = rho + f, enough to seed jets of
// total order `order` at every node. Layout matches the jet triangle index.
struct SurfaceFields {
    int order = 0;
    double rho = 0.0;
    std::array<std::vector<double>, 15> d;
};

inline SurfaceFields surface_fields(const SphereGrid& grid, const std::vector<double>& coeffs,
                                    double rho, int order) {
    if (order < 0 || order > 4) throw ConfigError("surface jet order out of range");
    SurfaceFields F;
    F.order = order;
    F.rho = rho;
    for (int s = 0; s <= order; ++s)
        for (int b = 0; b <= s; ++b) F.d[JetT<4>::tri(s) + b] = grid.synthesize(coeffs, s - b, b);
    return F;
}

template <int N>
JetT<N> radius_jet(const SurfaceFields& F, int node) {
    constexpr auto fact = JetT<N>::factorials();
    JetT<N> u;
    const int order = std::min(N, F.order);
    for (int s = 0; s <= order; ++s)
        for (int b = 0; b <= s; ++b)
            u.c[JetT<N>::idx(s - b, b)] = F.d[JetT<4>::tri(s) + b][node] / (fact[s - b] * fact[b]);
    u.c[0] += F.rho;
    return u;
}

// ---------------------------------------------------------------------------
// Per-node geometry assembled from jets of the radius function. One code
// path covers the cheap order-2 evaluation used on solver hot loops and the
// order-4 evaluation behind the identity residuals. Valid orders follow the
// inputs: with jets of order N the second fundamental form and H are good
// through order N-2.
template <int N>
struct NodeGeometry {
    using J = JetT<N>;
    std::array<J, 3> X, Xt, Xl;
    std::array<J, 3> nu;   // outward unit normal, contravariant
    std::array<J, 3> nuc;  // covariant components gbar(nu, .)
    detail::Mat3<J> gbar, gbari;
    std::array<detail::Mat3<J>, 3> Gam;  // ambient Christoffels along the chart
    J g11, g12, g22, detg;
    J gi11, gi12, gi22;
    J k11, k12, k22, H;
    J mu_e;  // Euclidean area density |Xt x Xl|
    MetricJet MJ;
};

template <int N>
NodeGeometry<N> node_geometry(const MetricModel& model, const T3& zc, const JetT<N>& u,
                              double th, double lm, const T33* rot = nullptr) {
    static_assert(N >= 2, "second fundamental form needs order 2 jets");
    using J = JetT<N>;
    NodeGeometry<N> G;

    const J tj = J::variable(th, 0), lj = J::variable(lm, 1);
    const J st = sin(tj), ct = cos(tj), sl = sin(lj), cl = cos(lj);
    std::array<J, 3> dir = {st * cl, st * sl, ct};
    if (rot) {
        std::array<J, 3> rd;
        for (int i = 0; i < 3; ++i) rd[i] = (*rot)[i][0] * dir[0] + (*rot)[i][1] * dir[1] + (*rot)[i][2] * dir[2];
        dir = rd;
    }
    for (int i = 0; i < 3; ++i) G.X[i] = u * dir[i] + zc[i];
    for (int i = 0; i < 3; ++i) {
        G.Xt[i] = G.X[i].d(0);
        G.Xl[i] = G.X[i].d(1);
    }

    const T3 x0 = {G.X[0].value(), G.X[1].value(), G.X[2].value()};
    const int mo = std::min(3, N - 1);
    G.MJ = model.jet(x0, mo);
    std::array<J, 3> dx;
    for (int i = 0; i < 3; ++i) {
        dx[i] = G.X[i];
        dx[i].c[0] = 0.0;
    }
    const auto M = detail::monomials(dx, mo);
    G.gbar = detail::compose_metric(M, G.MJ);
    const GammaJet CJ = christoffel_jet(G.MJ, mo - 1);
    G.Gam = detail::compose_gamma(M, CJ);
    G.gbari = detail::inv3(G.gbar);

    // induced metric
    auto pair = [&](const std::array<J, 3>& A, const std::array<J, 3>& B) {
        J s;
        for (int a = 0; a < 3; ++a) {
            J t = G.gbar[a][0] * B[0] + G.gbar[a][1] * B[1] + G.gbar[a][2] * B[2];
            s += A[a] * t;
        }
        return s;
    };
    G.g11 = pair(G.Xt, G.Xt);
    G.g12 = pair(G.Xt, G.Xl);
    G.g22 = pair(G.Xl, G.Xl);
    G.detg = G.g11 * G.g22 - G.g12 * G.g12;
    const J idet = recip(G.detg);
    G.gi11 = G.g22 * idet;
    G.gi12 = -(G.g12 * idet);
    G.gi22 = G.g11 * idet;

    // normal from the coordinate cross product, normalized in gbar
    std::array<J, 3> w = {G.Xt[1] * G.Xl[2] - G.Xt[2] * G.Xl[1],
                          G.Xt[2] * G.Xl[0] - G.Xt[0] * G.Xl[2],
                          G.Xt[0] * G.Xl[1] - G.Xt[1] * G.Xl[0]};
    G.mu_e = sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
    std::array<J, 3> nraw;
    for (int a = 0; a < 3; ++a) nraw[a] = G.gbari[a][0] * w[0] + G.gbari[a][1] * w[1] + G.gbari[a][2] * w[2];
    J n2 = nraw[0] * w[0] + nraw[1] * w[1] + nraw[2] * w[2];
    double sgn = 0.0;
    for (int a = 0; a < 3; ++a) sgn += nraw[a].value() * (x0[a] - zc[a]);
    const J scale = (sgn < 0.0 ? -1.0 : 1.0) * recip(sqrt(n2));
    for (int a = 0; a < 3; ++a) {
        G.nu[a] = nraw[a] * scale;
        G.nuc[a] = w[a] * scale;
    }

    // second fundamental form k_IJ = gbar(nu, del_I del_J X), covariant
    // second derivatives through the ambient connection
    const std::array<J, 3> Xtt = {G.Xt[0].d(0), G.Xt[1].d(0), G.Xt[2].d(0)};
    const std::array<J, 3> Xtl = {G.Xt[0].d(1), G.Xt[1].d(1), G.Xt[2].d(1)};
    const std::array<J, 3> Xll = {G.Xl[0].d(1), G.Xl[1].d(1), G.Xl[2].d(1)};
    auto second = [&](const std::array<J, 3>& A, const std::array<J, 3>& B,
                      const std::array<J, 3>& AB) {
        J s;
        for (int a = 0; a < 3; ++a) {
            J t = AB[a];
            for (int b = 0; b < 3; ++b)
                t += A[b] * (G.Gam[a][b][0] * B[0] + G.Gam[a][b][1] * B[1] + G.Gam[a][b][2] * B[2]);
            s += G.nuc[a] * t;
        }
        return s;
    };
    G.k11 = second(G.Xt, G.Xt, Xtt);
    G.k12 = second(G.Xt, G.Xl, Xtl);
    G.k22 = second(G.Xl, G.Xl, Xll);
    G.H = G.gi11 * G.k11 + 2.0 * (G.gi12 * G.k12) + G.gi22 * G.k22;
    return G;
}

// ---------------------------------------------------------------------------
// Nodal geometry cache. Everything a functional or solver step reads is a
// plain array here; construction parallelizes over nodes and the cache is
// immutable afterwards. depth 1 fills the fundamental forms, depth 2 adds
// the ambient curvature samples (stability potential, Gauss RHS).
struct SurfaceCache {
    int L = 0;
    int depth = 1;
    T3 center{};
    double rho = 0.0;
    std::vector<double> coeffs;

    std::array<std::vector<double>, 3> X, nu;
    std::vector<double> u;
    std::vector<double> g11, g12, g22, gi11, gi12, gi22;
    std::vector<double> k11, k12, k22, H, ktf2;  // ktf2 = |k̊|²
    std::vector<double> gam111, gam112, gam122;  // Γ^θ_IJ
    std::vector<double> gam211, gam212, gam222;  // Γ^λ_IJ
    std::vector<double> mu, mu_e;                // area densities against dΩ
    std::vector<double> ricnn, sbar;             // depth 2: Ric̄(ν,ν), S̄

    double area = 0.0, area_radius = 0.0, area_e = 0.0;
    double u_min = 0.0, min_x = 0.0;
};

inline SurfaceCache build_cache(const SphereGrid& grid, const GraphSurface& surf,
                                const MetricModel& model, int depth = 1,
                                const T33* rot = nullptr) {
    if (depth < 1 || depth > 2) throw ConfigError("cache depth must be 1 or 2");
    SurfaceCache c;
    c.L = grid.L;
    c.depth = depth;
    c.center = surf.center;
    c.rho = surf.rho;
    c.coeffs = surf.coeffs_on(grid);

    const SurfaceFields F = surface_fields(grid, c.coeffs, surf.rho, 2);
    double umin = std::numeric_limits<double>::infinity();
    for (int n = 0; n < grid.nnodes; ++n) umin = std::min(umin, surf.rho + F.d[0][n]);
    for (double thp : {0.0, pi})
        umin = std::min(umin, surf.rho + grid.eval(c.coeffs, thp, 0.0));
    c.u_min = umin;
    if (umin <= 0.0) throw DomainError("surface is not a radial graph: rho + min f <= 0");

    const int nn = grid.nnodes;
    for (auto* v : {&c.u, &c.g11, &c.g12, &c.g22, &c.gi11, &c.gi12, &c.gi22, &c.k11, &c.k12,
                    &c.k22, &c.H, &c.ktf2, &c.gam111, &c.gam112, &c.gam122, &c.gam211,
                    &c.gam212, &c.gam222, &c.mu, &c.mu_e})
        v->assign(nn, 0.0);
    for (int a = 0; a < 3; ++a) {
        c.X[a].assign(nn, 0.0);
        c.nu[a].assign(nn, 0.0);
    }
    if (depth >= 2) {
        c.ricnn.assign(nn, 0.0);
        c.sbar.assign(nn, 0.0);
    }

    bool failed = false;
    std::string fail_msg;
#pragma omp parallel for schedule(static)
    for (int n = 0; n < nn; ++n) {
        try {
            const int i = n / grid.nlon;
            const Jet2 uj = radius_jet<2>(F, n);
            const NodeGeometry<2> G =
                node_geometry<2>(model, surf.center, uj, grid.theta[i], grid.lambda[n % grid.nlon], rot);
            c.u[n] = uj.value();
            for (int a = 0; a < 3; ++a) {
                c.X[a][n] = G.X[a].value();
                c.nu[a][n] = G.nu[a].value();
            }
            const double g11 = G.g11.value(), g12 = G.g12.value(), g22 = G.g22.value();
            c.g11[n] = g11;
            c.g12[n] = g12;
            c.g22[n] = g22;
            c.gi11[n] = G.gi11.value();
            c.gi12[n] = G.gi12.value();
            c.gi22[n] = G.gi22.value();
            const double k11 = G.k11.value(), k12 = G.k12.value(), k22 = G.k22.value();
            c.k11[n] = k11;
            c.k12[n] = k12;
            c.k22[n] = k22;
            const double H = G.H.value();
            c.H[n] = H;
            const double t11 = k11 - 0.5 * H * g11, t12 = k12 - 0.5 * H * g12,
                         t22 = k22 - 0.5 * H * g22;
            const double a11 = c.gi11[n], a12 = c.gi12[n], a22 = c.gi22[n];
            // |k̊|² = tr(gi k̊ gi k̊)
            const double b11 = a11 * t11 + a12 * t12, b12 = a11 * t12 + a12 * t22;
            const double b21 = a12 * t11 + a22 * t12, b22 = a12 * t12 + a22 * t22;
            c.ktf2[n] = b11 * b11 + 2.0 * b12 * b21 + b22 * b22;
            // surface Christoffels from the exact first derivatives of g_IJ
            const double d1g11 = G.g11.deriv(1, 0), d2g11 = G.g11.deriv(0, 1);
            const double d1g12 = G.g12.deriv(1, 0), d2g12 = G.g12.deriv(0, 1);
            const double d1g22 = G.g22.deriv(1, 0), d2g22 = G.g22.deriv(0, 1);
            const double c111 = 0.5 * d1g11;
            const double c112 = 0.5 * d2g11;
            const double c122 = d2g12 - 0.5 * d1g22;
            const double c211 = d1g12 - 0.5 * d2g11;
            const double c212 = 0.5 * d1g22;
            const double c222 = 0.5 * d2g22;
            c.gam111[n] = a11 * c111 + a12 * c211;
            c.gam112[n] = a11 * c112 + a12 * c212;
            c.gam122[n] = a11 * c122 + a12 * c222;
            c.gam211[n] = a12 * c111 + a22 * c211;
            c.gam212[n] = a12 * c112 + a22 * c212;
            c.gam222[n] = a12 * c122 + a22 * c222;
            const double st = grid.stheta[i];
            c.mu[n] = std::sqrt(G.detg.value()) / st;
            c.mu_e[n] = G.mu_e.value() / st;
            if (depth >= 2) {
                const T3 x0 = {c.X[0][n], c.X[1][n], c.X[2][n]};
                const MetricJet MJ = model.jet(x0, 2);
                const GammaJet CJ = christoffel_jet(MJ, 1);
                const RicciJet RJ = ricci_jet(MJ, CJ, 0);
                double rnn = 0.0;
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b) rnn += RJ.ric[a][b] * c.nu[a][n] * c.nu[b][n];
                c.ricnn[n] = rnn;
                c.sbar[n] = RJ.scal;
            }
        } catch (const std::exception& e) {
#pragma omp critical
            {
                failed = true;
                fail_msg = e.what();
            }
        }
    }
    if (failed) throw DomainError(fail_msg);

    c.area = grid.integrate(c.mu);
    c.area_e = grid.integrate(c.mu_e);
    c.area_radius = std::sqrt(c.area / (4.0 * pi));
    double mx = std::numeric_limits<double>::infinity();
    for (int n = 0; n < nn; ++n)
        mx = std::min(mx, norm3({c.X[0][n], c.X[1][n], c.X[2][n]}));
    c.min_x = mx;
    return c;
}

// ---------------------------------------------------------------------------
// Euclidean coordinate center z_i = mean of x_i against the Euclidean
// induced measure of the surface.
inline T3 euclidean_center(const SphereGrid& grid, const SurfaceCache& cache) {
    T3 z{};
    for (int a = 0; a < 3; ++a) {
        std::vector<double> wv(grid.nnodes);
        for (int n = 0; n < grid.nnodes; ++n) wv[n] = cache.X[a][n] * cache.mu_e[n];
        z[a] = grid.integrate(wv) / cache.area_e;
    }
    return z;
}

inline T3 euclidean_center(const SphereGrid& grid, const GraphSurface& surf) {
    static const MetricModel flat = MetricModel::euclidean();
    return euclidean_center(grid, build_cache(grid, surf, flat));
}

// ---------------------------------------------------------------------------
// Area-radius-weighted Sobolev norm of a scalar field given by coefficients:
// sum_{j<=k} R^j || grad^j T ||_{L^p(mu)}, k <= 2, p in [1, inf]. Covariant
// derivatives use the cached induced connection.
inline double sobolev_norm(const SphereGrid& grid, const SurfaceCache& cache,
                           const std::vector<double>& coeffs, int k, double p) {
    if (k < 0 || k > 2) throw ConfigError("sobolev order must be 0, 1, or 2");
    const bool inf = std::isinf(p);
    if (!inf && p < 1.0) throw ConfigError("sobolev exponent must be >= 1 or infinity");

    const int nn = grid.nnodes;
    auto lp = [&](const std::vector<double>& mag) {
        if (inf) {
            double m = 0.0;
            for (double v : mag) m = std::max(m, std::abs(v));
            return m;
        }
        std::vector<double> w(nn);
        for (int n = 0; n < nn; ++n) w[n] = std::pow(std::abs(mag[n]), p) * cache.mu[n];
        return std::pow(grid.integrate(w), 1.0 / p);
    };

    const std::vector<double> T = grid.synthesize(coeffs);
    double norm = lp(T);
    if (k == 0) return norm;

    const std::vector<double> Tt = grid.synthesize(coeffs, 1, 0);
    const std::vector<double> Tl = grid.synthesize(coeffs, 0, 1);
    std::vector<double> g1(nn);
    for (int n = 0; n < nn; ++n) {
        const double q = cache.gi11[n] * Tt[n] * Tt[n] + 2.0 * cache.gi12[n] * Tt[n] * Tl[n] +
                         cache.gi22[n] * Tl[n] * Tl[n];
        g1[n] = std::sqrt(std::max(0.0, q));
    }
    norm += cache.area_radius * lp(g1);
    if (k == 1) return norm;

    const std::vector<double> Ttt = grid.synthesize(coeffs, 2, 0);
    const std::vector<double> Ttl = grid.synthesize(coeffs, 1, 1);
    const std::vector<double> Tll = grid.synthesize(coeffs, 0, 2);
    std::vector<double> g2(nn);
    for (int n = 0; n < nn; ++n) {
        const double h11 = Ttt[n] - cache.gam111[n] * Tt[n] - cache.gam211[n] * Tl[n];
        const double h12 = Ttl[n] - cache.gam112[n] * Tt[n] - cache.gam212[n] * Tl[n];
        const double h22 = Tll[n] - cache.gam122[n] * Tt[n] - cache.gam222[n] * Tl[n];
        const double a11 = cache.gi11[n], a12 = cache.gi12[n], a22 = cache.gi22[n];
        // |grad^2 T|^2 = tr(gi h gi h)
        const double b11 = a11 * h11 + a12 * h12, b12 = a11 * h12 + a12 * h22;
        const double b21 = a12 * h11 + a22 * h12, b22 = a12 * h12 + a22 * h22;
        g2[n] = std::sqrt(std::max(0.0, b11 * b11 + 2.0 * b12 * b21 + b22 * b22));
    }
    norm += cache.area_radius * cache.area_radius * lp(g2);
    return norm;
}

// ---------------------------------------------------------------------------
// Reflection defect of the graph function about the surface center: Sobolev
// norms of f - f∘antipode on the round base sphere of radius rho, evaluated
// exactly in coefficient space (Y_lm(-omega) = (-1)^l Y_lm).
struct SymmetryDefect {
    double l2 = 0.0;
    double h2 = 0.0;
};

inline SymmetryDefect symmetry_defect(const SphereGrid& grid, const GraphSurface& surf) {
    const std::vector<double> c = surf.coeffs_on(grid);
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (int l = 1; l <= grid.L; l += 2) {
        const double lam = double(l) * (l + 1);
        for (int q = l * l; q < (l + 1) * (l + 1); ++q) {
            const double d = 2.0 * c[q];
            s0 += d * d;
            s1 += lam * d * d;
            s2 += lam * (lam - 1.0) * d * d;
        }
    }
    SymmetryDefect r;
    r.l2 = surf.rho * std::sqrt(s0);
    r.h2 = surf.rho * (std::sqrt(s0) + std::sqrt(s1) + std::sqrt(s2));
    return r;
}

// ---------------------------------------------------------------------------
// Asymptotic-concentricity test: |z| <= c0 R + c1 R^{1-eta},
// R^{4+eta} <= min|x|^{5+2eps}, and int H^2 dmu - 16 pi (1-genus) <= c1/R^eta.
struct ConcentricReport {
    T3 center{};
    double center_norm = 0.0;
    double min_x = 0.0;
    double area_radius = 0.0;
    double willmore_defect = 0.0;
    int genus = 0;
    bool center_ok = false, radius_ok = false, willmore_ok = false;
    bool all() const { return center_ok && radius_ok && willmore_ok; }
};

inline ConcentricReport concentric_check(const SphereGrid& grid, const SurfaceCache& cache,
                                         double eps, double eta, double c0, double c1) {
    if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("concentric_check: eta must be in (0,1]");
    if (!(c0 >= 0.0 && c0 < 1.0)) throw ConfigError("concentric_check: c0 must be in [0,1)");
    if (!(c1 >= 0.0)) throw ConfigError("concentric_check: c1 must be >= 0");
    if (!(eps > 0.0)) throw ConfigError("concentric_check: eps must be positive");

    ConcentricReport r;
    r.center = euclidean_center(grid, cache);
    r.center_norm = norm3(r.center);
    r.min_x = cache.min_x;
    r.area_radius = cache.area_radius;
    std::vector<double> h2(grid.nnodes);
    for (int n = 0; n < grid.nnodes; ++n) h2[n] = cache.H[n] * cache.H[n] * cache.mu[n];
    r.willmore_defect = grid.integrate(h2) - 16.0 * pi;
    const double R = r.area_radius;
    r.center_ok = r.center_norm <= c0 * R + c1 * std::pow(R, 1.0 - eta);
    r.radius_ok = std::pow(R, 4.0 + eta) <= std::pow(r.min_x, 5.0 + 2.0 * eps);
    r.willmore_ok = r.willmore_defect <= c1 / std::pow(R, eta);
    return r;
}

inline ConcentricReport concentric_check(const SphereGrid& grid, const GraphSurface& surf,
                                         const MetricModel& model, double eps, double eta,
                                         double c0, double c1) {
    return concentric_check(grid, build_cache(grid, surf, model), eps, eta, c0, c1);
}

// ---------------------------------------------------------------------------
// Second chart for pole handling: directions are pushed through a fixed
// rotation (old poles land on the new equator) and the graph function is
// resampled; band limits are preserved, so the resampling is exact. Nodes
// with |cos theta| <= 0.8 are trusted; the two trusted bands cover the
// sphere with overlap.
inline T33 second_chart_rotation() {
    return T33{{{0.0, 0.0, 1.0}, {0.0, 1.0, 0.0}, {-1.0, 0.0, 0.0}}};
}

inline bool trusted_row(const SphereGrid& grid, int i) { return std::abs(grid.ctheta[i]) <= 0.8; }

inline std::vector<double> rotate_field(const SphereGrid& grid, const std::vector<double>& coeffs,
                                        const T33& R) {
    std::vector<double> v(grid.nnodes);
    for (int i = 0; i < grid.nlat; ++i)
        for (int j = 0; j < grid.nlon; ++j) {
            const T3 xh = {grid.stheta[i] * std::cos(grid.lambda[j]),
                           grid.stheta[i] * std::sin(grid.lambda[j]), grid.ctheta[i]};
            T3 d{};
            for (int a = 0; a < 3; ++a)
                d[a] = R[a][0] * xh[0] + R[a][1] * xh[1] + R[a][2] * xh[2];
            const double th = std::acos(std::clamp(d[2], -1.0, 1.0));
            const double lm = std::atan2(d[1], d[0]);
            v[grid.node(i, j)] = grid.eval(coeffs, th, lm);
        }
    return grid.analyze(v);
}

}  // namespace cmcfol
