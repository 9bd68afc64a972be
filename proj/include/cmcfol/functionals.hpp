#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "cmcfol/surface.hpp"

namespace cmcfol {

// Scalar and vector functionals of the ambient geometry evaluated on
// surfaces: Hawking mass, the two ADM mass expressions (coordinate flux and
// curvature integral), the ADM center flux, and the Ricci flux integrals
// whose decay drives the foliation and center arguments.
//
// Conventions fixed here once: coordinate-sphere fluxes (adm_mass_flux,
// adm_center_flux) use the Euclidean unit normal and the Euclidean area
// measure of S^2_R(0); the finite-radius values for the conformal
// Schwarzschild model are then exactly m(1+m/2R)^3. Curvature integrals over
// general surfaces use the induced normal and measure, and the radius factor
// in front is the area radius, which makes the curvature mass of a centered
// Schwarzschild sphere exactly m at every radius.

inline double hawking_mass(const SphereGrid& grid, const SurfaceCache& cache) {
    std::vector<double> h2(grid.nnodes);
    for (int n = 0; n < grid.nnodes; ++n) h2[n] = cache.H[n] * cache.H[n] * cache.mu[n];
    const double willmore = grid.integrate(h2);
    return std::sqrt(cache.area / (16.0 * pi)) * (1.0 - willmore / (16.0 * pi));
}

// flux of d_j g_ij - d_i g_jj through the coordinate sphere of radius R
inline double adm_mass_flux(const SphereGrid& grid, const MetricModel& model, double R) {
    if (!(R > 0.0) || R < model.r_min)
        throw DomainError("adm_mass_flux: radius " + std::to_string(R) +
                          " below the model's inner radius");
    const int nn = grid.nnodes;
    std::vector<double> f(nn);
#pragma omp parallel for schedule(static)
    for (int n = 0; n < nn; ++n) {
        const int i = n / grid.nlon;
        const double st = grid.stheta[i];
        const T3 w = {st * std::cos(grid.lambda[n % grid.nlon]),
                      st * std::sin(grid.lambda[n % grid.nlon]), grid.ctheta[i]};
        const T3 x = {R * w[0], R * w[1], R * w[2]};
        const MetricJet J = model.jet(x, 1);
        double v = 0.0;
        for (int a = 0; a < 3; ++a) {
            double F = 0.0;
            for (int j = 0; j < 3; ++j) F += J.dg[j][a][j] - J.dg[a][j][j];
            v += F * w[a];
        }
        f[n] = v;
    }
    return R * R / (16.0 * pi) * grid.integrate(f);
}

// curvature form of the mass: -(area radius)/8pi * int Ric(nu,nu) - S/2 dmu
inline double mass_curvature_integral(const SphereGrid& grid, const SurfaceCache& cache) {
    if (cache.depth < 2)
        throw ConfigError("mass_curvature_integral: cache must carry ambient curvature (depth 2)");
    std::vector<double> f(grid.nnodes);
    for (int n = 0; n < grid.nnodes; ++n)
        f[n] = (cache.ricnn[n] - 0.5 * cache.sbar[n]) * cache.mu[n];
    return -cache.area_radius / (8.0 * pi) * grid.integrate(f);
}

// x^i-weighted mass flux with the first-order correction term, over the
// coordinate sphere of radius R, divided by 16 pi m
inline T3 adm_center_flux(const SphereGrid& grid, const MetricModel& model, double R) {
    if (model.mass == 0.0)
        throw ConfigError("adm_center_flux: center of mass undefined for a massless model");
    if (!(R > 0.0) || R < model.r_min)
        throw DomainError("adm_center_flux: radius " + std::to_string(R) +
                          " below the model's inner radius");
    const int nn = grid.nnodes;
    std::array<std::vector<double>, 3> f;
    for (auto& v : f) v.assign(nn, 0.0);
#pragma omp parallel for schedule(static)
    for (int n = 0; n < nn; ++n) {
        const int i = n / grid.nlon;
        const double st = grid.stheta[i];
        const T3 w = {st * std::cos(grid.lambda[n % grid.nlon]),
                      st * std::sin(grid.lambda[n % grid.nlon]), grid.ctheta[i]};
        const T3 x = {R * w[0], R * w[1], R * w[2]};
        const MetricJet J = model.jet(x, 1);
        double flux = 0.0, trg = 0.0;
        for (int k = 0; k < 3; ++k) {
            double F = 0.0;
            for (int j = 0; j < 3; ++j) F += J.dg[j][j][k] - J.dg[k][j][j];
            flux += F * w[k];
            trg += J.g[k][k];
        }
        for (int a = 0; a < 3; ++a) {
            double corr = 0.0;
            for (int j = 0; j < 3; ++j) corr += J.g[a][j] * w[j];
            corr -= trg * w[a];
            f[a][n] = x[a] * flux - corr;
        }
    }
    const double c = R * R / (16.0 * pi * model.mass);
    return {c * grid.integrate(f[0]), c * grid.integrate(f[1]), c * grid.integrate(f[2])};
}

namespace detail {

inline void require_enclosed(const SurfaceCache& cache, const MetricModel& model,
                             const char* who) {
    if (cache.min_x < model.r_min)
        throw DomainError(std::string(who) + ": surface dips below the model's inner radius");
}

}  // namespace detail

// int Ric(nu, e_i) - (S/2) nu_i dmu, the Lemma-type flux whose decay rate
// certifies that the mass integral is center-independent; nu_i is the
// covariant component gbar(nu, e_i)
inline T3 ricci_flux(const SphereGrid& grid, const SurfaceCache& cache, const MetricModel& model) {
    detail::require_enclosed(cache, model, "ricci_flux");
    const int nn = grid.nnodes;
    std::array<std::vector<double>, 3> f;
    for (auto& v : f) v.assign(nn, 0.0);
#pragma omp parallel for schedule(static)
    for (int n = 0; n < nn; ++n) {
        const T3 x0 = {cache.X[0][n], cache.X[1][n], cache.X[2][n]};
        const MetricJet J = model.jet(x0, 2);
        const GammaJet C = christoffel_jet(J, 1);
        const RicciJet R = ricci_jet(J, C, 0);
        const T3 nu = {cache.nu[0][n], cache.nu[1][n], cache.nu[2][n]};
        for (int i = 0; i < 3; ++i) {
            double ricni = 0.0, nui = 0.0;
            for (int a = 0; a < 3; ++a) {
                ricni += R.ric[i][a] * nu[a];
                nui += J.g[i][a] * nu[a];
            }
            f[i][n] = (ricni - 0.5 * R.scal * nui) * cache.mu[n];
        }
    }
    return {grid.integrate(f[0]), grid.integrate(f[1]), grid.integrate(f[2])};
}

struct FoliationIntegrals {
    T3 x_weighted{};   // int (Ric(nu,nu) - S/2) x_i dmu
    T3 nu_weighted{};  // int (Ric(nu,nu) - S/2) nu_i dmu
};

// the two integrals controlling the foliation property and the off-center
// drift: both weightings of Ric(nu,nu) - S/2; the cache must carry ambient
// curvature samples
inline FoliationIntegrals foliation_integral(const SphereGrid& grid, const SurfaceCache& cache,
                                             const MetricModel& model) {
    if (cache.depth < 2)
        throw ConfigError("foliation_integral: cache must carry ambient curvature (depth 2)");
    detail::require_enclosed(cache, model, "foliation_integral");
    const int nn = grid.nnodes;
    std::array<std::vector<double>, 3> fx, fn;
    for (auto& v : fx) v.assign(nn, 0.0);
    for (auto& v : fn) v.assign(nn, 0.0);
#pragma omp parallel for schedule(static)
    for (int n = 0; n < nn; ++n) {
        const T3 x0 = {cache.X[0][n], cache.X[1][n], cache.X[2][n]};
        const MetricJet J = model.jet(x0, 0);
        const T3 nu = {cache.nu[0][n], cache.nu[1][n], cache.nu[2][n]};
        const double q = (cache.ricnn[n] - 0.5 * cache.sbar[n]) * cache.mu[n];
        for (int i = 0; i < 3; ++i) {
            double nui = 0.0;
            for (int a = 0; a < 3; ++a) nui += J.g[i][a] * nu[a];
            fx[i][n] = q * x0[i];
            fn[i][n] = q * nui;
        }
    }
    FoliationIntegrals r;
    r.x_weighted = {grid.integrate(fx[0]), grid.integrate(fx[1]), grid.integrate(fx[2])};
    r.nu_weighted = {grid.integrate(fn[0]), grid.integrate(fn[1]), grid.integrate(fn[2])};
    return r;
}

// center integrand I_i against artificial data kbar = (g_base - g)/2 and its
// momentum-type divergence Jbar = div((tr kbar) g - kbar); traces and index
// lowering use the target metric, the radius factor is the area radius, or
// the pointwise distance |x - center| when use_rad0 is set
inline T3 center_integrand(const SphereGrid& grid, const SurfaceCache& cache,
                           const MetricModel& target, const MetricModel& base,
                           bool use_rad0 = false) {
    detail::require_enclosed(cache, target, "center_integrand");
    detail::require_enclosed(cache, base, "center_integrand");
    const int nn = grid.nnodes;
    std::array<std::vector<double>, 3> f;
    for (auto& v : f) v.assign(nn, 0.0);
#pragma omp parallel for schedule(static)
    for (int n = 0; n < nn; ++n) {
        const T3 x0 = {cache.X[0][n], cache.X[1][n], cache.X[2][n]};
        const MetricJet Jt = target.jet(x0, 1);
        const MetricJet Js = base.jet(x0, 1);
        const GammaJet C = christoffel_jet(Jt, 0);
        const T33 gi = invert_sym3(Jt.g);
        double kb[3][3], dkb[3][3][3], dgi[3][3][3];
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                kb[a][b] = 0.5 * (Js.g[a][b] - Jt.g[a][b]);
                for (int c = 0; c < 3; ++c) {
                    dkb[c][a][b] = 0.5 * (Js.dg[c][a][b] - Jt.dg[c][a][b]);
                    double s = 0.0;
                    for (int p = 0; p < 3; ++p)
                        for (int q = 0; q < 3; ++q) s += gi[a][p] * Jt.dg[c][p][q] * gi[q][b];
                    dgi[c][a][b] = -s;
                }
            }
        double trk = 0.0, dtr[3] = {0.0, 0.0, 0.0};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                trk += gi[a][b] * kb[a][b];
                for (int c = 0; c < 3; ++c)
                    dtr[c] += dgi[c][a][b] * kb[a][b] + gi[a][b] * dkb[c][a][b];
            }
        double TT[3][3], dT[3][3][3];
        for (int b = 0; b < 3; ++b)
            for (int j = 0; j < 3; ++j) {
                TT[b][j] = trk * Jt.g[b][j] - kb[b][j];
                for (int a = 0; a < 3; ++a)
                    dT[a][b][j] = dtr[a] * Jt.g[b][j] + trk * Jt.dg[a][b][j] - dkb[a][b][j];
            }
        double Jbar[3];
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                    double t = dT[a][b][j];
                    for (int c = 0; c < 3; ++c)
                        t -= C.G[c][a][b] * TT[c][j] + C.G[c][a][j] * TT[b][c];
                    s += gi[a][b] * t;
                }
            Jbar[j] = s;
        }
        const T3 nu = {cache.nu[0][n], cache.nu[1][n], cache.nu[2][n]};
        double Jnu = 0.0, knn = 0.0;
        double nucov[3], knu[3];
        for (int i = 0; i < 3; ++i) {
            Jnu += Jbar[i] * nu[i];
            nucov[i] = 0.0;
            knu[i] = 0.0;
            for (int a = 0; a < 3; ++a) {
                nucov[i] += Jt.g[i][a] * nu[a];
                knu[i] += kb[a][i] * nu[a];
            }
        }
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) knn += kb[a][b] * nu[a] * nu[b];
        double radfac = cache.area_radius;
        if (use_rad0) {
            const double dx = x0[0] - cache.center[0], dy = x0[1] - cache.center[1],
                         dz = x0[2] - cache.center[2];
            radfac = std::sqrt(dx * dx + dy * dy + dz * dz);
        }
        for (int i = 0; i < 3; ++i)
            f[i][n] = (radfac * Jnu * nucov[i] + (knu[i] - nucov[i] * knn) - trk * nucov[i]) *
                      cache.mu[n];
    }
    return {grid.integrate(f[0]), grid.integrate(f[1]), grid.integrate(f[2])};
}

struct MassReport {
    std::vector<double> radii;
    std::vector<double> hawking;
    std::vector<double> adm_flux;
    std::vector<double> curvature;
    std::vector<T3> center;  // euclidean coordinate centers of the spheres
    std::vector<T3> Ii;      // center integrand against the Schwarzschild base
    double slope = 0.0;      // fitted exponent of |adm_flux(R) - adm_flux(R_max)|
};

// sweep of the mass functionals over centered coordinate spheres
inline MassReport mass_report(const SphereGrid& grid, const MetricModel& model,
                              const std::vector<double>& radii) {
    if (radii.empty()) throw ConfigError("mass_report: no radii given");
    for (double r : radii)
        if (!(r > 0.0)) throw ConfigError("mass_report: radii must be positive");
    const MetricModel base = MetricModel::schwarzschild(model.mass);
    MassReport rep;
    rep.radii = radii;
    for (double R : radii) {
        const GraphSurface s = GraphSurface::round(R);
        const SurfaceCache c = build_cache(grid, s, model, 2);
        rep.hawking.push_back(hawking_mass(grid, c));
        rep.adm_flux.push_back(adm_mass_flux(grid, model, R));
        rep.curvature.push_back(mass_curvature_integral(grid, c));
        rep.center.push_back(euclidean_center(grid, c));
        rep.Ii.push_back(center_integrand(grid, c, model, base));
    }
    // least-squares slope of log |flux(R) - flux(R_max)| against log R,
    // omitting the reference radius itself
    const int K = int(radii.size()) - 1;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int np = 0;
    for (int k = 0; k < K; ++k) {
        const double d = std::abs(rep.adm_flux[k] - rep.adm_flux[K]);
        if (d < 1e-14) continue;
        const double lx = std::log(radii[k]), ly = std::log(d);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++np;
    }
    if (np >= 2 && sxx * np - sx * sx > 0.0) rep.slope = (sxy * np - sx * sy) / (sxx * np - sx * sx);
    return rep;
}

}  // namespace cmcfol
