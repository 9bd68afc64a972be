#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "cmcfol/surface.hpp"

namespace cmcfol {

// Residual suite for the structure identities a correct geometry kernel must
// satisfy: the Simons identity for the surface Laplacian of k, the Gauss
// equation relating intrinsic and ambient curvature, and Gauss-Bonnet. Two
// evaluation routes are provided. The exact route assembles every term from
// order-4 chart jets at a node; the identities then hold to roundoff and the
// residual certifies the derivation and the kernel. The spectral route
// projects the ingredient fields onto the grid's harmonic basis first and
// differentiates the projections, so the residual is an honest measure of
// the discretization error that the downstream functionals inherit, and it
// must fall spectrally under refinement.
enum class ResidualMode { spectral, exact };

namespace detail {

// In three dimensions the Weyl tensor vanishes and the full curvature tensor
// is determined by Ricci and the scalar. Index order matches the rest of the
// code: rm(i,j,k,l) = gbar(R(e_i,e_j)e_k, e_l), ric_ij = g^{ab} rm(a,i,j,b).
template <class T>
T riemann3(const Mat3<T>& g, const Mat3<T>& ric, const T& S, int i, int j, int k, int l) {
    T r = g[i][l] * ric[j][k] + g[j][k] * ric[i][l];
    r -= g[i][k] * ric[j][l] + g[j][l] * ric[i][k];
    r += (0.5 * S) * (g[i][k] * g[j][l] - g[i][l] * g[j][k]);
    return r;
}

inline Jet2 drop2(const Jet& a) {
    Jet2 r;
    for (int s = 0; s <= 2; ++s)
        for (int b = 0; b <= s; ++b) r.c[Jet2::idx(s - b, b)] = a.c[Jet::idx(s - b, b)];
    return r;
}

// spectral derivative tables of one nodal scalar field, enough for order-2
// jets; layout matches the jet triangle index
struct Field2 {
    std::array<std::vector<double>, 6> d;
};

inline Field2 make_field2(const SphereGrid& grid, const std::vector<double>& nodal) {
    const std::vector<double> c = grid.analyze(nodal);
    Field2 F;
    for (int s = 0; s <= 2; ++s)
        for (int b = 0; b <= s; ++b) F.d[Jet2::tri(s) + b] = grid.synthesize(c, s - b, b);
    return F;
}

inline Jet2 jet2_at(const Field2& F, int node) {
    constexpr auto fact = Jet2::factorials();
    Jet2 u;
    for (int s = 0; s <= 2; ++s)
        for (int b = 0; b <= s; ++b)
            u.c[Jet2::idx(s - b, b)] = F.d[Jet2::tri(s) + b][node] / (fact[s - b] * fact[b]);
    return u;
}

// everything the Simons residual needs at one node. Jets are in the chart
// (theta, lambda); the ambient curvature contractions are plain samples.
struct SimonsData {
    std::array<std::array<Jet2, 2>, 2> g, k;
    Jet2 H;
    std::array<Jet2, 2> om;   // omega_J = Ric(del_J X, nu)
    std::array<Jet2, 2> Q12;  // Rm(del_theta X, del_lambda X, del_J X, nu)
    double Rt[2][2] = {};     // Ric(del_I X, del_J X)
    double Wn[2][2] = {};     // Rm(nu, del_I X, nu, del_J X)
    double rt = 0.0;          // Rm(del_theta X, del_lambda X, del_theta X, del_lambda X)
};

// Simons identity with this code's sign conventions, derived from Codazzi,
// the Ricci commutation rule, and the Gauss equation:
//   lap k_IJ = Hess_IJ H - (grad om)_IJ + g^{AB} (grad_A Q)(B,I,J)
//              + H (k^2)_IJ - |k|^2 k_IJ + Ric(del_I, .) k(., J)
//              + k_J^W Rm(nu, del_I, nu, del_W) - k^{AW} Rm(del_A, del_I, del_J, del_W).
// Returns the invariant norm sqrt(g^{IA} g^{JB} T_IJ T_AB) of the defect T.
inline double simons_node_residual(const SimonsData& s) {
    const Jet2 det = s.g[0][0] * s.g[1][1] - s.g[0][1] * s.g[0][1];
    const Jet2 idet = recip(det);
    std::array<std::array<Jet2, 2>, 2> gi;
    gi[0][0] = s.g[1][1] * idet;
    gi[0][1] = -1.0 * (s.g[0][1] * idet);
    gi[1][0] = gi[0][1];
    gi[1][1] = s.g[0][0] * idet;

    Jet2 dg[2][2][2];  // dg[A][I][J] = del_A g_IJ, one order down
    for (int A = 0; A < 2; ++A)
        for (int I = 0; I < 2; ++I)
            for (int J = 0; J < 2; ++J) dg[A][I][J] = s.g[I][J].d(A);
    Jet2 Gam[2][2][2];  // Gam[D][I][J] = Gamma^D_IJ of the induced metric
    for (int D = 0; D < 2; ++D)
        for (int I = 0; I < 2; ++I)
            for (int J = I; J < 2; ++J) {
                Jet2 sum;
                for (int C = 0; C < 2; ++C)
                    sum += gi[D][C] * (0.5 * (dg[I][C][J] + dg[J][C][I] - dg[C][I][J]));
                Gam[D][I][J] = sum;
                Gam[D][J][I] = sum;
            }

    double giv[2][2], kv[2][2], Gv[2][2][2];
    for (int I = 0; I < 2; ++I)
        for (int J = 0; J < 2; ++J) {
            giv[I][J] = gi[I][J].value();
            kv[I][J] = s.k[I][J].value();
            for (int D = 0; D < 2; ++D) Gv[D][I][J] = Gam[D][I][J].value();
        }

    auto dv = [](const Jet2& f, int B) { return B == 0 ? f.deriv(1, 0) : f.deriv(0, 1); };
    auto d2 = [](const Jet2& f, int I, int J) {
        return f.deriv((I == 0 ? 1 : 0) + (J == 0 ? 1 : 0), (I == 1 ? 1 : 0) + (J == 1 ? 1 : 0));
    };

    // rough Laplacian of k from first covariant derivatives kept as jets
    Jet2 nk[2][2][2];  // nk[A][I][J] = grad_A k_IJ
    for (int A = 0; A < 2; ++A)
        for (int I = 0; I < 2; ++I)
            for (int J = 0; J < 2; ++J) {
                Jet2 t = s.k[I][J].d(A);
                for (int D = 0; D < 2; ++D)
                    t -= Gam[D][A][I] * s.k[D][J] + Gam[D][A][J] * s.k[I][D];
                nk[A][I][J] = t;
            }
    double lap[2][2] = {};
    for (int I = 0; I < 2; ++I)
        for (int J = 0; J < 2; ++J)
            for (int A = 0; A < 2; ++A)
                for (int B = 0; B < 2; ++B) {
                    double t = dv(nk[A][I][J], B);
                    for (int D = 0; D < 2; ++D)
                        t -= Gv[D][B][A] * nk[D][I][J].value() + Gv[D][B][I] * nk[A][D][J].value() +
                             Gv[D][B][J] * nk[A][I][D].value();
                    lap[I][J] += giv[A][B] * t;
                }

    double hess[2][2], nom[2][2];
    for (int I = 0; I < 2; ++I)
        for (int J = 0; J < 2; ++J) {
            double h = d2(s.H, I, J);
            double w = dv(s.om[J], I);
            for (int D = 0; D < 2; ++D) {
                h -= Gv[D][I][J] * dv(s.H, D);
                w -= Gv[D][I][J] * s.om[D].value();
            }
            hess[I][J] = h;
            nom[I][J] = w;
        }

    // divergence of the Codazzi 3-tensor, antisymmetric in its first pair
    Jet2 Qt[2][2][2];
    double Qv[2][2][2];
    for (int J = 0; J < 2; ++J) {
        Qt[0][1][J] = s.Q12[J];
        Qt[1][0][J] = -1.0 * s.Q12[J];
    }
    for (int B = 0; B < 2; ++B)
        for (int I = 0; I < 2; ++I)
            for (int J = 0; J < 2; ++J) Qv[B][I][J] = Qt[B][I][J].value();
    double Dij[2][2] = {};
    for (int I = 0; I < 2; ++I)
        for (int J = 0; J < 2; ++J)
            for (int A = 0; A < 2; ++A)
                for (int B = 0; B < 2; ++B) {
                    double t = dv(Qt[B][I][J], A);
                    for (int D = 0; D < 2; ++D)
                        t -= Gv[D][A][B] * Qv[D][I][J] + Gv[D][A][I] * Qv[B][D][J] +
                             Gv[D][A][J] * Qv[B][I][D];
                    Dij[I][J] += giv[A][B] * t;
                }

    double kup[2][2], kuu[2][2], k2[2][2];
    for (int I = 0; I < 2; ++I)
        for (int J = 0; J < 2; ++J) {
            kup[I][J] = giv[I][0] * kv[0][J] + giv[I][1] * kv[1][J];
        }
    for (int I = 0; I < 2; ++I)
        for (int J = 0; J < 2; ++J) {
            kuu[I][J] = kup[I][0] * giv[0][J] + kup[I][1] * giv[1][J];
            k2[I][J] = kv[I][0] * kup[0][J] + kv[I][1] * kup[1][J];
        }
    const double k2n = kup[0][0] * kup[0][0] + kup[0][1] * kup[1][0] + kup[1][0] * kup[0][1] +
                       kup[1][1] * kup[1][1];
    const double Hv = s.H.value();

    double T[2][2];
    double Mij[2][2] = {{-s.rt * kuu[1][1], s.rt * kuu[1][0]},
                        {s.rt * kuu[0][1], -s.rt * kuu[0][0]}};
    for (int I = 0; I < 2; ++I)
        for (int J = 0; J < 2; ++J) {
            double rtk = 0.0, wnk = 0.0;
            for (int W = 0; W < 2; ++W) {
                rtk += s.Rt[I][W] * kup[W][J];
                wnk += s.Wn[I][W] * kup[W][J];
            }
            T[I][J] = lap[I][J] - hess[I][J] + nom[I][J] - Dij[I][J] -
                      (Hv * k2[I][J] - k2n * kv[I][J]) - rtk - wnk + Mij[I][J];
        }
    double n2 = 0.0;
    for (int I = 0; I < 2; ++I)
        for (int J = 0; J < 2; ++J)
            for (int A = 0; A < 2; ++A)
                for (int B = 0; B < 2; ++B) n2 += giv[I][A] * giv[J][B] * T[I][J] * T[A][B];
    return std::sqrt(std::max(0.0, n2));
}

// exact route: one node, all terms from order-4 jets
inline SimonsData simons_exact_data(const MetricModel& model, const T3& zc, const Jet& u,
                                    double th, double lm, const T33* rot) {
    const NodeGeometry<4> G = node_geometry<4>(model, zc, u, th, lm, rot);
    const GammaJet CJ = christoffel_jet(G.MJ, 2);
    const RicciJet RJ = ricci_jet(G.MJ, CJ, 1);
    std::array<Jet, 3> dx;
    for (int i = 0; i < 3; ++i) {
        dx[i] = G.X[i];
        dx[i].c[0] = 0.0;
    }
    const auto M1 = monomials(dx, 1);
    Jet scal;
    const Mat3<Jet> ric = compose_ricci(M1, RJ, &scal);

    Jet rm[3][3][3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) rm[i][j][k][l] = riemann3(G.gbar, ric, scal, i, j, k, l);

    const std::array<Jet, 3>* frame[2] = {&G.Xt, &G.Xl};
    SimonsData s;
    s.g[0][0] = drop2(G.g11);
    s.g[0][1] = drop2(G.g12);
    s.g[1][0] = s.g[0][1];
    s.g[1][1] = drop2(G.g22);
    s.k[0][0] = drop2(G.k11);
    s.k[0][1] = drop2(G.k12);
    s.k[1][0] = s.k[0][1];
    s.k[1][1] = drop2(G.k22);
    s.H = drop2(G.H);

    for (int J = 0; J < 2; ++J) {
        Jet w;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) w += ric[a][b] * (*frame[J])[a] * G.nu[b];
        s.om[J] = drop2(w);
    }
    // contract the curvature jets stepwise: first the theta-lambda pair
    Jet tl[3][3];
    for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) {
            Jet w;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) w += rm[a][b][c][d] * G.Xt[a] * G.Xl[b];
            tl[c][d] = w;
        }
    for (int J = 0; J < 2; ++J) {
        Jet w;
        for (int c = 0; c < 3; ++c)
            for (int d = 0; d < 3; ++d) w += tl[c][d] * (*frame[J])[c] * G.nu[d];
        s.Q12[J] = drop2(w);
    }
    double rt = 0.0;
    for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d)
            rt += tl[c][d].value() * G.Xt[c].value() * G.Xl[d].value();
    s.rt = rt;
    for (int I = 0; I < 2; ++I)
        for (int J = 0; J < 2; ++J) {
            double a1 = 0.0, a2 = 0.0;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                    a1 += ric[a][b].value() * (*frame[I])[a].value() * (*frame[J])[b].value();
                    double w = 0.0;
                    for (int c = 0; c < 3; ++c)
                        for (int d = 0; d < 3; ++d)
                            w += rm[c][a][d][b].value() * G.nu[c].value() * G.nu[d].value();
                    a2 += w * (*frame[I])[a].value() * (*frame[J])[b].value();
                }
            s.Rt[I][J] = a1;
            s.Wn[I][J] = a2;
        }
    return s;
}

inline double simons_chart_exact(const SphereGrid& grid, const std::vector<double>& coeffs,
                                 double rho, const T3& zc, const MetricModel& model,
                                 const T33* rot) {
    const SurfaceFields F = surface_fields(grid, coeffs, rho, 4);
    double worst = 0.0;
#pragma omp parallel for schedule(static) reduction(max : worst)
    for (int n = 0; n < grid.nnodes; ++n) {
        const int i = n / grid.nlon;
        if (!trusted_row(grid, i)) continue;
        const SimonsData s = simons_exact_data(model, zc, radius_jet<4>(F, n), grid.theta[i],
                                               grid.lambda[n % grid.nlon], rot);
        worst = std::max(worst, simons_node_residual(s));
    }
    return worst;
}

// spectral route: sample the ingredient fields, project them onto the
// harmonic basis, differentiate the projections. Chart components of k, g,
// omega, and the Codazzi tensor are not smooth functions on the sphere (their
// pole limits are direction dependent), so the fields carry sin(theta)
// weights that turn them into contractions against the globally smooth
// frame {sin(theta) del_theta, del_lambda}; the weights are divided back out
// with exact trigonometric jets away from the poles.
inline double simons_chart_spectral(const SphereGrid& grid, const std::vector<double>& coeffs,
                                    double rho, const T3& zc, const MetricModel& model,
                                    const T33* rot) {
    const int nn = grid.nnodes;
    const SurfaceFields F = surface_fields(grid, coeffs, rho, 2);
    std::array<std::vector<double>, 11> fld;  // gh11,gh12,gh22, kh11,kh12,kh22, H, om1,om2, q1,q2
    for (auto& v : fld) v.assign(nn, 0.0);
    std::vector<double> Rt11(nn), Rt12(nn), Rt22(nn), Wn11(nn), Wn12(nn), Wn22(nn), rtv(nn);

#pragma omp parallel for schedule(static)
    for (int n = 0; n < nn; ++n) {
        const int i = n / grid.nlon;
        const NodeGeometry<2> G = node_geometry<2>(model, zc, radius_jet<2>(F, n), grid.theta[i],
                                                   grid.lambda[n % grid.nlon], rot);
        const double st = grid.stheta[i];
        const T3 x0 = {G.X[0].value(), G.X[1].value(), G.X[2].value()};
        const MetricJet MJ = model.jet(x0, 2);
        const GammaJet CJ = christoffel_jet(MJ, 1);
        const RicciJet RJ = ricci_jet(MJ, CJ, 0);
        double rm[3][3][3][3];
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 3; ++c)
                    for (int d = 0; d < 3; ++d)
                        rm[a][b][c][d] = riemann3(MJ.g, RJ.ric, RJ.scal, a, b, c, d);

        double Xt[3], Xl[3], nu[3];
        for (int a = 0; a < 3; ++a) {
            Xt[a] = G.Xt[a].value();
            Xl[a] = G.Xl[a].value();
            nu[a] = G.nu[a].value();
        }
        fld[0][n] = st * st * G.g11.value();
        fld[1][n] = st * G.g12.value();
        fld[2][n] = G.g22.value();
        fld[3][n] = st * st * G.k11.value();
        fld[4][n] = st * G.k12.value();
        fld[5][n] = G.k22.value();
        fld[6][n] = G.H.value();
        double om[2] = {0.0, 0.0}, q[2] = {0.0, 0.0};
        double tl[3][3];
        for (int c = 0; c < 3; ++c)
            for (int d = 0; d < 3; ++d) {
                double w = 0.0;
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b) w += rm[a][b][c][d] * Xt[a] * Xl[b];
                tl[c][d] = w;
            }
        double rt = 0.0, wn[2][2] = {}, rp[2][2] = {};
        const double* fr[2] = {Xt, Xl};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                om[0] += RJ.ric[a][b] * Xt[a] * nu[b];
                om[1] += RJ.ric[a][b] * Xl[a] * nu[b];
                rt += tl[a][b] * Xt[a] * Xl[b];
                for (int I = 0; I < 2; ++I)
                    for (int J = 0; J < 2; ++J) {
                        rp[I][J] += RJ.ric[a][b] * fr[I][a] * fr[J][b];
                        double w = 0.0;
                        for (int c = 0; c < 3; ++c)
                            for (int d = 0; d < 3; ++d) w += rm[c][a][d][b] * nu[c] * nu[d];
                        wn[I][J] += w * fr[I][a] * fr[J][b];
                    }
                q[0] += tl[a][b] * Xt[a] * nu[b];
                q[1] += tl[a][b] * Xl[a] * nu[b];
            }
        fld[7][n] = st * om[0];
        fld[8][n] = om[1];
        fld[9][n] = st * st * q[0];
        fld[10][n] = st * q[1];
        Rt11[n] = rp[0][0];
        Rt12[n] = rp[0][1];
        Rt22[n] = rp[1][1];
        Wn11[n] = wn[0][0];
        Wn12[n] = wn[0][1];
        Wn22[n] = wn[1][1];
        rtv[n] = rt;
    }

    std::array<Field2, 11> F2;
    for (int f = 0; f < 11; ++f) F2[f] = make_field2(grid, fld[f]);

    double worst = 0.0;
#pragma omp parallel for schedule(static) reduction(max : worst)
    for (int n = 0; n < nn; ++n) {
        const int i = n / grid.nlon;
        if (!trusted_row(grid, i)) continue;
        const Jet2 tj = Jet2::variable(grid.theta[i], 0);
        const Jet2 ist = recip(sin(tj));
        const Jet2 ist2 = ist * ist;
        SimonsData s;
        s.g[0][0] = jet2_at(F2[0], n) * ist2;
        s.g[0][1] = jet2_at(F2[1], n) * ist;
        s.g[1][0] = s.g[0][1];
        s.g[1][1] = jet2_at(F2[2], n);
        s.k[0][0] = jet2_at(F2[3], n) * ist2;
        s.k[0][1] = jet2_at(F2[4], n) * ist;
        s.k[1][0] = s.k[0][1];
        s.k[1][1] = jet2_at(F2[5], n);
        s.H = jet2_at(F2[6], n);
        s.om[0] = jet2_at(F2[7], n) * ist;
        s.om[1] = jet2_at(F2[8], n);
        s.Q12[0] = jet2_at(F2[9], n) * ist2;
        s.Q12[1] = jet2_at(F2[10], n) * ist;
        s.Rt[0][0] = Rt11[n];
        s.Rt[0][1] = s.Rt[1][0] = Rt12[n];
        s.Rt[1][1] = Rt22[n];
        s.Wn[0][0] = Wn11[n];
        s.Wn[0][1] = s.Wn[1][0] = Wn12[n];
        s.Wn[1][1] = Wn22[n];
        s.rt = rtv[n];
        worst = std::max(worst, simons_node_residual(s));
    }
    return worst;
}

}  // namespace detail

// Max-norm over the trusted nodes of both charts of the Simons-identity
// defect, measured in the invariant norm of the induced metric.
inline double simons_residual(const SphereGrid& grid, const GraphSurface& surf,
                              const MetricModel& model,
                              ResidualMode mode = ResidualMode::spectral) {
    const std::vector<double> c1 = surf.coeffs_on(grid);
    const T33 Q = second_chart_rotation();
    const std::vector<double> c2 = rotate_field(grid, c1, Q);
    GraphSurface s2 = surf;
    s2.f = c2;
    build_cache(grid, surf, model);  // graph and domain guards for chart 1
    build_cache(grid, s2, model, 1, &Q);
    auto chart = (mode == ResidualMode::spectral) ? detail::simons_chart_spectral
                                                  : detail::simons_chart_exact;
    return std::max(chart(grid, c1, surf.rho, surf.center, model, nullptr),
                    chart(grid, c2, surf.rho, surf.center, model, &Q));
}

inline double simons_residual(const SphereGrid& grid, const SurfaceCache& cache,
                              const MetricModel& model,
                              ResidualMode mode = ResidualMode::spectral) {
    GraphSurface s;
    s.center = cache.center;
    s.rho = cache.rho;
    s.f = cache.coeffs;
    return simons_residual(grid, s, model, mode);
}

// Intrinsic Gauss curvature at every node, from spectral derivatives of the
// induced metric in the chart. The sin(theta)-weighted components are
// projected, divided back out, and fed through the curvature of a 2-metric;
// near-pole rows lose accuracy to the weight division and should be read
// through the second chart when they matter.
inline std::vector<double> gauss_curvature(const SphereGrid& grid, const SurfaceCache& cache) {
    const int nn = grid.nnodes;
    std::vector<double> gh11(nn), gh12(nn), gh22(nn);
    for (int n = 0; n < nn; ++n) {
        const double st = grid.stheta[n / grid.nlon];
        gh11[n] = st * st * cache.g11[n];
        gh12[n] = st * cache.g12[n];
        gh22[n] = cache.g22[n];
    }
    const detail::Field2 Fg11 = detail::make_field2(grid, gh11);
    const detail::Field2 Fg12 = detail::make_field2(grid, gh12);
    const detail::Field2 Fg22 = detail::make_field2(grid, gh22);

    std::vector<double> G(nn);
#pragma omp parallel for schedule(static)
    for (int n = 0; n < nn; ++n) {
        const int i = n / grid.nlon;
        const Jet2 tj = Jet2::variable(grid.theta[i], 0);
        const Jet2 ist = recip(sin(tj));
        const Jet2 ist2 = ist * ist;
        std::array<std::array<Jet2, 2>, 2> g;
        g[0][0] = detail::jet2_at(Fg11, n) * ist2;
        g[0][1] = detail::jet2_at(Fg12, n) * ist;
        g[1][0] = g[0][1];
        g[1][1] = detail::jet2_at(Fg22, n);
        const Jet2 det = g[0][0] * g[1][1] - g[0][1] * g[0][1];
        const Jet2 idet = recip(det);
        std::array<std::array<Jet2, 2>, 2> gi;
        gi[0][0] = g[1][1] * idet;
        gi[0][1] = -1.0 * (g[0][1] * idet);
        gi[1][0] = gi[0][1];
        gi[1][1] = g[0][0] * idet;
        Jet2 dg[2][2][2];
        for (int A = 0; A < 2; ++A)
            for (int I = 0; I < 2; ++I)
                for (int J = 0; J < 2; ++J) dg[A][I][J] = g[I][J].d(A);
        Jet2 Gam[2][2][2];
        for (int D = 0; D < 2; ++D)
            for (int I = 0; I < 2; ++I)
                for (int J = I; J < 2; ++J) {
                    Jet2 sum;
                    for (int C = 0; C < 2; ++C)
                        sum += gi[D][C] * (0.5 * (dg[I][C][J] + dg[J][C][I] - dg[C][I][J]));
                    Gam[D][I][J] = sum;
                    Gam[D][J][I] = sum;
                }
        // curvature of the induced 2-metric: G = -Rm(1,2,1,2)/det g
        double r = 0.0;
        for (int E = 0; E < 2; ++E) {
            double t = Gam[E][1][0].deriv(1, 0) - Gam[E][0][0].deriv(0, 1);
            for (int M = 0; M < 2; ++M)
                t += Gam[M][1][0].value() * Gam[E][0][M].value() -
                     Gam[M][0][0].value() * Gam[E][1][M].value();
            r += t * g[E][1].value();
        }
        G[n] = -r / det.value();
    }
    return G;
}

struct GaussResiduals {
    double gauss_eq = 0.0;
    double gauss_bonnet = 0.0;
};

// Gauss equation residual (max over trusted nodes of both charts) and the
// Gauss-Bonnet defect |int G dmu - 4 pi| integrated over the first chart.
inline GaussResiduals gauss_residuals(const SphereGrid& grid, const GraphSurface& surf,
                                      const MetricModel& model) {
    const T33 Q = second_chart_rotation();
    GraphSurface s2 = surf;
    s2.f = rotate_field(grid, surf.coeffs_on(grid), Q);
    const SurfaceCache c1 = build_cache(grid, surf, model, 2);
    const SurfaceCache c2 = build_cache(grid, s2, model, 2, &Q);
    const std::vector<double> G1 = gauss_curvature(grid, c1);
    const std::vector<double> G2 = gauss_curvature(grid, c2);

    GaussResiduals r;
    for (const auto* pair : {&c1, &c2}) {
        const SurfaceCache& c = *pair;
        const std::vector<double>& G = (pair == &c1) ? G1 : G2;
        for (int n = 0; n < grid.nnodes; ++n) {
            if (!trusted_row(grid, n / grid.nlon)) continue;
            const double rhs = (c.sbar[n] - 2.0 * c.ricnn[n]) +
                               (0.5 * c.H[n] * c.H[n] - c.ktf2[n]);
            r.gauss_eq = std::max(r.gauss_eq, std::abs(2.0 * G[n] - rhs));
        }
    }
    std::vector<double> gm(grid.nnodes);
    for (int n = 0; n < grid.nnodes; ++n) gm[n] = G1[n] * c1.mu[n];
    r.gauss_bonnet = std::abs(grid.integrate(gm) - 4.0 * pi);
    return r;
}

inline GaussResiduals gauss_residuals(const SphereGrid& grid, const SurfaceCache& cache,
                                      const MetricModel& model) {
    GraphSurface s;
    s.center = cache.center;
    s.rho = cache.rho;
    s.f = cache.coeffs;
    return gauss_residuals(grid, s, model);
}

}  // namespace cmcfol
