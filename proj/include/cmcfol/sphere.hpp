#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "cmcfol/errors.hpp"

namespace cmcfol {

inline constexpr double pi = std::numbers::pi;

// Gauss-Legendre rule on [-1,1], nodes descending so theta increases
// from the north pole. Newton on P_n with the usual asymptotic start.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int k = 0; k < n; ++k) {
        double t = std::cos(pi * (k + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int l = 2; l <= n; ++l) {
                double p2 = ((2 * l - 1) * t * p1 - (l - 1) * p0) / l;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[k] = t;
        w[k] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    // cos(pi*(k+.75)/(n+.5)) already runs from ~+1 down to -1
}

// Pseudospectral sphere grid: Gauss-Legendre colatitudes x equispaced
// longitudes, with orthonormal real spherical harmonics
//   Y_{l,0} = Pbar_{l,0},  Y_{l,m}^c = sqrt(2) Pbar_{l,m} cos(m lam),
//   Y_{l,m}^s = sqrt(2) Pbar_{l,m} sin(m lam),
// Pbar fully normalized, no Condon-Shortley phase. The quadrature is
// exact through degree 2L+1, so products of two band limited fields
// integrate exactly.
//
// Basis index: p = l^2 for m=0, p = l^2+2m-1 (cos) and l^2+2m (sin).
//
// Colatitude derivatives of Pbar up to fourth order come from the
// ladder identity
//   d/dtheta Pbar_{l,m} = ( sqrt((l+m)(l-m+1)) Pbar_{l,m-1}
//                          - sqrt((l-m)(l+m+1)) Pbar_{l,m+1} ) / 2
// iterated symbolically, so derivative values at interior nodes are
// exact and free of 1/sin(theta) amplification.
class SphereGrid {
  public:
    int L = 0, nlat = 0, nlon = 0, nnodes = 0;
    std::vector<double> theta, ctheta, stheta, wlat;
    std::vector<double> lambda;
    double wlon = 0.0;
    std::vector<double> cosm, sinm;  // [m*nlon + j], m = 0..L

    explicit SphereGrid(int bandlimit) : L(bandlimit) {
        if (L < 2 || L > 128) throw ConfigError("bandlimit out of range [2,128]");
        nlat = L + 1;
        nlon = 2 * L + 2;
        nnodes = nlat * nlon;
        std::vector<double> x, w;
        gauss_legendre(nlat, x, w);
        theta.resize(nlat);
        ctheta = x;
        stheta.resize(nlat);
        wlat = w;
        for (int i = 0; i < nlat; ++i) {
            theta[i] = std::acos(x[i]);
            stheta[i] = std::sin(theta[i]);
        }
        lambda.resize(nlon);
        wlon = 2.0 * pi / nlon;
        for (int j = 0; j < nlon; ++j) lambda[j] = wlon * j;
        cosm.resize((L + 1) * nlon);
        sinm.resize((L + 1) * nlon);
        for (int m = 0; m <= L; ++m)
            for (int j = 0; j < nlon; ++j) {
                cosm[m * nlon + j] = std::cos(m * lambda[j]);
                sinm[m * nlon + j] = std::sin(m * lambda[j]);
            }
        build_plm_tables();
    }

    int nbasis() const { return (L + 1) * (L + 1); }
    int node(int i, int j) const { return i * nlon + j; }
    static int pair_index(int l, int m) { return l * (l + 1) / 2 + m; }
    int coef_index(int l, int m, bool sin_part) const {
        return m == 0 ? l * l : l * l + 2 * m - 1 + (sin_part ? 1 : 0);
    }

    double plm(int k, int l, int m, int i) const {
        return P[k][pair_index(l, m) * nlat + i];
    }

    // ---- transforms ----------------------------------------------------

    // coefficients of v in the orthonormal basis (exact for band limited v)
    std::vector<double> analyze(const std::vector<double>& v) const {
        std::vector<double> c(nbasis(), 0.0);
        std::vector<double> gc(nlat), gs(nlat);
        const double r2 = std::sqrt(2.0);
        for (int m = 0; m <= L; ++m) {
            for (int i = 0; i < nlat; ++i) {
                double ac = 0.0, as = 0.0;
                const double* row = v.data() + i * nlon;
                const double* cm = cosm.data() + m * nlon;
                const double* sm = sinm.data() + m * nlon;
                for (int j = 0; j < nlon; ++j) {
                    ac += row[j] * cm[j];
                    as += row[j] * sm[j];
                }
                gc[i] = ac * wlon;
                gs[i] = as * wlon;
            }
            for (int l = m; l <= L; ++l) {
                double sc = 0.0, ss = 0.0;
                const double* pl = P[0].data() + pair_index(l, m) * nlat;
                for (int i = 0; i < nlat; ++i) {
                    sc += wlat[i] * pl[i] * gc[i];
                    ss += wlat[i] * pl[i] * gs[i];
                }
                if (m == 0) {
                    c[coef_index(l, 0, false)] = sc;
                } else {
                    c[coef_index(l, m, false)] = r2 * sc;
                    c[coef_index(l, m, true)] = r2 * ss;
                }
            }
        }
        return c;
    }

    // nodal values of d^a_theta d^b_lambda (sum c_p Y_p); a <= 4
    std::vector<double> synthesize(const std::vector<double>& c, int a = 0, int b = 0) const {
        if (a < 0 || a > 4 || b < 0) throw ConfigError("derivative order out of range");
        std::vector<double> v(nnodes, 0.0);
        std::vector<double> gc(nlat), gs(nlat);
        const double r2 = std::sqrt(2.0);
        for (int m = 0; m <= L; ++m) {
            bool any = false;
            for (int i = 0; i < nlat; ++i) gc[i] = gs[i] = 0.0;
            for (int l = m; l <= L; ++l) {
                const double cc = c[coef_index(l, m, false)];
                const double cs = m == 0 ? 0.0 : c[coef_index(l, m, true)];
                if (cc == 0.0 && cs == 0.0) continue;
                any = true;
                const double s = (m == 0) ? 1.0 : r2;
                const double* pl = P[a].data() + pair_index(l, m) * nlat;
                for (int i = 0; i < nlat; ++i) {
                    gc[i] += s * cc * pl[i];
                    gs[i] += s * cs * pl[i];
                }
            }
            if (!any) continue;
            if (b > 0 && m == 0) continue;
            // d^b of cos(m lam) = m^b cos(m lam + b pi/2), same shift for sin
            double mb = 1.0;
            for (int k = 0; k < b; ++k) mb *= m;
            int ph = b % 4;
            const double* cm = cosm.data() + m * nlon;
            const double* sm = sinm.data() + m * nlon;
            for (int i = 0; i < nlat; ++i) {
                double* row = v.data() + i * nlon;
                const double ac = gc[i] * mb, as = gs[i] * mb;
                for (int j = 0; j < nlon; ++j) {
                    double cb, sb;  // shifted cos/sin at this node
                    switch (ph) {
                        case 0: cb = cm[j]; sb = sm[j]; break;
                        case 1: cb = -sm[j]; sb = cm[j]; break;
                        case 2: cb = -cm[j]; sb = -sm[j]; break;
                        default: cb = sm[j]; sb = -cm[j]; break;
                    }
                    row[j] += ac * cb + as * sb;
                }
            }
        }
        return v;
    }

    // point evaluation at arbitrary (theta, lambda), for resampling onto
    // rotated charts; order a <= 1 in theta via the ladder identity
    double eval(const std::vector<double>& c, double th, double lm) const {
        std::vector<double> pcol;
        plm_column(th, pcol);
        const double r2 = std::sqrt(2.0);
        double r = 0.0;
        for (int m = 0; m <= L; ++m) {
            double pc = std::cos(m * lm), ps = std::sin(m * lm);
            for (int l = m; l <= L; ++l) {
                const double p = pcol[pair_index(l, m)];
                if (m == 0)
                    r += c[coef_index(l, 0, false)] * p;
                else
                    r += r2 * p * (c[coef_index(l, m, false)] * pc + c[coef_index(l, m, true)] * ps);
            }
        }
        return r;
    }

    double integrate(const std::vector<double>& nodal) const {
        double s = 0.0;
        for (int i = 0; i < nlat; ++i) {
            double rowsum = 0.0;
            const double* row = nodal.data() + i * nlon;
            for (int j = 0; j < nlon; ++j) rowsum += row[j];
            s += wlat[i] * rowsum;
        }
        return s * wlon;
    }

    // quadrature weight of node (i,j) for the round measure dOmega
    double omega_weight(int i) const { return wlat[i] * wlon; }

    // -Delta_{S^2} in coefficient space on the unit sphere
    static void sphere_laplacian(std::vector<double>& c, int L) {
        for (int l = 0; l <= L; ++l) {
            const double f = -double(l) * (l + 1);
            for (int p = l * l; p < (l + 1) * (l + 1); ++p) c[p] *= f;
        }
    }

  private:
    std::array<std::vector<double>, 5> P;  // P[k]: d^k_theta Pbar tables

    // Pbar_{l,m}(cos th) for all (l,m), used for off-grid evaluation
    void plm_column(double th, std::vector<double>& out) const {
        const int npairs = (L + 1) * (L + 2) / 2;
        out.assign(npairs, 0.0);
        const double ct = std::cos(th), st = std::sin(th);
        double pmm = std::sqrt(1.0 / (4.0 * pi));
        for (int m = 0; m <= L; ++m) {
            out[pair_index(m, m)] = pmm;
            if (m < L) {
                double pm1 = std::sqrt(2.0 * m + 3.0) * ct * pmm;
                out[pair_index(m + 1, m)] = pm1;
                double pm2 = pmm;
                for (int l = m + 2; l <= L; ++l) {
                    const double alm = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
                    const double alm1 =
                        std::sqrt((4.0 * (l - 1.0) * (l - 1.0) - 1.0) /
                                  ((l - 1.0) * (l - 1.0) - double(m) * m));
                    const double pl = alm * (ct * pm1 - pm2 / alm1);
                    pm2 = pm1;
                    pm1 = pl;
                    out[pair_index(l, m)] = pl;
                }
            }
            pmm *= std::sqrt((2.0 * m + 3.0) / (2.0 * m + 2.0)) * st;
        }
    }

    void build_plm_tables() {
        const int npairs = (L + 1) * (L + 2) / 2;
        for (auto& t : P) t.assign(npairs * nlat, 0.0);
        std::vector<double> col;
        for (int i = 0; i < nlat; ++i) {
            plm_column(theta[i], col);
            for (int pidx = 0; pidx < npairs; ++pidx) P[0][pidx * nlat + i] = col[pidx];
        }
        // symbolic ladder: d^k Pbar_{l,m} = sum_mu C[mu] Pbar_{l,mu}
        std::vector<double> cur, nxt;
        for (int l = 0; l <= L; ++l) {
            for (int m = 0; m <= l; ++m) {
                cur.assign(l + 1, 0.0);
                cur[m] = 1.0;
                for (int k = 1; k <= 4; ++k) {
                    nxt.assign(l + 1, 0.0);
                    for (int mu = 0; mu <= l; ++mu) {
                        const double cv = cur[mu];
                        if (cv == 0.0) continue;
                        if (mu == 0) {
                            if (l >= 1) nxt[1] -= std::sqrt(double(l) * (l + 1)) * cv;
                        } else {
                            nxt[mu - 1] += 0.5 * std::sqrt(double(l + mu) * (l - mu + 1)) * cv;
                            if (mu < l)
                                nxt[mu + 1] -= 0.5 * std::sqrt(double(l - mu) * (l + mu + 1)) * cv;
                        }
                    }
                    cur = nxt;
                    double* dst = P[k].data() + pair_index(l, m) * nlat;
                    for (int mu = 0; mu <= l; ++mu) {
                        if (cur[mu] == 0.0) continue;
                        const double* src = P[0].data() + pair_index(l, mu) * nlat;
                        for (int i = 0; i < nlat; ++i) dst[i] += cur[mu] * src[i];
                    }
                }
            }
        }
    }
};

}  // namespace cmcfol
