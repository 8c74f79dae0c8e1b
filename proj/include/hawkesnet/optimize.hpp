#ifndef HAWKESNET_OPTIMIZE_HPP
#define HAWKESNET_OPTIMIZE_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "hawkesnet/errors.hpp"

namespace hawkesnet {

using objective_fn = std::function<double(const std::vector<double>&)>;

struct nm_options {
    int max_evals = 4000;
    double diameter_tol = 1e-8; // simplex diameter in the search space
    double init_step = 0.4;
};

struct nm_result {
    std::vector<double> x;
    double fmin = std::numeric_limits<double>::infinity();
    int evals = 0;
    bool converged = false;
};

// Derivative-free simplex minimization (Nelder-Mead). Non-finite
// objective values are treated as +inf; the start point itself must be
// finite.
inline nm_result nelder_mead(const objective_fn& f, const std::vector<double>& x0,
                             const nm_options& opts = {}) {
    const std::size_t d = x0.size();
    nm_result res;

    auto safe_f = [&](const std::vector<double>& x) {
        ++res.evals;
        const double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    if (d == 0) {
        res.x = x0;
        res.fmin = safe_f(x0);
        res.converged = true;
        return res;
    }

    std::vector<std::vector<double>> simplex(d + 1, x0);
    std::vector<double> fv(d + 1);
    for (std::size_t i = 0; i < d; ++i)
        simplex[i + 1][i] += opts.init_step * std::max(1.0, std::fabs(x0[i]));
    fv[0] = safe_f(simplex[0]);
    if (!std::isfinite(fv[0]))
        throw nonfinite_likelihood_error("objective is not finite at the start point");
    for (std::size_t i = 1; i <= d; ++i) fv[i] = safe_f(simplex[i]);

    auto order = [&]() {
        std::vector<std::size_t> idx(d + 1);
        for (std::size_t i = 0; i <= d; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        std::vector<std::vector<double>> s2(d + 1);
        std::vector<double> f2(d + 1);
        for (std::size_t i = 0; i <= d; ++i) {
            s2[i] = simplex[idx[i]];
            f2[i] = fv[idx[i]];
        }
        simplex.swap(s2);
        fv.swap(f2);
    };

    auto diameter = [&]() {
        double dia = 0.0;
        for (std::size_t i = 1; i <= d; ++i)
            for (std::size_t k = 0; k < d; ++k)
                dia = std::max(dia, std::fabs(simplex[i][k] - simplex[0][k]));
        return dia;
    };

    std::vector<double> centroid(d), xr(d), xe(d), xc(d);
    while (res.evals < opts.max_evals) {
        order();
        if (diameter() < opts.diameter_tol) {
            res.converged = true;
            break;
        }
        for (std::size_t k = 0; k < d; ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < d; ++i) s += simplex[i][k];
            centroid[k] = s / d;
        }
        for (std::size_t k = 0; k < d; ++k) xr[k] = centroid[k] + (centroid[k] - simplex[d][k]);
        const double fr = safe_f(xr);

        if (fr < fv[0]) {
            for (std::size_t k = 0; k < d; ++k) xe[k] = centroid[k] + 2.0 * (centroid[k] - simplex[d][k]);
            const double fe = safe_f(xe);
            if (fe < fr) { simplex[d] = xe; fv[d] = fe; }
            else { simplex[d] = xr; fv[d] = fr; }
        } else if (fr < fv[d - 1]) {
            simplex[d] = xr;
            fv[d] = fr;
        } else {
            const bool outside = fr < fv[d];
            for (std::size_t k = 0; k < d; ++k) {
                const double far = outside ? xr[k] : simplex[d][k];
                xc[k] = centroid[k] + 0.5 * (far - centroid[k]);
            }
            const double fc = safe_f(xc);
            if (fc < std::min(fr, fv[d])) {
                simplex[d] = xc;
                fv[d] = fc;
            } else {
                for (std::size_t i = 1; i <= d; ++i) {
                    for (std::size_t k = 0; k < d; ++k)
                        simplex[i][k] = simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k]);
                    fv[i] = safe_f(simplex[i]);
                }
            }
        }
    }
    order();
    res.x = simplex[0];
    res.fmin = fv[0];
    return res;
}

// Central-difference Hessian with per-coordinate steps.
inline std::vector<std::vector<double>> numeric_hessian(const objective_fn& f,
                                                        const std::vector<double>& x,
                                                        const std::vector<double>& steps) {
    const std::size_t d = x.size();
    std::vector<std::vector<double>> h(d, std::vector<double>(d, 0.0));
    const double f0 = f(x);
    std::vector<double> xp = x;
    for (std::size_t i = 0; i < d; ++i) {
        xp = x;
        xp[i] = x[i] + steps[i];
        const double fp = f(xp);
        xp[i] = x[i] - steps[i];
        const double fm = f(xp);
        h[i][i] = (fp - 2.0 * f0 + fm) / (steps[i] * steps[i]);
        for (std::size_t j = i + 1; j < d; ++j) {
            xp = x;
            xp[i] = x[i] + steps[i];
            xp[j] = x[j] + steps[j];
            const double fpp = f(xp);
            xp[j] = x[j] - steps[j];
            const double fpm = f(xp);
            xp[i] = x[i] - steps[i];
            const double fmm = f(xp);
            xp[j] = x[j] + steps[j];
            const double fmp = f(xp);
            h[i][j] = h[j][i] = (fpp - fpm - fmp + fmm) / (4.0 * steps[i] * steps[j]);
        }
    }
    return h;
}

// Gauss-Jordan inverse with partial pivoting; throws on singularity.
inline std::vector<std::vector<double>> invert_matrix(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        if (std::fabs(a[pivot][col]) < 1e-300)
            throw singular_hessian_error("matrix is singular");
        std::swap(a[pivot], a[col]);
        std::swap(inv[pivot], inv[col]);
        const double scale = a[col][col];
        for (std::size_t c = 0; c < n; ++c) {
            a[col][c] /= scale;
            inv[col][c] /= scale;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double factor = a[r][col];
            if (factor == 0.0) continue;
            for (std::size_t c = 0; c < n; ++c) {
                a[r][c] -= factor * a[col][c];
                inv[r][c] -= factor * inv[col][c];
            }
        }
    }
    return inv;
}

} // namespace hawkesnet

#endif
