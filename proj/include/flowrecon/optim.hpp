#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace flowrecon::optim {

using Objective = std::function<double(const std::vector<double>&)>;

struct NelderMeadResult {
    std::vector<double> x;
    double value{0};
    int iterations{0};
    bool converged{false};
};

/// Plain Nelder-Mead on an unconstrained parameterization.
inline NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0,
                                    double initial_step = 0.5, double tol = 1e-10,
                                    int max_iter = 5000) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> pts(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += initial_step;
    std::vector<double> vals(n + 1);
    for (std::size_t i = 0; i <= n; ++i) vals[i] = f(pts[i]);

    NelderMeadResult res;
    int it = 0;
    for (; it < max_iter; ++it) {
        std::vector<std::size_t> order(n + 1);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        std::size_t best = order[0], worst = order[n], second = order[n - 1];
        if (std::abs(vals[worst] - vals[best]) <=
            tol * (std::abs(vals[best]) + std::abs(vals[worst]) + 1e-300) + tol) {
            res.converged = true;
            break;
        }
        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j];
        }
        for (auto& c : centroid) c /= static_cast<double>(n);

        auto blend = [&](double coef) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j)
                p[j] = centroid[j] + coef * (pts[worst][j] - centroid[j]);
            return p;
        };

        auto reflect = blend(-1.0);
        double fr = f(reflect);
        if (fr < vals[best]) {
            auto expand = blend(-2.0);
            double fe = f(expand);
            if (fe < fr) {
                pts[worst] = std::move(expand);
                vals[worst] = fe;
            } else {
                pts[worst] = std::move(reflect);
                vals[worst] = fr;
            }
        } else if (fr < vals[second]) {
            pts[worst] = std::move(reflect);
            vals[worst] = fr;
        } else {
            auto contract = blend(fr < vals[worst] ? -0.5 : 0.5);
            double fc = f(contract);
            if (fc < std::min(fr, vals[worst])) {
                pts[worst] = std::move(contract);
                vals[worst] = fc;
            } else {  // shrink toward best
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (std::size_t j = 0; j < n; ++j)
                        pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
                    vals[i] = f(pts[i]);
                }
            }
        }
    }
    auto best_it = std::min_element(vals.begin(), vals.end());
    res.x = pts[static_cast<std::size_t>(best_it - vals.begin())];
    res.value = *best_it;
    res.iterations = it;
    return res;
}

struct BfgsResult {
    std::vector<double> x;
    double value{0};
    int iterations{0};
    bool converged{false};
    double grad_norm{0};
};

using Gradient = std::function<std::vector<double>(const std::vector<double>&)>;

/// BFGS with backtracking line search and a caller-supplied gradient,
/// for smooth low-dimensional objectives.
inline BfgsResult bfgs_minimize_with_grad(const Objective& f, const Gradient& grad,
                                          std::vector<double> x0, double grad_tol = 1e-7,
                                          int max_iter = 300) {
    const std::size_t n = x0.size();

    std::vector<std::vector<double>> H(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) H[i][i] = 1.0;

    BfgsResult res;
    std::vector<double> x = std::move(x0);
    double fx = f(x);
    std::vector<double> g = grad(x);

    int it = 0;
    for (; it < max_iter; ++it) {
        double gnorm = std::sqrt(std::inner_product(g.begin(), g.end(), g.begin(), 0.0));
        res.grad_norm = gnorm;
        if (gnorm < grad_tol) {
            res.converged = true;
            break;
        }
        std::vector<double> d(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d[i] -= H[i][j] * g[j];
        double dir_deriv = std::inner_product(d.begin(), d.end(), g.begin(), 0.0);
        if (!(dir_deriv < 0)) {  // reset to steepest descent
            for (std::size_t i = 0; i < n; ++i) {
                std::fill(H[i].begin(), H[i].end(), 0.0);
                H[i][i] = 1.0;
                d[i] = -g[i];
            }
            dir_deriv = -gnorm * gnorm;
        }
        double step = 1.0;
        std::vector<double> xn(n);
        double fn = fx;
        bool ok = false;
        for (int ls = 0; ls < 50; ++ls) {
            for (std::size_t i = 0; i < n; ++i) xn[i] = x[i] + step * d[i];
            fn = f(xn);
            if (std::isfinite(fn) && fn <= fx + 1e-4 * step * dir_deriv) {
                ok = true;
                break;
            }
            step *= 0.5;
        }
        if (!ok) break;
        // Plateau stop: the line search made no meaningful progress.
        if (fx - fn <= 1e-10 * (std::abs(fx) + 1.0)) {
            x = std::move(xn);
            fx = fn;
            res.converged = true;
            ++it;
            break;
        }
        auto gn = grad(xn);
        std::vector<double> s(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = xn[i] - x[i];
            y[i] = gn[i] - g[i];
        }
        double sy = std::inner_product(s.begin(), s.end(), y.begin(), 0.0);
        if (sy > 1e-12) {
            // H <- (I - s y^T / sy) H (I - y s^T / sy) + s s^T / sy
            std::vector<double> Hy(n, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) Hy[i] += H[i][j] * y[j];
            double yHy = std::inner_product(y.begin(), y.end(), Hy.begin(), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    H[i][j] += (sy + yHy) * s[i] * s[j] / (sy * sy) -
                               (Hy[i] * s[j] + s[i] * Hy[j]) / sy;
                }
            }
        }
        x = std::move(xn);
        fx = fn;
        g = std::move(gn);
    }
    res.x = std::move(x);
    res.value = fx;
    res.iterations = it;
    return res;
}

/// BFGS with central-difference numeric gradients.
inline BfgsResult bfgs_minimize(const Objective& f, std::vector<double> x0,
                                double grad_tol = 1e-7, int max_iter = 300,
                                double fd_step = 1e-6) {
    const std::size_t n = x0.size();
    Gradient grad = [&f, n, fd_step](const std::vector<double>& x) {
        std::vector<double> g(n);
        std::vector<double> xp = x;
        for (std::size_t i = 0; i < n; ++i) {
            double h = fd_step * (1.0 + std::abs(x[i]));
            xp[i] = x[i] + h;
            double fp = f(xp);
            xp[i] = x[i] - h;
            double fm = f(xp);
            xp[i] = x[i];
            g[i] = (fp - fm) / (2.0 * h);
        }
        return g;
    };
    return bfgs_minimize_with_grad(f, grad, std::move(x0), grad_tol, max_iter);
}

}  // namespace flowrecon::optim
