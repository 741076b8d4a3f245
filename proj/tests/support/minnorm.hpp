#pragma once

// Independent oracle for the permutahedron projection: Wolfe's min-norm-point
// algorithm over the polytope's vertex set (permutations of 1..n). Projecting
// y onto P equals y plus the min-norm point of P - y. Exact up to the solve
// tolerance; exponential vertex set is irrelevant because the linear
// minimization oracle is just a sort.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace testutil {

// argmin_{v in vertices(P - y)} <w, v>: assign the largest rank to the
// smallest w component.
inline std::vector<double> lo_vertex(const std::vector<double>& w, const std::vector<double>& y) {
    const size_t n = w.size();
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&w](size_t a, size_t b) { return w[a] > w[b]; });
    std::vector<double> v(n);
    for (size_t r = 0; r < n; ++r) v[idx[r]] = static_cast<double>(r + 1) - y[idx[r]];
    return v;
}

// Solves min ||S * alpha||^2 s.t. sum(alpha) = 1 over the affine hull of the
// columns held in points (row-major: points[i] is one vertex).
inline std::vector<double> affine_minnorm(const std::vector<std::vector<double>>& points) {
    const size_t m = points.size();
    // KKT system: [ G  1 ] [alpha]   [0]
    //             [ 1' 0 ] [ mu  ] = [1],  G_ij = <p_i, p_j>
    const size_t dim = m + 1;
    std::vector<double> a(dim * dim, 0.0), rhs(dim, 0.0);
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) {
            double dot = 0.0;
            for (size_t k = 0; k < points[i].size(); ++k) dot += points[i][k] * points[j][k];
            a[i * dim + j] = dot;
        }
    for (size_t i = 0; i < m; ++i) {
        a[i * dim + m] = 1.0;
        a[m * dim + i] = 1.0;
    }
    rhs[m] = 1.0;

    // Gaussian elimination with partial pivoting.
    for (size_t col = 0; col < dim; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < dim; ++r)
            if (std::fabs(a[r * dim + col]) > std::fabs(a[piv * dim + col])) piv = r;
        if (std::fabs(a[piv * dim + col]) < 1e-13)
            throw std::runtime_error("minnorm: singular KKT system");
        if (piv != col) {
            for (size_t c = 0; c < dim; ++c) std::swap(a[col * dim + c], a[piv * dim + c]);
            std::swap(rhs[col], rhs[piv]);
        }
        for (size_t r = col + 1; r < dim; ++r) {
            const double f = a[r * dim + col] / a[col * dim + col];
            for (size_t c = col; c < dim; ++c) a[r * dim + c] -= f * a[col * dim + c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<double> sol(dim, 0.0);
    for (size_t r = dim; r-- > 0;) {
        double acc = rhs[r];
        for (size_t c = r + 1; c < dim; ++c) acc -= a[r * dim + c] * sol[c];
        sol[r] = acc / a[r * dim + r];
    }
    sol.resize(m);
    return sol;
}

// Euclidean projection of y onto the permutahedron via Wolfe's algorithm.
inline std::vector<double> project_permutahedron_minnorm(const std::vector<double>& y) {
    const size_t n = y.size();
    if (n == 0) return {};
    std::vector<std::vector<double>> corral = {lo_vertex(std::vector<double>(n, 0.0), y)};
    std::vector<double> lambda = {1.0};
    std::vector<double> x = corral[0];
    const double tol = 1e-12;

    for (int iter = 0; iter < 1000; ++iter) {
        const std::vector<double> v = lo_vertex(x, y);
        double xx = 0.0, xv = 0.0;
        for (size_t i = 0; i < n; ++i) {
            xx += x[i] * x[i];
            xv += x[i] * v[i];
        }
        if (xx - xv <= tol * (1.0 + xx)) break;  // x is the min-norm point
        corral.push_back(v);
        lambda.push_back(0.0);

        // Minor cycle: move to the affine min-norm point, shrinking the
        // corral while any affine coefficient is nonpositive.
        while (true) {
            const std::vector<double> alpha = affine_minnorm(corral);
            bool interior = true;
            for (double c : alpha)
                if (c <= 1e-11) interior = false;
            if (interior) {
                lambda = alpha;
                break;
            }
            double theta = 1.0;
            for (size_t i = 0; i < alpha.size(); ++i)
                if (alpha[i] <= 1e-11) theta = std::min(theta, lambda[i] / (lambda[i] - alpha[i]));
            std::vector<std::vector<double>> next_corral;
            std::vector<double> next_lambda;
            for (size_t i = 0; i < alpha.size(); ++i) {
                const double li = theta * alpha[i] + (1.0 - theta) * lambda[i];
                if (li > 1e-11) {
                    next_corral.push_back(corral[i]);
                    next_lambda.push_back(li);
                }
            }
            corral = std::move(next_corral);
            lambda = std::move(next_lambda);
            if (corral.size() == 1) {
                lambda = {1.0};
                break;
            }
        }
        x.assign(n, 0.0);
        for (size_t i = 0; i < corral.size(); ++i)
            for (size_t k = 0; k < n; ++k) x[k] += lambda[i] * corral[i][k];
    }

    std::vector<double> proj(n);
    for (size_t k = 0; k < n; ++k) proj[k] = x[k] + y[k];
    return proj;
}

}  // namespace testutil
