#include "pfaff/matpoly.hpp"

namespace pfaff {

MatPoly matpoly_zero(const CtxPtr& ctx, int rows, int cols) {
    return MatPoly(rows, std::vector<Poly>(cols, Poly::zero(ctx)));
}

MatPoly matpoly_identity(const CtxPtr& ctx, int size) {
    MatPoly m = matpoly_zero(ctx, size, size);
    for (int i = 0; i < size; i++) m[i][i] = Poly::constant(ctx, 1);
    return m;
}

Poly matpoly_det(const MatPoly& a_in) {
    const int n = int(a_in.size());
    if (n == 0) fail(errc::invalid_argument, "determinant of an empty matrix");
    const CtxPtr& ctx = a_in[0][0].ctx();
    if (n == 1) return a_in[0][0];

    MatPoly a = a_in;
    Poly prev = Poly::constant(ctx, 1);
    int sign = 1;
    for (int k = 0; k < n - 1; k++) {
        if (a[k][k].is_zero()) {
            int swap_row = -1;
            for (int i = k + 1; i < n; i++)
                if (!a[i][k].is_zero()) {
                    swap_row = i;
                    break;
                }
            if (swap_row < 0) return Poly::zero(ctx);
            std::swap(a[k], a[swap_row]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; i++)
            for (int j = k + 1; j < n; j++) {
                Poly num = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                auto q = num.divide_exact(prev);
                if (!q) fail(errc::internal_error, "Bareiss division was not exact");
                a[i][j] = std::move(*q);
            }
        prev = a[k][k];
    }
    Poly det = a[n - 1][n - 1];
    return sign < 0 ? -det : det;
}

MatPoly matpoly_adjugate(const MatPoly& a) {
    const int n = int(a.size());
    const CtxPtr& ctx = a[0][0].ctx();
    MatPoly adj = matpoly_zero(ctx, n, n);
    if (n == 1) {
        adj[0][0] = Poly::constant(ctx, 1);
        return adj;
    }
    for (int i = 0; i < n; i++)
        for (int j = 0; j < n; j++) {
            MatPoly minor = matpoly_zero(ctx, n - 1, n - 1);
            for (int r = 0, rr = 0; r < n; r++) {
                if (r == i) continue;
                for (int c = 0, cc = 0; c < n; c++) {
                    if (c == j) continue;
                    minor[rr][cc] = a[r][c];
                    cc++;
                }
                rr++;
            }
            Poly cof = matpoly_det(minor);
            adj[j][i] = ((i + j) % 2) ? -cof : cof;
        }
    return adj;
}

MatPoly matpoly_mul(const MatPoly& a, const MatPoly& b) {
    const int n = int(a.size()), k = int(b.size()), m = int(b[0].size());
    const CtxPtr& ctx = a[0][0].ctx();
    MatPoly r = matpoly_zero(ctx, n, m);
    for (int i = 0; i < n; i++)
        for (int t = 0; t < k; t++) {
            if (a[i][t].is_zero()) continue;
            for (int j = 0; j < m; j++) {
                if (b[t][j].is_zero()) continue;
                r[i][j] += a[i][t] * b[t][j];
            }
        }
    return r;
}

MatPoly matpoly_sub(const MatPoly& a, const MatPoly& b) {
    MatPoly r = a;
    for (size_t i = 0; i < r.size(); i++)
        for (size_t j = 0; j < r[i].size(); j++) r[i][j] -= b[i][j];
    return r;
}

MatPoly matpoly_derivative(const MatPoly& a, int var) {
    MatPoly r = a;
    for (auto& row : r)
        for (auto& p : row) p = p.derivative(var);
    return r;
}

}  // namespace pfaff
