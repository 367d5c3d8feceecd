#pragma once

#include "pfaff/poly.hpp"

namespace pfaff {

using MatPoly = std::vector<std::vector<Poly>>;

MatPoly matpoly_zero(const CtxPtr& ctx, int rows, int cols);
MatPoly matpoly_identity(const CtxPtr& ctx, int size);

/// Fraction-free Bareiss determinant (exact divisions only).
Poly matpoly_det(const MatPoly& a);

/// Adjugate via cofactor determinants; a * adj(a) = det(a) * I.
MatPoly matpoly_adjugate(const MatPoly& a);

MatPoly matpoly_mul(const MatPoly& a, const MatPoly& b);
MatPoly matpoly_sub(const MatPoly& a, const MatPoly& b);
MatPoly matpoly_derivative(const MatPoly& a, int var);

}  // namespace pfaff
