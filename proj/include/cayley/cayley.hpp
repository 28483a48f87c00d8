#pragma once

// Pointwise test for Cayley 4-planes: the obstruction 2-form eta built from
// the trilinear map B and the projection onto the 7-dimensional summand of
// the 2-forms.

#include <array>
#include <optional>

#include "cayley/geometry.hpp"

namespace cayley {

struct FourPlane {
    std::array<TangentVector, 4> spanning;
};

using Pi7Matrix = Eigen::Matrix<double, 28, 28>;

/// B(u, v, w) = w _| v _| u _| Phi, i.e. the 1-form Phi(u, v, w, .).
KForm triple_B(const TangentVector& u, const TangentVector& v, const TangentVector& w, const StructurePack& pack);

/// Projection of a 2-form onto Lambda^2_7:
///   pi7(u_flat ^ v_flat) = (u_flat ^ v_flat + u _| v _| Phi) / 4,
/// extended linearly over the coframe basis 2-forms.
KForm pi7(const KForm& a, const StructurePack& pack);

/// Matrix of pi7 acting on dense coefficients in masks_of_degree(2) order.
Pi7Matrix pi7_matrix(const StructurePack& pack);

/// 4-volume of the parallelepiped spanned by the plane: sqrt(det Gram).
double plane_volume(const FourPlane& plane, const MetricAtPoint& g);

/// The obstruction 2-form for the ordered spanning set (u, v, w, y).
/// Throws std::domain_error if the spanning set is degenerate.
KForm eta(const FourPlane& plane, const StructurePack& pack);

struct CayleyTest {
    bool cayley = false;
    /// |eta| / vol4, independent of the chosen spanning set.
    double residual = 0.0;
    /// Phi(u, v, w, y) / vol4; +1 or -1 on a Cayley plane (orientation sign).
    double calibration = 0.0;
};

CayleyTest is_cayley(const FourPlane& plane, const StructurePack& pack, double tol = 1e-6);

/// The seven 2-forms spanning Lambda^2_7 in the diagonalizing SO(3) coframe.
/// Throws std::invalid_argument for any other pack.
std::array<KForm, 7> lambda_basis(const StructurePack& pack);

/// The idempotence and rank checks use pi7 written in an orthonormal coframe
/// of the pack metric.
struct Pi7Report {
    /// max |P^2 - P| entry.
    double idempotence = 0.0;
    /// Singular values above 1e-8 times the largest.
    int rank = 0;
    /// max |pi7(lambda_i) - lambda_i|; only for the diagonalizing SO(3) pack.
    std::optional<double> lambda_fixed;
};

Pi7Report pi7_suite(const StructurePack& pack);

/// Pack of the flat model: Phi on R^8 with the Euclidean metric.
StructurePack flat_pack();

}  // namespace cayley
