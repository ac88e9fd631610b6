#pragma once

#include <Eigen/Dense>
#include <string>

#include "finsler/geometry.hpp"

namespace finsler {

enum class CurvatureKind { ChernH, ChernHV, Barthel, CartanH };

const char* curvatureKindName(CurvatureKind k);
CurvatureKind curvatureKindFromName(const std::string& name);  // "chern-h" etc.

// Numeric subspace with an orthonormal basis, produced by SVD rank decisions.
struct Subspace {
    int ambient = 0;
    Eigen::MatrixXd basis;            // ambient x rank, orthonormal columns
    double relTol = 0.0;
    double absFloor = 0.0;
    Eigen::VectorXd singularValues;   // of the defining stacked system
    double residual = 0.0;            // ||A * basis||_max
    std::string provenance;

    int rank() const { return static_cast<int>(basis.cols()); }
    // sigma just above / just below the rank cut (0 when absent); their ratio
    // records how clean the decision was.
    double sigmaKept = 0.0;
    double sigmaDropped = 0.0;
    double spectralGap() const {
        return sigmaDropped > 0.0 ? sigmaKept / sigmaDropped
                                  : std::numeric_limits<double>::infinity();
    }
};

inline constexpr double kDefaultRankTol = 1e-8;
// Stacked systems whose largest singular value falls below this are treated
// as numerically zero (full null space).
inline constexpr double kDefaultAbsFloor = 1e-10;

// Orthonormal basis of {v : Av = 0}; rank decided by sigma_i <= relTol *
// sigma_max, with sigma_max <= absFloor meaning the zero map.
Subspace nullSpace(const Eigen::MatrixXd& A, double relTol = kDefaultRankTol,
                   double absFloor = kDefaultAbsFloor);

// Common null space of W -> T(..., W, ...) over all free slots, contracting
// the first curvature argument (slot j). Basis vectors are h-frame
// coefficients.
Subspace nullitySpace(const GeometryBundle& b, CurvatureKind kind,
                      double relTol = kDefaultRankTol, double absFloor = kDefaultAbsFloor);

// Common null space contracting the operand slot (slot i); defined for the
// h-curvatures.
Subspace kernelSpace(const GeometryBundle& b, CurvatureKind kind,
                     double relTol = kDefaultRankTol, double absFloor = kDefaultAbsFloor);

// true iff every basis vector of A lies in B up to `tol` after projection.
bool subspaceLeq(const Subspace& A, const Subspace& B, double tol);
double subspaceResidual(const Subspace& A, const Subspace& B);  // max projection defect

// g-orthogonal complement of S among horizontal vectors.
Subspace conullity(const GeometryBundle& b, const Subspace& S,
                   double relTol = kDefaultRankTol);

// Vertical component of the bracket of the two constant-coefficient
// horizontal fields a^j h_j and b^k h_k: v^m = a^j b^k Rb^m_{jk}.
std::vector<double> bracketVertical(const GeometryBundle& b, std::span<const double> a,
                                    std::span<const double> bvec);

// Residual of the stacked nullity system applied to one candidate vector,
// normalized by the cancellation-free scale of the contraction.
double nullityResidual(const GeometryBundle& b, CurvatureKind kind, std::span<const double> w);

// Raw TTM coordinates of an h-frame coefficient vector: the vertical part is
// -N^m_i a^i.
std::vector<double> verticalPartOfHorizontal(const GeometryBundle& b,
                                             std::span<const double> a);

}  // namespace finsler
