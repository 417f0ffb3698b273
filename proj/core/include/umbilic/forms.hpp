#ifndef UMBILIC_FORMS_HPP
#define UMBILIC_FORMS_HPP

#include <Eigen/Dense>
#include <optional>

#include "umbilic/jet.hpp"

namespace umbilic {

/// First and second fundamental forms at one point of an immersed surface.
/// The normal is (i_u x i_v)/|i_u x i_v|; every sign-sensitive quantity
/// downstream inherits that orientation choice. g11_jet keeps the conformal
/// factor's derivative data (valid through second order) for intrinsic
/// formulas.
struct FundamentalForms {
    double g11 = 0, g12 = 0, g22 = 0;
    double l11 = 0, l12 = 0, l22 = 0;
    Eigen::Vector3d normal = Eigen::Vector3d::Zero();
    Jet3 g11_jet;
};

struct CurvatureData {
    double lambda1 = 0;  // principal curvatures, sorted ascending
    double lambda2 = 0;
    double mean = 0;
    double gauss_extrinsic = 0;                  // det l / det g
    std::optional<double> gauss_conformal;       // intrinsic formula; isothermal only
};

/// Relative isothermality defect (|g11-g22| + 2|g12|) / (g11+g22).
/// Scale-invariant; zero exactly in isothermal coordinates.
double isothermal_residual(const FundamentalForms& f);

/// Gate below which isothermal-only formulas may be applied.
inline constexpr double kIsothermalGate = 1e-8;

/// Forms from an immersion point with full jet data. Throws RegularityError
/// when |i_u x i_v| < 1e-12.
FundamentalForms fundamental_forms(const JetVec3& p);

/// Shape operator in isothermal coordinates:
///   [ -l11/g11  -l12/g11 ]
///   [ -l12/g11  -l22/g11 ]
/// Refuses (ContractError) when isothermal_residual(f) > kIsothermalGate.
Eigen::Matrix2d weingarten(const FundamentalForms& f);

/// Eigenvalues of the isothermal shape operator, via its characteristic
/// polynomial (lambda + l11/g11)(lambda + l22/g11) - l12^2/g11^2 = 0.
/// Same isothermality gate as weingarten().
CurvatureData principal_curvatures(const FundamentalForms& f);

/// (l11 - l22)^2 + 4 l12^2: zero exactly at umbilic points, where the second
/// form is a multiple of the identity.
double umbilic_defect(const FundamentalForms& f);

/// Christoffel symbols; for a conformal metric E(du^2+dv^2) they collapse to
/// the four-identity pattern whose violation identity_residual measures:
///   |G1_11 - G2_12| + |G1_11 + G1_22| + |G2_22 - G1_12| + |G2_22 + G2_11|.
struct Christoffels {
    double g1_11, g1_12, g1_22;  // upper index 1
    double g2_11, g2_12, g2_22;  // upper index 2
    double identity_residual;
};

/// Conformal-metric symbols from the factor's jet (requires E > 0):
/// G1_11 = G2_12 = -G1_22 = E_u/(2E), G2_22 = G1_12 = -G2_11 = E_v/(2E).
Christoffels christoffels(const Jet3& E);

/// General 2x2 metric (jets supply the first derivatives); exposes the
/// identity violation on non-isothermal metrics.
Christoffels christoffels_general(const Jet3& g11, const Jet3& g12, const Jet3& g22);

/// Gaussian curvature of the conformal metric E(du^2+dv^2) from E's jet:
/// (|grad E|^2 - E lap E) / (2 E^3). Needs E's derivatives through order two.
double conformal_gauss_curvature(const Jet3& E);

struct GaussTwoWays {
    double extrinsic;                      // (l11 l22 - l12^2) / (g11 g22 - g12^2)
    std::optional<double> conformal;       // absent for non-isothermal input
};

/// Gaussian curvature extrinsically and (when isothermal) intrinsically from
/// the conformal factor; the two agree for genuine immersions.
GaussTwoWays gaussian_curvature_two_ways(const FundamentalForms& f);

}  // namespace umbilic

#endif
