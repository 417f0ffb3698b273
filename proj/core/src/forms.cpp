#include "umbilic/forms.hpp"

#include <cmath>
#include <sstream>

#include "umbilic/errors.hpp"

namespace umbilic {

double isothermal_residual(const FundamentalForms& f) {
    return (std::abs(f.g11 - f.g22) + 2.0 * std::abs(f.g12)) / (f.g11 + f.g22);
}

FundamentalForms fundamental_forms(const JetVec3& p) {
    const Eigen::Vector3d iu(p.x.fu, p.y.fu, p.z.fu);
    const Eigen::Vector3d iv(p.x.fv, p.y.fv, p.z.fv);
    const Eigen::Vector3d iuu(p.x.fuu, p.y.fuu, p.z.fuu);
    const Eigen::Vector3d iuv(p.x.fuv, p.y.fuv, p.z.fuv);
    const Eigen::Vector3d ivv(p.x.fvv, p.y.fvv, p.z.fvv);

    const Eigen::Vector3d cross = iu.cross(iv);
    const double cross_norm = cross.norm();
    if (cross_norm < 1e-12) {
        throw RegularityError("degenerate immersion point, |i_u x i_v| = " +
                                  std::to_string(cross_norm),
                              p.x.f, p.y.f);
    }

    FundamentalForms f;
    f.g11 = iu.dot(iu);
    f.g12 = iu.dot(iv);
    f.g22 = iv.dot(iv);
    f.normal = cross / cross_norm;
    f.l11 = iuu.dot(f.normal);
    f.l12 = iuv.dot(f.normal);
    f.l22 = ivv.dot(f.normal);

    // g11 = i_u . i_u as a jet, valid through order two.
    const Jet3 xu = d_du(p.x), yu = d_du(p.y), zu = d_du(p.z);
    f.g11_jet = xu * xu + yu * yu + zu * zu;
    return f;
}

namespace {

void require_isothermal(const FundamentalForms& f, const char* op) {
    const double r = isothermal_residual(f);
    if (!(r <= kIsothermalGate)) {  // NaN-robust: malformed forms are refused too
        std::ostringstream os;
        os << op << " requires isothermal coordinates: isothermal residual " << r
           << " exceeds gate " << kIsothermalGate;
        throw ContractError(os.str());
    }
}

}  // namespace

Eigen::Matrix2d weingarten(const FundamentalForms& f) {
    require_isothermal(f, "weingarten");
    Eigen::Matrix2d w;
    w << -f.l11 / f.g11, -f.l12 / f.g11,
         -f.l12 / f.g11, -f.l22 / f.g11;
    return w;
}

CurvatureData principal_curvatures(const FundamentalForms& f) {
    require_isothermal(f, "principal_curvatures");
    CurvatureData c;
    const double m = -(f.l11 + f.l22) / (2.0 * f.g11);
    const double half_spread =
        std::sqrt((f.l11 - f.l22) * (f.l11 - f.l22) + 4.0 * f.l12 * f.l12) / (2.0 * f.g11);
    c.lambda1 = m - half_spread;
    c.lambda2 = m + half_spread;
    c.mean = m;
    c.gauss_extrinsic = (f.l11 * f.l22 - f.l12 * f.l12) / (f.g11 * f.g22 - f.g12 * f.g12);
    c.gauss_conformal = conformal_gauss_curvature(f.g11_jet);
    return c;
}

double umbilic_defect(const FundamentalForms& f) {
    return (f.l11 - f.l22) * (f.l11 - f.l22) + 4.0 * f.l12 * f.l12;
}

namespace {

double identity_residual_of(const Christoffels& c) {
    return std::abs(c.g1_11 - c.g2_12) + std::abs(c.g1_11 + c.g1_22) +
           std::abs(c.g2_22 - c.g1_12) + std::abs(c.g2_22 + c.g2_11);
}

}  // namespace

Christoffels christoffels(const Jet3& E) {
    if (!(E.f > 0.0)) {
        throw DomainError("christoffels of a nonpositive conformal factor E = " +
                          std::to_string(E.f));
    }
    const double a = E.fu / (2.0 * E.f);
    const double b = E.fv / (2.0 * E.f);
    Christoffels c{};
    c.g1_11 = a;
    c.g2_12 = a;
    c.g1_22 = -a;
    c.g2_22 = b;
    c.g1_12 = b;
    c.g2_11 = -b;
    c.identity_residual = identity_residual_of(c);
    return c;
}

Christoffels christoffels_general(const Jet3& g11, const Jet3& g12, const Jet3& g22) {
    const double det = g11.f * g22.f - g12.f * g12.f;
    if (!(det > 0.0)) {
        throw DomainError("metric is not positive definite, det g = " + std::to_string(det));
    }
    const double i11 = g22.f / det, i12 = -g12.f / det, i22 = g11.f / det;

    // lowered symbols [ij,k] = (d_i g_jk + d_j g_ik - d_k g_ij) / 2
    const double c11_1 = 0.5 * g11.fu;
    const double c11_2 = g12.fu - 0.5 * g11.fv;
    const double c12_1 = 0.5 * g11.fv;
    const double c12_2 = 0.5 * g22.fu;
    const double c22_1 = g12.fv - 0.5 * g22.fu;
    const double c22_2 = 0.5 * g22.fv;

    Christoffels c{};
    c.g1_11 = i11 * c11_1 + i12 * c11_2;
    c.g2_11 = i12 * c11_1 + i22 * c11_2;
    c.g1_12 = i11 * c12_1 + i12 * c12_2;
    c.g2_12 = i12 * c12_1 + i22 * c12_2;
    c.g1_22 = i11 * c22_1 + i12 * c22_2;
    c.g2_22 = i12 * c22_1 + i22 * c22_2;
    c.identity_residual = identity_residual_of(c);
    return c;
}

double conformal_gauss_curvature(const Jet3& E) {
    return (E.grad_norm_sq() - E.f * E.laplacian()) / (2.0 * E.f * E.f * E.f);
}

GaussTwoWays gaussian_curvature_two_ways(const FundamentalForms& f) {
    GaussTwoWays g;
    g.extrinsic = (f.l11 * f.l22 - f.l12 * f.l12) / (f.g11 * f.g22 - f.g12 * f.g12);
    if (isothermal_residual(f) <= kIsothermalGate) {
        g.conformal = conformal_gauss_curvature(f.g11_jet);
    }
    return g;
}

}  // namespace umbilic
