#ifndef UMBILIC_TESTS_SUPPORT_HPP
#define UMBILIC_TESTS_SUPPORT_HPP

#include <cmath>
#include <random>
#include <vector>

#include "umbilic/expr.hpp"
#include "umbilic/jet.hpp"
#include "umbilic/surfaces.hpp"

namespace testsupport {

// All ten jet coefficients as an array, for sweep-style comparisons.
inline std::vector<double> coeffs(const umbilic::Jet3& j) {
    return {j.f, j.fu, j.fv, j.fuu, j.fuv, j.fvv, j.fuuu, j.fuuv, j.fuvv, j.fvvv};
}

inline const char* coeff_name(int i) {
    static const char* names[] = {"f",    "fu",   "fv",   "fuu",  "fuv",
                                  "fvv",  "fuuu", "fuuv", "fuvv", "fvvv"};
    return names[i];
}

inline double max_coeff_diff(const umbilic::Jet3& a, const umbilic::Jet3& b) {
    const auto ca = coeffs(a), cb = coeffs(b);
    double m = 0;
    for (int i = 0; i < 10; ++i) m = std::max(m, std::abs(ca[i] - cb[i]));
    return m;
}

inline umbilic::Jet3 random_jet(std::mt19937& rng, double scale = 2.0) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    umbilic::Jet3 j;
    j.f = dist(rng);
    j.fu = dist(rng);
    j.fv = dist(rng);
    j.fuu = dist(rng);
    j.fuv = dist(rng);
    j.fvv = dist(rng);
    j.fuuu = dist(rng);
    j.fuuv = dist(rng);
    j.fuvv = dist(rng);
    j.fvvv = dist(rng);
    return j;
}

struct CatalogExpression {
    umbilic::ExprPtr expr;
    umbilic::Domain domain;
};

// Every expression appearing in the built-in catalog: immersion components
// plus the analytic conformal factors.
inline std::vector<CatalogExpression> all_catalog_expressions() {
    std::vector<CatalogExpression> out;
    for (const auto& name : umbilic::catalog_names()) {
        const umbilic::SurfaceDef def = umbilic::catalog(name);
        if (def.is_immersion()) {
            const auto& imm = def.immersion();
            out.push_back({imm.x, def.domain});
            out.push_back({imm.y, def.domain});
            out.push_back({imm.z, def.domain});
        } else {
            out.push_back({def.metric().conformal_factor, def.domain});
        }
        if (name != "graph_paraboloid" && def.is_immersion()) {
            const umbilic::SurfaceDef metric = umbilic::catalog_metric(name);
            out.push_back({metric.metric().conformal_factor, def.domain});
        }
    }
    return out;
}

// Random point strictly inside the domain, at least `margin` from the edge.
inline std::pair<double, double> random_interior_point(std::mt19937& rng,
                                                       const umbilic::Domain& d,
                                                       double margin) {
    std::uniform_real_distribution<double> du(d.u_min + margin, d.u_max - margin);
    std::uniform_real_distribution<double> dv(d.v_min + margin, d.v_max - margin);
    return {du(rng), dv(rng)};
}

}  // namespace testsupport

#endif
