#ifndef UMBILIC_GEODESICS_HPP
#define UMBILIC_GEODESICS_HPP

#include <string>
#include <vector>

#include "umbilic/expr.hpp"
#include "umbilic/jet.hpp"
#include "umbilic/surfaces.hpp"

namespace umbilic {

struct GeodesicState {
    double u = 0, v = 0;
    double du = 0, dv = 0;  // parameter-time velocities
};

struct TrajectoryPoint {
    double t;
    GeodesicState state;
};

struct Trajectory {
    std::string metric_name;
    double h = 0;
    std::vector<TrajectoryPoint> points;  // uniform spacing h in t
    bool exited_domain = false;
};

struct GeodesicRhs {
    double du, dv, ddu, ddv;
};

/// Geodesic equation of the conformal metric E(du^2 + dv^2):
///   u'' = -G1_11 u'^2 - 2 G1_12 u'v' - G1_22 v'^2, likewise v'' with G2.
GeodesicRhs geodesic_rhs(const Jet3& E, const GeodesicState& s);

/// Classical fixed-step RK4. Integration stops (exited_domain = true) before
/// the first step whose endpoint leaves the domain rectangle.
Trajectory integrate(const Expr& conformal, const Domain& domain, const GeodesicState& s0,
                     double h, int steps, std::string metric_name = "metric");

/// Kinetic energy E (du^2 + dv^2); conserved along geodesics.
double energy(double E_value, const GeodesicState& s);

/// Quadratic first integral of the separable metric E = f(u) + g(v):
///   K = (f+g) (g du^2 - f dv^2).
/// The formula is classical Liouville-metric theory; its correctness here is
/// established by the O(h^4)-convergent conservation check in the tests, not
/// assumed.
double liouville_first_integral(const Expr& f, const Expr& g, const GeodesicState& s);

}  // namespace umbilic

#endif
