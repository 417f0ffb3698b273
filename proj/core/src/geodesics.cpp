#include "umbilic/geodesics.hpp"

#include <cmath>

#include "umbilic/errors.hpp"
#include "umbilic/forms.hpp"

namespace umbilic {

GeodesicRhs geodesic_rhs(const Jet3& E, const GeodesicState& s) {
    const Christoffels c = christoffels(E);
    GeodesicRhs r{};
    r.du = s.du;
    r.dv = s.dv;
    r.ddu = -c.g1_11 * s.du * s.du - 2.0 * c.g1_12 * s.du * s.dv - c.g1_22 * s.dv * s.dv;
    r.ddv = -c.g2_11 * s.du * s.du - 2.0 * c.g2_12 * s.du * s.dv - c.g2_22 * s.dv * s.dv;
    return r;
}

namespace {

GeodesicRhs rhs_at(const Expr& conformal, const GeodesicState& s) {
    return geodesic_rhs(eval_jet(conformal, s.u, s.v), s);
}

GeodesicState advance(const GeodesicState& s, const GeodesicRhs& k, double dt) {
    return {s.u + dt * k.du, s.v + dt * k.dv, s.du + dt * k.ddu, s.dv + dt * k.ddv};
}

}  // namespace

Trajectory integrate(const Expr& conformal, const Domain& domain, const GeodesicState& s0,
                     double h, int steps, std::string metric_name) {
    if (!(h > 0.0)) throw std::invalid_argument("step size must be positive");
    if (steps < 0) throw std::invalid_argument("step count must be nonnegative");
    if (!domain.contains(s0.u, s0.v)) {
        throw DomainError("geodesic start point outside metric domain", s0.u, s0.v);
    }
    // rounding slack so a trajectory ending exactly on the closed boundary
    // does not count as an exit
    const double slack_u = 1e-12 * (1.0 + std::abs(domain.u_min) + std::abs(domain.u_max));
    const double slack_v = 1e-12 * (1.0 + std::abs(domain.v_min) + std::abs(domain.v_max));
    auto inside = [&](double u, double v) {
        return u >= domain.u_min - slack_u && u <= domain.u_max + slack_u &&
               v >= domain.v_min - slack_v && v <= domain.v_max + slack_v;
    };

    Trajectory traj;
    traj.metric_name = std::move(metric_name);
    traj.h = h;
    traj.points.push_back({0.0, s0});

    GeodesicState s = s0;
    for (int n = 0; n < steps; ++n) {
        const GeodesicRhs k1 = rhs_at(conformal, s);
        const GeodesicRhs k2 = rhs_at(conformal, advance(s, k1, 0.5 * h));
        const GeodesicRhs k3 = rhs_at(conformal, advance(s, k2, 0.5 * h));
        const GeodesicRhs k4 = rhs_at(conformal, advance(s, k3, h));

        GeodesicState next;
        next.u = s.u + h / 6.0 * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du);
        next.v = s.v + h / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
        next.du = s.du + h / 6.0 * (k1.ddu + 2.0 * k2.ddu + 2.0 * k3.ddu + k4.ddu);
        next.dv = s.dv + h / 6.0 * (k1.ddv + 2.0 * k2.ddv + 2.0 * k3.ddv + k4.ddv);

        if (!inside(next.u, next.v)) {
            traj.exited_domain = true;
            break;
        }
        s = next;
        traj.points.push_back({(n + 1) * h, s});
    }
    return traj;
}

double energy(double E_value, const GeodesicState& s) {
    return E_value * (s.du * s.du + s.dv * s.dv);
}

double liouville_first_integral(const Expr& f, const Expr& g, const GeodesicState& s) {
    const double fu = eval_value(f, s.u, s.v);
    const double gv = eval_value(g, s.u, s.v);
    return (fu + gv) * (gv * s.du * s.du - fu * s.dv * s.dv);
}

}  // namespace umbilic
