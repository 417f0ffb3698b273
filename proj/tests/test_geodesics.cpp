#include <doctest.h>

#include <cmath>

#include "umbilic/errors.hpp"
#include "umbilic/geodesics.hpp"
#include "umbilic/surfaces.hpp"

using namespace umbilic;

namespace {

ExprPtr expr(const char* text) {
    const ParseResult r = parse(text);
    REQUIRE(r.ok());
    return r.ast;
}

double max_energy_drift(const Expr& conformal, const Trajectory& traj) {
    const auto& s0 = traj.points.front().state;
    const double e0 = energy(eval_value(conformal, s0.u, s0.v), s0);
    double worst = 0;
    for (const auto& p : traj.points) {
        const double e = energy(eval_value(conformal, p.state.u, p.state.v), p.state);
        worst = std::max(worst, std::abs(e - e0));
    }
    return worst / std::abs(e0);
}

double max_integral_drift(const Expr& f, const Expr& g, const Trajectory& traj) {
    const double k0 = liouville_first_integral(f, g, traj.points.front().state);
    double worst = 0;
    for (const auto& p : traj.points) {
        worst = std::max(worst, std::abs(liouville_first_integral(f, g, p.state) - k0));
    }
    return worst / std::abs(k0);
}

}  // namespace

TEST_CASE("geodesic right-hand side") {
    const Jet3 flatE = Jet3::constant(1.0);
    const GeodesicRhs flat = geodesic_rhs(flatE, {0.3, -0.2, 2.0, 3.0});
    CHECK(flat.du == 2.0);
    CHECK(flat.dv == 3.0);
    CHECK(flat.ddu == 0.0);
    CHECK(flat.ddv == 0.0);

    // E = 2+u at the origin: G1_11 = 1/4, G1_22 = -1/4
    const Jet3 E = eval_jet(*expr("2+u"), 0.0, 0.0);
    const GeodesicRhs along_u = geodesic_rhs(E, {0, 0, 1.0, 0.0});
    CHECK(along_u.ddu == doctest::Approx(-0.25).epsilon(1e-14));
    CHECK(along_u.ddv == doctest::Approx(0.0));
    const GeodesicRhs along_v = geodesic_rhs(E, {0, 0, 0.0, 1.0});
    CHECK(along_v.ddu == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(along_v.ddv == doctest::Approx(0.0));

    CHECK_THROWS_AS(geodesic_rhs(Jet3::constant(-1.0), {0, 0, 1, 0}), DomainError);
}

TEST_CASE("flat metric integrates to straight lines") {
    const ExprPtr E = expr("1");
    const Trajectory traj =
        integrate(*E, kDefaultDomain, {0.0, 0.0, 1.0, 0.0}, 0.01, 100, "flat");
    REQUIRE(traj.points.size() == 101);
    CHECK(!traj.exited_domain);
    const GeodesicState& end = traj.points.back().state;
    CHECK(std::abs(end.u - 1.0) <= 1e-12);
    CHECK(std::abs(end.v) <= 1e-12);
    CHECK(std::abs(end.du - 1.0) <= 1e-12);
    CHECK(std::abs(end.dv) <= 1e-12);
    // affine in t to machine precision at every step
    for (const auto& p : traj.points) {
        CHECK(std::abs(p.state.u - p.t) <= 1e-12);
    }
    CHECK(max_energy_drift(*E, traj) == 0.0);
}

TEST_CASE("sphere-factor geodesic conserves energy to 1e-10 over unit time") {
    const ExprPtr E = expr("4/(1+u^2+v^2)^2");
    const Domain domain{-3, 3, -3, 3};
    const Trajectory traj = integrate(*E, domain, {0.0, 0.0, 1.0, 0.0}, 1e-3, 1000, "stereo");
    REQUIRE(traj.points.size() == 1001);
    CHECK(max_energy_drift(*E, traj) <= 1e-10);
    // image of a great circle through the pole: stays on the u-axis,
    // u(t) = tan(t) for this normalization
    const GeodesicState& end = traj.points.back().state;
    CHECK(std::abs(end.v) <= 1e-12);
    CHECK(end.u == doctest::Approx(std::tan(1.0)).epsilon(1e-9));
}

TEST_CASE("boundary exit truncates the trajectory") {
    const ExprPtr E = expr("2+u");
    const Trajectory traj =
        integrate(*E, kDefaultDomain, {0.0, 0.0, 1.0, 0.0}, 0.01, 500, "linear");
    CHECK(traj.exited_domain);
    CHECK(traj.points.size() < 501);
    const GeodesicState& last = traj.points.back().state;
    CHECK(kDefaultDomain.contains(last.u, last.v));

    CHECK_THROWS_AS(integrate(*E, kDefaultDomain, {5.0, 0.0, 1.0, 0.0}, 0.01, 10),
                    DomainError);
    CHECK_THROWS_AS(integrate(*E, kDefaultDomain, {0, 0, 1, 0}, -0.1, 10),
                    std::invalid_argument);
}

TEST_CASE("energy values") {
    CHECK(energy(1.0, {0, 0, 3.0, 4.0}) == 25.0);
    CHECK(energy(4.0, {0, 0, 1.0, 0.0}) == 4.0);
    CHECK(energy(2.0, {0, 0, 1.0, 1.0}) == 4.0);
}

TEST_CASE("liouville first integral values") {
    const ExprPtr f = expr("u^2");
    const ExprPtr g = expr("-v^2+3");
    CHECK(liouville_first_integral(*f, *g, {0, 0, 1.0, 0.0}) == doctest::Approx(9.0));
    CHECK(liouville_first_integral(*f, *g, {1, 1, 0.0, 1.0}) == doctest::Approx(-3.0));

    const ExprPtr f0 = expr("0");
    const ExprPtr g1 = expr("1");
    CHECK(liouville_first_integral(*f0, *g1, {0.3, -0.4, 0.8, 0.6}) ==
          doctest::Approx(0.64));  // du^2 for the flat split
}

TEST_CASE("energy drift is fourth order in the step") {
    struct Case {
        const char* metric;
        Domain domain;
        GeodesicState start;
    };
    const Case cases[] = {
        {"2+u", Domain{-2, 2, -2, 2}, {0.0, 0.0, 0.3, 0.4}},
        {"u^2-v^2+3", Domain{-2, 2, -2, 2}, {0.1, -0.2, 0.5, 0.3}},
        {"4/(1+u^2+v^2)^2", Domain{-3, 3, -3, 3}, {0.0, 0.0, 1.0, 0.2}},
    };
    for (const auto& c : cases) {
        const ExprPtr E = expr(c.metric);
        const Trajectory coarse = integrate(*E, c.domain, c.start, 0.02, 50, c.metric);
        const Trajectory fine = integrate(*E, c.domain, c.start, 0.01, 100, c.metric);
        REQUIRE(!coarse.exited_domain);
        REQUIRE(!fine.exited_domain);
        const double d0 = max_energy_drift(*E, coarse);
        const double d1 = max_energy_drift(*E, fine);
        REQUIRE(d1 > 0.0);
        const double ratio = d0 / d1;
        INFO(c.metric, " drift ratio ", ratio);
        CHECK(ratio >= 12.0);
        CHECK(ratio <= 20.0);
    }
}

TEST_CASE("liouville integral conservation on the separable harmonic family") {
    // E = f(u) + g(v) with f = alpha u^2, g = -alpha v^2 + beta; harmonic by
    // construction. The formula is validated by its convergence order: if it
    // were wrong, drift would not vanish at O(h^4).
    const ExprPtr E = expr("u^2-v^2+3");
    const ExprPtr f = expr("u^2");
    const ExprPtr g = expr("-v^2+3");
    const Domain domain{-2, 2, -2, 2};
    const GeodesicState start{0.0, 0.0, 1.0, 0.0};

    const Trajectory coarse = integrate(*E, domain, start, 0.02, 50, "saddle");
    const Trajectory fine = integrate(*E, domain, start, 0.01, 100, "saddle");
    const double d0 = max_integral_drift(*f, *g, coarse);
    const double d1 = max_integral_drift(*f, *g, fine);
    REQUIRE(d1 > 0.0);
    const double ratio = d0 / d1;
    INFO("first-integral drift ratio ", ratio);
    CHECK(ratio >= 12.0);
    CHECK(ratio <= 20.0);

    const Trajectory tight = integrate(*E, domain, start, 1e-3, 1000, "saddle");
    REQUIRE(tight.points.size() == 1001);
    CHECK(max_integral_drift(*f, *g, tight) <= 1e-8);
    CHECK(max_energy_drift(*E, tight) <= 1e-8);

    // a second family member, alpha = 1/2, beta = 2
    const ExprPtr E2 = expr("u^2/2 - v^2/2 + 2");
    const ExprPtr f2 = expr("u^2/2");
    const ExprPtr g2 = expr("-v^2/2 + 2");
    const Trajectory t2 = integrate(*E2, domain, {0.2, 0.1, 0.7, -0.4}, 1e-3, 1000, "saddle2");
    CHECK(max_integral_drift(*f2, *g2, t2) <= 1e-8);
}
