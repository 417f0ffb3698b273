#ifndef UMBILIC_SURFACES_HPP
#define UMBILIC_SURFACES_HPP

#include <string>
#include <variant>
#include <vector>

#include "umbilic/expr.hpp"
#include "umbilic/jet.hpp"

namespace umbilic {

struct Domain {
    double u_min, u_max;
    double v_min, v_max;

    bool contains(double u, double v) const {
        return u >= u_min && u <= u_max && v >= v_min && v <= v_max;
    }
    double width() const { return u_max - u_min; }
    double height() const { return v_max - v_min; }

    bool operator==(const Domain&) const = default;
};

inline constexpr Domain kDefaultDomain{-1.0, 1.0, -1.0, 1.0};

/// A surface given by an immersion (x,y,z)(u,v), or a metric E(u,v)(du^2+dv^2)
/// given by its conformal factor alone.
struct SurfaceDef {
    struct Immersion {
        ExprPtr x, y, z;
    };
    struct MetricOnly {
        ExprPtr conformal_factor;
    };

    std::string name;
    std::variant<Immersion, MetricOnly> kind;
    Domain domain = kDefaultDomain;

    bool is_immersion() const { return std::holds_alternative<Immersion>(kind); }
    const Immersion& immersion() const { return std::get<Immersion>(kind); }
    const MetricOnly& metric() const { return std::get<MetricOnly>(kind); }
};

/// Rectangular sampling grid; points include the rectangle endpoints
/// (derivatives come from jets, not grid differencing, so the boundary is
/// safe).
struct GridSpec {
    int nu = 33;
    int nv = 33;

    bool operator==(const GridSpec&) const = default;
};

inline constexpr int kDefaultGridSize = 33;

/// Conformal factors below this are treated as positivity violations; keeps
/// downstream divisions by E well-conditioned.
inline constexpr double kPositivityMargin = 1e-9;

/// Jets sampled over a grid. Row-major with u fastest: index(i,j) = j*nu + i.
struct GridSample {
    GridSpec grid;
    Domain domain;
    std::vector<double> u, v;           // per sample point
    std::vector<JetVec3> position;      // immersion samples (empty otherwise)
    std::vector<Jet3> conformal;        // metric samples (empty otherwise)

    bool is_immersion() const { return !position.empty(); }
    int size() const { return grid.nu * grid.nv; }
    int index(int i, int j) const { return j * grid.nu + i; }
};

std::vector<std::string> catalog_names();

/// Built-in surfaces and metrics. All current entries take no parameters;
/// passing any is a parameter-count error (std::invalid_argument).
SurfaceDef catalog(const std::string& name, const std::vector<double>& params = {});

/// The conformal factor E = g11 of a catalog entry, as an analytic
/// expression (defined for the isothermal immersions and the metric-only
/// entries; throws std::invalid_argument for graph_paraboloid, which is not
/// isothermal).
SurfaceDef catalog_metric(const std::string& name);

/// Sample a definition over a grid. Metric-only definitions fail with a
/// DomainError naming the offending point when min E < kPositivityMargin.
GridSample sample(const SurfaceDef& def, const GridSpec& grid);

/// Plain-text definition file: lines "x=", "y=", "z=" (immersion) or "E="
/// (metric only), plus "domain=u_min,u_max,v_min,v_max". '#' starts a
/// comment line.
SurfaceDef load_surface_file(const std::string& path);

}  // namespace umbilic

#endif
