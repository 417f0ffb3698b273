#include "umbilic/surfaces.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "umbilic/errors.hpp"

namespace umbilic {

namespace {

ExprPtr must_parse(const char* text) {
    ParseResult r = parse(text);
    if (!r.ok()) throw std::logic_error("catalog expression failed to parse: " + std::string(text));
    return r.ast;
}

constexpr double kPi = 3.14159265358979323846;

struct CatalogEntry {
    const char* name;
    const char* x;  // null for metric-only entries
    const char* y;
    const char* z;
    const char* conformal;  // analytic E = g11; null when not isothermal
    Domain domain;
};

// Isothermal immersions carry their conformal factor in closed form so the
// certifier can consume order-3 analytic jets.
const CatalogEntry kCatalog[] = {
    {"plane", "u", "v", "0", "1", kDefaultDomain},
    {"sphere_stereo",
     "2*u/(1+u^2+v^2)", "2*v/(1+u^2+v^2)", "(u^2+v^2-1)/(1+u^2+v^2)",
     "4/(1+u^2+v^2)^2", kDefaultDomain},
    {"catenoid", "cosh(v)*cos(u)", "cosh(v)*sin(u)", "v", "cosh(v)^2",
     Domain{-kPi, kPi, -1.0, 1.0}},
    {"enneper", "u - u^3/3 + u*v^2", "v - v^3/3 + v*u^2", "u^2 - v^2",
     "(1+u^2+v^2)^2", kDefaultDomain},
    {"cylinder", "cos(u)", "sin(u)", "v", "1", Domain{-kPi, kPi, -1.0, 1.0}},
    {"graph_paraboloid", "u", "v", "u^2", nullptr, kDefaultDomain},
    {"metric_linear", nullptr, nullptr, nullptr, "2+u", kDefaultDomain},
    {"metric_saddle", nullptr, nullptr, nullptr, "u^2-v^2+3", kDefaultDomain},
};

const CatalogEntry* find_entry(const std::string& name) {
    for (const auto& e : kCatalog) {
        if (name == e.name) return &e;
    }
    return nullptr;
}

}  // namespace

std::vector<std::string> catalog_names() {
    std::vector<std::string> names;
    for (const auto& e : kCatalog) names.emplace_back(e.name);
    return names;
}

SurfaceDef catalog(const std::string& name, const std::vector<double>& params) {
    const CatalogEntry* entry = find_entry(name);
    if (!entry) throw std::invalid_argument("unknown catalog surface '" + name + "'");
    if (!params.empty()) {
        throw std::invalid_argument("catalog surface '" + name + "' takes 0 parameters, got " +
                                    std::to_string(params.size()));
    }
    SurfaceDef def;
    def.name = name;
    def.domain = entry->domain;
    if (entry->x) {
        def.kind = SurfaceDef::Immersion{must_parse(entry->x), must_parse(entry->y),
                                         must_parse(entry->z)};
    } else {
        def.kind = SurfaceDef::MetricOnly{must_parse(entry->conformal)};
    }
    return def;
}

SurfaceDef catalog_metric(const std::string& name) {
    const CatalogEntry* entry = find_entry(name);
    if (!entry) throw std::invalid_argument("unknown catalog surface '" + name + "'");
    if (!entry->conformal) {
        throw std::invalid_argument("catalog surface '" + name +
                                    "' is not isothermal; it has no conformal factor");
    }
    SurfaceDef def;
    def.name = name;
    def.domain = entry->domain;
    def.kind = SurfaceDef::MetricOnly{must_parse(entry->conformal)};
    return def;
}

GridSample sample(const SurfaceDef& def, const GridSpec& grid) {
    if (grid.nu < 3 || grid.nv < 3) {
        throw std::invalid_argument("grid must be at least 3x3");
    }
    if (!(def.domain.width() > 0.0) || !(def.domain.height() > 0.0)) {
        throw std::invalid_argument("surface domain must have positive area");
    }

    GridSample s;
    s.grid = grid;
    s.domain = def.domain;
    const int n = grid.nu * grid.nv;
    s.u.resize(n);
    s.v.resize(n);

    const double du = def.domain.width() / (grid.nu - 1);
    const double dv = def.domain.height() / (grid.nv - 1);
    for (int j = 0; j < grid.nv; ++j) {
        for (int i = 0; i < grid.nu; ++i) {
            const int k = j * grid.nu + i;
            s.u[k] = def.domain.u_min + i * du;
            s.v[k] = def.domain.v_min + j * dv;
        }
    }

    if (def.is_immersion()) {
        const auto& imm = def.immersion();
        s.position.resize(n);
        for (int k = 0; k < n; ++k) {
            s.position[k] = JetVec3{eval_jet(*imm.x, s.u[k], s.v[k]),
                                    eval_jet(*imm.y, s.u[k], s.v[k]),
                                    eval_jet(*imm.z, s.u[k], s.v[k])};
        }
    } else {
        const auto& E = *def.metric().conformal_factor;
        s.conformal.resize(n);
        for (int k = 0; k < n; ++k) {
            s.conformal[k] = eval_jet(E, s.u[k], s.v[k]);
            if (s.conformal[k].f < kPositivityMargin) {
                std::ostringstream os;
                os << "conformal factor E = " << s.conformal[k].f << " below positivity margin "
                   << kPositivityMargin;
                throw DomainError(os.str(), s.u[k], s.v[k]);
            }
        }
    }
    return s;
}

SurfaceDef load_surface_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open surface file '" + path + "'");

    ExprPtr x, y, z, E;
    Domain domain = kDefaultDomain;
    bool have_domain = false;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // trim
        const auto begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        const auto end = line.find_last_not_of(" \t\r");
        line = line.substr(begin, end - begin + 1);
        if (line.empty() || line[0] == '#') continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected key=value");
        }
        std::string key = line.substr(0, eq);
        const auto kend = key.find_last_not_of(" \t");
        key = key.substr(0, kend == std::string::npos ? 0 : kend + 1);
        std::string value = line.substr(eq + 1);

        if (key == "domain") {
            std::istringstream vs(value);
            char c1, c2, c3;
            if (!(vs >> domain.u_min >> c1 >> domain.u_max >> c2 >> domain.v_min >> c3 >>
                  domain.v_max) ||
                c1 != ',' || c2 != ',' || c3 != ',') {
                throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                            ": domain wants u_min,u_max,v_min,v_max");
            }
            have_domain = true;
            continue;
        }

        ParseResult r = parse(value);
        if (!r.ok()) {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " +
                                        r.error->message());
        }
        if (key == "x") x = r.ast;
        else if (key == "y") y = r.ast;
        else if (key == "z") z = r.ast;
        else if (key == "E") E = r.ast;
        else throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                         ": unknown key '" + key + "'");
    }

    const bool immersion = x || y || z;
    if (immersion && !(x && y && z)) {
        throw std::invalid_argument(path + ": immersion needs all of x=, y=, z=");
    }
    if (immersion && E) {
        throw std::invalid_argument(path + ": give either x/y/z or E, not both");
    }
    if (!immersion && !E) {
        throw std::invalid_argument(path + ": no surface definition found");
    }
    (void)have_domain;

    SurfaceDef def;
    // name = filename without directory or extension
    auto slash = path.find_last_of("/\\");
    std::string stem = slash == std::string::npos ? path : path.substr(slash + 1);
    auto dot = stem.find_last_of('.');
    if (dot != std::string::npos && dot > 0) stem = stem.substr(0, dot);
    def.name = stem;
    def.domain = domain;
    if (immersion) {
        def.kind = SurfaceDef::Immersion{x, y, z};
    } else {
        def.kind = SurfaceDef::MetricOnly{E};
    }
    return def;
}

}  // namespace umbilic
