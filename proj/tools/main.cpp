// umbilic: residual certifiers for umbilical isothermal surfaces with a
// harmonic conformal factor. Subcommands: analyze, certify, geodesic, search.
#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "umbilic/errors.hpp"
#include "umbilic/forms.hpp"
#include "umbilic/geodesics.hpp"
#include "umbilic/nogo.hpp"
#include "umbilic/search.hpp"
#include "umbilic/surfaces.hpp"

using json = nlohmann::ordered_json;
using namespace umbilic;

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitEvaluation = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    char x = 0;
    int consumed = 0;
    if (std::sscanf(text.c_str(), "%d%c%d%n", &g.nu, &x, &g.nv, &consumed) != 3 ||
        (x != 'x' && x != 'X') || consumed != static_cast<int>(text.size())) {
        throw UsageError("--grid wants NxM, e.g. 33x33");
    }
    if (g.nu < 3 || g.nv < 3) throw UsageError("--grid sizes must be at least 3");
    return g;
}

Domain parse_domain(const std::string& text) {
    Domain d{};
    char c1 = 0, c2 = 0, c3 = 0;
    int consumed = 0;
    if (std::sscanf(text.c_str(), "%lf%c%lf%c%lf%c%lf%n", &d.u_min, &c1, &d.u_max, &c2,
                    &d.v_min, &c3, &d.v_max, &consumed) != 7 ||
        c1 != ',' || c2 != ',' || c3 != ',' || consumed != static_cast<int>(text.size())) {
        throw UsageError("--domain wants u_min,u_max,v_min,v_max");
    }
    if (!(d.width() > 0) || !(d.height() > 0)) throw UsageError("--domain must have positive area");
    return d;
}

std::pair<double, double> parse_pair(const std::string& text, const char* flag) {
    double a = 0, b = 0;
    char c = 0;
    int consumed = 0;
    if (std::sscanf(text.c_str(), "%lf%c%lf%n", &a, &c, &b, &consumed) != 3 || c != ',' ||
        consumed != static_cast<int>(text.size())) {
        throw UsageError(std::string(flag) + " wants two comma-separated numbers");
    }
    return {a, b};
}

ExprPtr parse_expr_or_usage(const std::string& text, const char* what) {
    ParseResult r = parse(text);
    if (!r.ok()) {
        throw UsageError(std::string(what) + ": " + r.error->message());
    }
    return r.ast;
}

bool is_catalog_name(const std::string& name) {
    for (const auto& n : catalog_names()) {
        if (n == name) return true;
    }
    return false;
}

json residual_json(const ResidualField& r) {
    return json{{"linf", r.linf}, {"l2", r.l2}, {"argmax", {r.argmax[0], r.argmax[1]}}};
}

json verdict_json(const Verdict& v) {
    return json{{"outcome", to_string(v.outcome)},
                {"violated", v.violated},
                {"margin", v.margin},
                {"witness", {v.witness[0], v.witness[1]}},
                {"best_c", v.best_c},
                {"excluded_gradient_points", v.excluded_gradient_points}};
}

json domain_json(const Domain& d) { return json::array({d.u_min, d.u_max, d.v_min, d.v_max}); }

json input_json(const std::string& name, const GridSpec& grid, const Domain& domain) {
    return json{{"name", name}, {"grid", {{"nu", grid.nu}, {"nv", grid.nv}, {"domain", domain_json(domain)}}}};
}

void emit_report(json& report, const std::optional<std::string>& json_path,
                 std::chrono::steady_clock::time_point start) {
    const auto elapsed = std::chrono::steady_clock::now() - start;
    report["timing_ms"] =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(elapsed).count();
    const std::string text = report.dump(2);
    std::cout << text << "\n";
    if (json_path) {
        std::ofstream out(*json_path);
        if (!out) throw UsageError("cannot write JSON report to '" + *json_path + "'");
        out << text << "\n";
    }
}

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
    std::string surface;
    std::string grid = "33x33";
    std::optional<std::string> domain;
    std::optional<std::string> json_path;
};

int run_analyze(const AnalyzeArgs& args) {
    const auto start = std::chrono::steady_clock::now();
    SurfaceDef def;
    if (is_catalog_name(args.surface)) {
        def = catalog(args.surface);
    } else if (std::filesystem::exists(args.surface)) {
        def = load_surface_file(args.surface);
    } else {
        throw UsageError("--surface '" + args.surface + "' is neither a catalog name nor a file");
    }
    const GridSpec grid = parse_grid(args.grid);
    if (args.domain) def.domain = parse_domain(*args.domain);

    const GridSample s = sample(def, grid);

    json report;
    report["version"] = kVersion;
    report["command"] = "analyze";
    report["input"] = input_json(def.name, grid, def.domain);

    json residuals = json::object();
    json curvature = json::object();

    if (s.is_immersion()) {
        const ImmersionFields fields = immersion_fields(s, def.name);
        std::vector<double> iso(s.size()), defect(s.size()), cross(s.size());
        double k_min = std::numeric_limits<double>::infinity();
        double k_max = -std::numeric_limits<double>::infinity();
        bool cross_everywhere = true;
        for (int k = 0; k < s.size(); ++k) {
            const FundamentalForms f = fundamental_forms(s.position[k]);
            iso[k] = isothermal_residual(f);
            defect[k] = umbilic_defect(f);
            const GaussTwoWays g = gaussian_curvature_two_ways(f);
            k_min = std::min(k_min, g.extrinsic);
            k_max = std::max(k_max, g.extrinsic);
            if (g.conformal) {
                cross[k] = std::abs(g.extrinsic - *g.conformal);
            } else {
                cross[k] = 0.0;
                cross_everywhere = false;
            }
        }
        residuals["isothermal"] = residual_json(
            ResidualField::build("isothermal", fields.metric, std::move(iso)));
        residuals["umbilic_defect"] = residual_json(
            ResidualField::build("umbilic_defect", fields.metric, std::move(defect)));
        const auto [r5a, r5b] = codazzi_residuals(fields.metric, fields.second_form);
        residuals["codazzi_u"] = residual_json(r5a);
        residuals["codazzi_v"] = residual_json(r5b);
        residuals["harmonicity"] = residual_json(harmonicity_residual(fields.metric));
        curvature["k_min"] = k_min;
        curvature["k_max"] = k_max;
        if (cross_everywhere) {
            const ResidualField cf =
                ResidualField::build("gauss_cross_check", fields.metric, std::move(cross));
            residuals["gauss_cross_check"] = residual_json(cf);
            curvature["cross_check_max_diff"] = cf.linf;
        }
    } else {
        const MetricField metric = MetricField::from_sample(s, def.name);
        residuals["harmonicity"] = residual_json(harmonicity_residual(metric));
        const auto [k_field, summary] = remark1_curvature_sign(metric);
        curvature["k_min"] = summary.min_k;
        curvature["k_max"] = summary.max_k;
    }

    report["residuals"] = std::move(residuals);
    report["curvature"] = std::move(curvature);
    emit_report(report, args.json_path, start);
    return kExitOk;
}

// ---------------------------------------------------------------- certify

struct CertifyArgs {
    std::string metric;
    std::string grid = "33x33";
    std::optional<std::string> domain;
    double tol = kSyntheticTol;
    std::optional<std::string> json_path;
};

int run_certify(const CertifyArgs& args) {
    const auto start = std::chrono::steady_clock::now();
    ExprPtr conformal;
    Domain domain = kDefaultDomain;
    std::string name = args.metric;
    if (is_catalog_name(args.metric)) {
        const SurfaceDef def = catalog_metric(args.metric);
        conformal = def.metric().conformal_factor;
        domain = def.domain;
    } else {
        conformal = parse_expr_or_usage(args.metric, "--metric");
    }
    if (args.domain) domain = parse_domain(*args.domain);
    const GridSpec grid = parse_grid(args.grid);

    const MetricField field = MetricField::from_expr(*conformal, domain, grid, name);
    const Verdict verdict = certify_no_go(field, args.tol);

    json report;
    report["version"] = kVersion;
    report["command"] = "certify";
    report["input"] = input_json(name, grid, domain);
    report["tol"] = args.tol;

    json residuals = json::object();
    for (const auto& r : certify_residual_table(field, verdict.best_c)) {
        residuals[r.name] = residual_json(r);
    }
    report["residuals"] = std::move(residuals);

    const auto [k_field, summary] = remark1_curvature_sign(field);
    report["curvature"] = json{{"k_min", summary.min_k}, {"k_max", summary.max_k}};
    report["verdict"] = verdict_json(verdict);
    emit_report(report, args.json_path, start);
    return kExitOk;
}

// ---------------------------------------------------------------- geodesic

struct GeodesicArgs {
    std::string metric;
    std::string start;
    std::string vel;
    double h = 1e-3;
    int steps = 1000;
    std::optional<std::string> first_integral;
    std::optional<std::string> csv_path;
    std::optional<std::string> domain;
    std::optional<std::string> json_path;
};

int run_geodesic(const GeodesicArgs& args) {
    const auto start_time = std::chrono::steady_clock::now();
    ExprPtr conformal;
    Domain domain = kDefaultDomain;
    if (is_catalog_name(args.metric)) {
        const SurfaceDef def = catalog_metric(args.metric);
        conformal = def.metric().conformal_factor;
        domain = def.domain;
    } else {
        conformal = parse_expr_or_usage(args.metric, "--metric");
    }
    if (args.domain) domain = parse_domain(*args.domain);
    if (!(args.h > 0)) throw UsageError("--h must be positive");
    if (args.steps < 1) throw UsageError("--steps must be at least 1");

    const auto [u0, v0] = parse_pair(args.start, "--start");
    const auto [du0, dv0] = parse_pair(args.vel, "--vel");
    const GeodesicState s0{u0, v0, du0, dv0};

    ExprPtr f_expr, g_expr;
    if (args.first_integral) {
        const auto comma = args.first_integral->find(',');
        if (comma == std::string::npos) {
            throw UsageError("--first-integral wants f_expr,g_expr");
        }
        f_expr = parse_expr_or_usage(args.first_integral->substr(0, comma), "--first-integral f");
        g_expr = parse_expr_or_usage(args.first_integral->substr(comma + 1), "--first-integral g");
    }

    const Trajectory traj = integrate(*conformal, domain, s0, args.h, args.steps, args.metric);

    const double e0 = energy(eval_value(*conformal, s0.u, s0.v), s0);
    double energy_drift = 0;
    double k0 = 0, integral_drift = 0;
    if (f_expr) k0 = liouville_first_integral(*f_expr, *g_expr, s0);

    std::ofstream csv;
    if (args.csv_path) {
        csv.open(*args.csv_path);
        if (!csv) throw UsageError("cannot write CSV to '" + *args.csv_path + "'");
        csv << "t,u,v,du,dv,energy";
        if (f_expr) csv << ",first_integral";
        csv << "\n";
    }

    char line[256];
    for (const auto& p : traj.points) {
        const double e = energy(eval_value(*conformal, p.state.u, p.state.v), p.state);
        energy_drift = std::max(energy_drift, std::abs(e - e0));
        double k_val = 0;
        if (f_expr) {
            k_val = liouville_first_integral(*f_expr, *g_expr, p.state);
            integral_drift = std::max(integral_drift, std::abs(k_val - k0));
        }
        if (csv.is_open()) {
            std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", p.t,
                          p.state.u, p.state.v, p.state.du, p.state.dv, e);
            csv << line;
            if (f_expr) {
                std::snprintf(line, sizeof(line), ",%.17g", k_val);
                csv << line;
            }
            csv << "\n";
        }
    }

    json report;
    report["version"] = kVersion;
    report["command"] = "geodesic";
    GridSpec unused_grid{3, 3};
    report["input"] = input_json(args.metric, unused_grid, domain);
    report["input"].erase("grid");
    report["input"]["domain"] = domain_json(domain);
    report["residuals"] = json::object();

    json geo;
    geo["h"] = args.h;
    geo["steps_requested"] = args.steps;
    geo["steps_completed"] = static_cast<int>(traj.points.size()) - 1;
    geo["truncated"] = traj.exited_domain;
    geo["initial_energy"] = e0;
    geo["energy_drift"] = energy_drift;
    if (f_expr) {
        geo["initial_first_integral"] = k0;
        geo["first_integral_drift"] = integral_drift;
    }
    if (args.csv_path) geo["csv"] = *args.csv_path;
    report["geodesic"] = std::move(geo);
    emit_report(report, args.json_path, start_time);
    return kExitOk;
}

// ---------------------------------------------------------------- search

struct SearchArgs {
    int degree = 2;
    std::string grid = "33x33";
    std::optional<std::string> domain;
    int restarts = 20;
    std::uint64_t seed = 42;
    double eps_pos = 0.5;
    double eps_c = 0.1;
    std::optional<std::string> json_path;
};

int run_search(const SearchArgs& args) {
    const auto start = std::chrono::steady_clock::now();
    if (args.degree < 0 || args.degree > kMaxHarmonicDegree) {
        throw UsageError("--degree must be in [0, " + std::to_string(kMaxHarmonicDegree) + "]");
    }
    if (args.restarts < 1) throw UsageError("--restarts must be at least 1");

    SearchConfig config;
    config.degree = args.degree;
    config.grid = parse_grid(args.grid);
    if (args.domain) config.domain = parse_domain(*args.domain);
    config.restarts = args.restarts;
    config.seed = args.seed;
    config.eps_pos = args.eps_pos;
    config.eps_c = args.eps_c;

    const SearchResult result = falsify(config);

    HarmonicAnsatz best;
    best.degree = config.degree;
    best.coeffs = result.best_coeffs;
    const MetricField best_field =
        ansatz_metric_field(best, config.domain, config.grid, "best_candidate");
    const Verdict verdict = certify_no_go(best_field);

    json report;
    report["version"] = kVersion;
    report["command"] = "search";
    report["input"] = input_json("harmonic_ansatz_degree_" + std::to_string(config.degree),
                                 config.grid, config.domain);
    report["residuals"] = json::object();

    json sj;
    sj["config"] = json{{"degree", config.degree},
                        {"restarts", config.restarts},
                        {"seed", config.seed},
                        {"eps_pos", config.eps_pos},
                        {"eps_c", config.eps_c},
                        {"penalty_weight", config.penalty_weight},
                        {"max_iterations", config.max_iterations},
                        {"init_damping", config.init_damping}};
    sj["best"] = json{{"coeffs", result.best_coeffs},
                      {"c", result.best_c},
                      {"objective", result.best_objective},
                      {"restart", result.best_restart}};
    sj["total_iterations"] = result.total_iterations;
    json rj = json::array();
    for (const auto& t : result.restarts) {
        rj.push_back(json{{"restart", t.restart_index},
                          {"initial_cost", t.initial_cost},
                          {"final_cost", t.final_cost},
                          {"final_objective", t.final_objective},
                          {"iterations", t.iterations},
                          {"converged", t.converged},
                          {"accepted_costs", t.accepted_costs}});
    }
    sj["restarts"] = std::move(rj);
    sj["verdict"] = verdict_json(verdict);
    report["search"] = std::move(sj);
    emit_report(report, args.json_path, start);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical certifiers for totally umbilical isothermal surfaces "
                 "with harmonic conformal factor"};
    app.set_version_flag("--version", kVersion);
    app.set_help_flag("--help", "print help and exit");  // frees -h for geodesic --h
    app.require_subcommand(1);

    AnalyzeArgs analyze_args;
    CLI::App* analyze = app.add_subcommand(
        "analyze", "sample a surface and report pointwise invariant residuals");
    analyze->add_option("--surface", analyze_args.surface, "catalog name or definition file")
        ->required();
    analyze->add_option("--grid", analyze_args.grid, "grid size NxM (default 33x33)");
    analyze->add_option("--domain", analyze_args.domain, "u_min,u_max,v_min,v_max");
    analyze->add_option("--json", analyze_args.json_path, "also write the report here");

    CertifyArgs certify_args;
    CLI::App* certify = app.add_subcommand(
        "certify", "run the no-go decision procedure on a conformal factor");
    certify->add_option("--metric", certify_args.metric, "expression in u,v or catalog name")
        ->required();
    certify->add_option("--grid", certify_args.grid, "grid size NxM (default 33x33)");
    certify->add_option("--domain", certify_args.domain, "u_min,u_max,v_min,v_max");
    certify->add_option("--tol", certify_args.tol, "residual tolerance (default 1e-9)");
    certify->add_option("--json", certify_args.json_path, "also write the report here");

    GeodesicArgs geodesic_args;
    CLI::App* geodesic = app.add_subcommand(
        "geodesic", "integrate a geodesic of a conformal metric with conservation checks");
    geodesic->set_help_flag("--help", "print help and exit");
    geodesic->add_option("--metric", geodesic_args.metric, "conformal factor expression")
        ->required();
    geodesic->add_option("--start", geodesic_args.start, "initial position u,v")->required();
    geodesic->add_option("--vel", geodesic_args.vel, "initial velocity du,dv")->required();
    geodesic->add_option("--h", geodesic_args.h, "step size (default 1e-3)");
    geodesic->add_option("--steps", geodesic_args.steps, "step count (default 1000)");
    geodesic->add_option("--first-integral", geodesic_args.first_integral,
                         "f_expr,g_expr for the separable first integral");
    geodesic->add_option("--csv", geodesic_args.csv_path, "trajectory CSV path");
    geodesic->add_option("--domain", geodesic_args.domain, "u_min,u_max,v_min,v_max");
    geodesic->add_option("--json", geodesic_args.json_path, "also write the report here");

    SearchArgs search_args;
    CLI::App* search = app.add_subcommand(
        "search", "falsification search over positive harmonic polynomial factors");
    search->add_option("--degree", search_args.degree, "ansatz degree (0..8)")->required();
    search->add_option("--grid", search_args.grid, "grid size NxM (default 33x33)");
    search->add_option("--domain", search_args.domain, "u_min,u_max,v_min,v_max");
    search->add_option("--restarts", search_args.restarts, "restart count (default 20)");
    search->add_option("--seed", search_args.seed, "RNG seed (default 42)");
    search->add_option("--eps-pos", search_args.eps_pos, "positivity floor (default 0.5)");
    search->add_option("--eps-c", search_args.eps_c, "floor on |c| (default 0.1)");
    search->add_option("--json", search_args.json_path, "also write the report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*analyze) return run_analyze(analyze_args);
        if (*certify) return run_certify(certify_args);
        if (*geodesic) return run_geodesic(geodesic_args);
        if (*search) return run_search(search_args);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "evaluation error: " << e.what() << "\n";
        return kExitEvaluation;
    }
    return kExitUsage;
}
