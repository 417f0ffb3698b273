#include "umbilic/nogo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "umbilic/errors.hpp"
#include "umbilic/forms.hpp"

namespace umbilic {

double MetricField::min_value() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& j : E) m = std::min(m, j.f);
    return m;
}

MetricField MetricField::from_expr(const Expr& conformal, const Domain& domain,
                                   const GridSpec& grid, std::string name) {
    SurfaceDef def;
    def.name = name;
    def.domain = domain;
    def.kind = SurfaceDef::MetricOnly{std::make_shared<Expr>(conformal)};
    return from_sample(sample(def, grid), std::move(name));
}

MetricField MetricField::from_sample(const GridSample& s, std::string name) {
    if (s.is_immersion()) {
        throw std::invalid_argument("MetricField::from_sample wants a metric-only sample");
    }
    MetricField m;
    m.name = std::move(name);
    m.domain = s.domain;
    m.grid = s.grid;
    m.u = s.u;
    m.v = s.v;
    m.E = s.conformal;
    return m;
}

MetricField MetricField::from_raw(std::vector<Jet3> jets, const Domain& domain,
                                  const GridSpec& grid, std::string name) {
    MetricField m;
    m.name = std::move(name);
    m.domain = domain;
    m.grid = grid;
    const int n = grid.nu * grid.nv;
    if (static_cast<int>(jets.size()) != n) {
        throw std::invalid_argument("jet count does not match grid");
    }
    m.u.resize(n);
    m.v.resize(n);
    const double du = domain.width() / (grid.nu - 1);
    const double dv = domain.height() / (grid.nv - 1);
    for (int j = 0; j < grid.nv; ++j) {
        for (int i = 0; i < grid.nu; ++i) {
            m.u[j * grid.nu + i] = domain.u_min + i * du;
            m.v[j * grid.nu + i] = domain.v_min + j * dv;
        }
    }
    m.E = std::move(jets);
    return m;
}

SecondFormField SecondFormField::umbilical(const std::vector<Jet3>& e) {
    SecondFormField f;
    f.l11 = e;
    f.l22 = e;
    f.l12.assign(e.size(), Jet3{});
    return f;
}

ImmersionFields immersion_fields(const GridSample& sample, const std::string& name) {
    if (!sample.is_immersion()) {
        throw std::invalid_argument("immersion_fields wants an immersion sample");
    }
    const int n = sample.size();
    MetricField metric;
    metric.name = name;
    metric.domain = sample.domain;
    metric.grid = sample.grid;
    metric.u = sample.u;
    metric.v = sample.v;
    metric.E.resize(n);
    SecondFormField L;
    L.l11.resize(n);
    L.l12.resize(n);
    L.l22.resize(n);

    for (int k = 0; k < n; ++k) {
        const JetVec3& p = sample.position[k];
        // component jets of the derivative vectors (order two for first
        // derivatives, order one for second)
        const Jet3 xu = d_du(p.x), yu = d_du(p.y), zu = d_du(p.z);
        const Jet3 xv = d_dv(p.x), yv = d_dv(p.y), zv = d_dv(p.z);

        const Jet3 cx = yu * zv - zu * yv;
        const Jet3 cy = zu * xv - xu * zv;
        const Jet3 cz = xu * yv - yu * xv;
        const Jet3 norm_sq = cx * cx + cy * cy + cz * cz;
        if (norm_sq.f < 1e-24) {
            throw RegularityError("degenerate immersion point while assembling fields",
                                  sample.u[k], sample.v[k]);
        }
        const Jet3 inv_norm = 1.0 / sqrt(norm_sq);
        const Jet3 nx = cx * inv_norm, ny = cy * inv_norm, nz = cz * inv_norm;

        metric.E[k] = xu * xu + yu * yu + zu * zu;

        const Jet3 xuu = d_du(xu), yuu = d_du(yu), zuu = d_du(zu);
        const Jet3 xuv = d_dv(xu), yuv = d_dv(yu), zuv = d_dv(zu);
        const Jet3 xvv = d_dv(xv), yvv = d_dv(yv), zvv = d_dv(zv);
        L.l11[k] = xuu * nx + yuu * ny + zuu * nz;
        L.l12[k] = xuv * nx + yuv * ny + zuv * nz;
        L.l22[k] = xvv * nx + yvv * ny + zvv * nz;
    }
    return {std::move(metric), std::move(L)};
}

ResidualField ResidualField::build(std::string name, const MetricField& geometry,
                                   std::vector<double> values) {
    ResidualField r;
    r.name = std::move(name);
    r.grid = geometry.grid;
    r.values = std::move(values);
    int arg = 0;
    double sum_sq = 0;
    for (int k = 0; k < static_cast<int>(r.values.size()); ++k) {
        const double a = std::abs(r.values[k]);
        if (a > r.linf) {
            r.linf = a;
            arg = k;
        }
        sum_sq += r.values[k] * r.values[k];
    }
    r.l2 = r.values.empty() ? 0.0 : std::sqrt(sum_sq / r.values.size());
    if (!r.values.empty()) r.argmax = geometry.point(arg);
    return r;
}

namespace {

void require_aligned(const MetricField& E, int other_size, const char* op) {
    if (E.size() != other_size) {
        std::ostringstream os;
        os << op << ": grids are misaligned (" << E.size() << " vs " << other_size << " points)";
        throw ContractError(os.str());
    }
}

}  // namespace

std::pair<ResidualField, ResidualField> codazzi_residuals(const MetricField& E,
                                                          const SecondFormField& L) {
    require_aligned(E, L.size(), "codazzi_residuals");
    const int n = E.size();
    std::vector<double> a(n), b(n);
    for (int k = 0; k < n; ++k) {
        const Jet3& e = E.E[k];
        const double sum = L.l11[k].f + L.l22[k].f;
        a[k] = L.l22[k].fu - L.l12[k].fv - (e.fu / (2.0 * e.f)) * sum;
        b[k] = L.l11[k].fv - L.l12[k].fu - (e.fv / (2.0 * e.f)) * sum;
    }
    return {ResidualField::build("codazzi_u", E, std::move(a)),
            ResidualField::build("codazzi_v", E, std::move(b))};
}

ResidualField gauss_residual_reduced(const MetricField& E, const SecondFormField& L) {
    require_aligned(E, L.size(), "gauss_residual_reduced");
    const int n = E.size();
    std::vector<double> r(n);
    for (int k = 0; k < n; ++k) {
        const Jet3& e = E.E[k];
        r[k] = L.l11[k].f * L.l22[k].f - L.l12[k].f * L.l12[k].f -
               e.grad_norm_sq() / (2.0 * e.f);
    }
    return ResidualField::build("gauss_reduced", E, std::move(r));
}

ReducedUmbilicResiduals reduced_umbilic_residuals(const MetricField& E,
                                                  const std::vector<Jet3>& e) {
    require_aligned(E, static_cast<int>(e.size()), "reduced_umbilic_residuals");
    const int n = E.size();
    std::vector<double> a(n), b(n), c(n);
    for (int k = 0; k < n; ++k) {
        const Jet3& m = E.E[k];
        a[k] = e[k].fu - (m.fu / m.f) * e[k].f;
        b[k] = e[k].fv - (m.fv / m.f) * e[k].f;
        const double e2 = e[k].f * e[k].f;
        const double E2 = m.f * m.f;
        c[k] = e2 / E2 - m.grad_norm_sq() / (2.0 * E2 * m.f);
    }
    ReducedUmbilicResiduals out{ResidualField::build("umbilic_u", E, std::move(a)),
                                ResidualField::build("umbilic_v", E, std::move(b)),
                                ResidualField::build("umbilic_gauss", E, std::move(c))};
    return out;
}

ProportionalityFit fit_c(const MetricField& E, const std::vector<Jet3>& l11) {
    require_aligned(E, static_cast<int>(l11.size()), "fit_c");
    const int n = E.size();
    double num = 0, den = 0;
    for (int k = 0; k < n; ++k) {
        num += l11[k].f * E.E[k].f;
        den += E.E[k].f * E.E[k].f;
    }
    const double c = den > 0.0 ? num / den : 0.0;
    std::vector<double> r(n);
    for (int k = 0; k < n; ++k) r[k] = l11[k].f - c * E.E[k].f;
    return {c, ResidualField::build("fit_residual", E, std::move(r))};
}

ResidualField r8_residual(const MetricField& E, double c) {
    const int n = E.size();
    std::vector<double> r(n);
    const double c2 = c * c;
    for (int k = 0; k < n; ++k) {
        const Jet3& e = E.E[k];
        r[k] = 2.0 * c2 * e.f * e.f * e.f - e.grad_norm_sq();
    }
    return ResidualField::build("r8", E, std::move(r));
}

ConstrainedHessian constrained_hessian(double E_value, std::array<double, 2> grad, double c) {
    const double gu = grad[0], gv = grad[1];
    const double g2 = gu * gu + gv * gv;
    if (g2 <= 1e-18) {
        std::ostringstream os;
        os << "constrained_hessian: vanishing gradient (" << gu << ", " << gv
           << ") at E = " << E_value;
        throw ContractError(os.str());
    }
    const double s = 3.0 * c * c * E_value * E_value / g2;
    ConstrainedHessian h{};
    h.huu = s * (gu * gu - gv * gv);
    h.huv = 2.0 * s * gu * gv;
    h.hvv = -h.huu;
    return h;
}

CompatibilityResiduals compatibility_residuals(const MetricField& E, double c) {
    const int n = E.size();
    std::vector<double> r10(n), r11(n);
    const double c2 = c * c;
    for (int k = 0; k < n; ++k) {
        const Jet3& e = E.E[k];
        const double bracket = 3.0 * c2 * e.f * e.f * e.f - e.grad_norm_sq();
        r10[k] = e.f * e.fv * bracket;
        r11[k] = e.f * e.fu * bracket;
    }
    return {ResidualField::build("r10", E, std::move(r10)),
            ResidualField::build("r11", E, std::move(r11))};
}

ResidualField harmonicity_residual(const MetricField& E) {
    const int n = E.size();
    std::vector<double> r(n);
    for (int k = 0; k < n; ++k) r[k] = E.E[k].laplacian();
    return ResidualField::build("harmonicity", E, std::move(r));
}

std::pair<ResidualField, CurvatureSignSummary> remark1_curvature_sign(const MetricField& E) {
    const int n = E.size();
    std::vector<double> k_values(n);
    CurvatureSignSummary s;
    s.min_k = std::numeric_limits<double>::infinity();
    s.max_k = -std::numeric_limits<double>::infinity();
    constexpr double kZeroBand = 1e-12;
    for (int k = 0; k < n; ++k) {
        if (!(E.E[k].f > 0.0)) {
            throw DomainError("remark1_curvature_sign needs E > 0", E.u[k], E.v[k]);
        }
        const double kv = conformal_gauss_curvature(E.E[k]);
        k_values[k] = kv;
        s.min_k = std::min(s.min_k, kv);
        s.max_k = std::max(s.max_k, kv);
        if (kv < -kZeroBand) ++s.negative;
        else if (kv > kZeroBand) ++s.positive;
        else ++s.zero;
    }
    return {ResidualField::build("conformal_curvature", E, std::move(k_values)), s};
}

std::string to_string(VerdictOutcome o) {
    switch (o) {
        case VerdictOutcome::FlatConsistent: return "flat_consistent";
        case VerdictOutcome::NoGo: return "no_go";
        case VerdictOutcome::HypothesisViolated: return "hypothesis_violated";
    }
    return "?";
}

namespace {

struct MinimaxTerms {
    double r8_linf = 0;
    std::array<double, 2> r8_witness{0, 0};
    double bracket_linf = 0;
    std::array<double, 2> bracket_witness{0, 0};

    double value() const { return std::max(r8_linf, bracket_linf); }
};

// Evaluates both minimax terms at t = c^2. The compatibility bracket is
// normalized to |3tE^3 - W| / (1 + 3tE^3 + W) and skips gradient-floor
// points, which the argument handles through r8 alone.
MinimaxTerms minimax_terms(const MetricField& E, double t) {
    MinimaxTerms m;
    for (int k = 0; k < E.size(); ++k) {
        const Jet3& e = E.E[k];
        const double E3 = e.f * e.f * e.f;
        const double W = e.grad_norm_sq();
        const double r8 = std::abs(2.0 * t * E3 - W);
        if (r8 > m.r8_linf) {
            m.r8_linf = r8;
            m.r8_witness = E.point(k);
        }
        if (W > kGradientFloor * kGradientFloor) {
            const double b = 3.0 * t * E3 - W;
            const double nb = std::abs(b) / (1.0 + 3.0 * t * E3 + W);
            if (nb > m.bracket_linf) {
                m.bracket_linf = nb;
                m.bracket_witness = E.point(k);
            }
        }
    }
    return m;
}

}  // namespace

Verdict certify_no_go(const MetricField& E, double tol) {
    Verdict v{};
    for (const auto& j : E.E) {
        if (j.f > 0.0 && j.grad_norm_sq() <= kGradientFloor * kGradientFloor) {
            ++v.excluded_gradient_points;
        }
    }

    const ResidualField lap = harmonicity_residual(E);
    if (lap.linf > tol) {
        v.outcome = VerdictOutcome::HypothesisViolated;
        v.violated = "harmonicity";
        v.margin = lap.linf;
        v.witness = lap.argmax;
        return v;
    }

    const double min_E = E.min_value();
    if (min_E < kPositivityMargin) {
        v.outcome = VerdictOutcome::HypothesisViolated;
        v.violated = "positivity";
        v.margin = kPositivityMargin - min_E;
        int arg = 0;
        for (int k = 0; k < E.size(); ++k) {
            if (E.E[k].f == min_E) {
                arg = k;
                break;
            }
        }
        v.witness = E.point(arg);
        return v;
    }

    double grad_linf = 0;
    std::array<double, 2> grad_witness{0, 0};
    double max_grad_sq = 0, min_E3 = std::numeric_limits<double>::infinity();
    for (int k = 0; k < E.size(); ++k) {
        const Jet3& e = E.E[k];
        const double g = std::sqrt(e.grad_norm_sq());
        if (g > grad_linf) {
            grad_linf = g;
            grad_witness = E.point(k);
        }
        max_grad_sq = std::max(max_grad_sq, e.grad_norm_sq());
        min_E3 = std::min(min_E3, e.f * e.f * e.f);
    }
    if (grad_linf <= tol) {
        v.outcome = VerdictOutcome::FlatConsistent;
        v.violated = "";
        v.best_c = 0.0;
        v.margin = minimax_terms(E, 0.0).value();
        v.witness = grad_witness;
        return v;
    }

    // minimax over t = c^2: coarse scan cross-checks the golden-section result
    // and supplies its bracket.
    const double t_max = std::sqrt(max_grad_sq / (2.0 * min_E3)) + 1.0;
    constexpr int kScanPoints = 10000;
    double best_t = 0, best_val = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= kScanPoints; ++i) {
        const double t = t_max * i / kScanPoints;
        const double val = minimax_terms(E, t).value();
        if (val < best_val) {
            best_val = val;
            best_t = t;
        }
    }
    double lo = std::max(0.0, best_t - t_max / kScanPoints);
    double hi = std::min(t_max, best_t + t_max / kScanPoints);
    constexpr double kGolden = 0.6180339887498949;
    double x1 = hi - kGolden * (hi - lo);
    double x2 = lo + kGolden * (hi - lo);
    double f1 = minimax_terms(E, x1).value();
    double f2 = minimax_terms(E, x2).value();
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kGolden * (hi - lo);
            f1 = minimax_terms(E, x1).value();
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kGolden * (hi - lo);
            f2 = minimax_terms(E, x2).value();
        }
    }
    const double t_star = 0.5 * (lo + hi);
    const MinimaxTerms final_terms = minimax_terms(E, t_star);

    v.outcome = VerdictOutcome::NoGo;
    v.best_c = std::sqrt(t_star);
    v.margin = final_terms.value();
    if (final_terms.r8_linf >= final_terms.bracket_linf) {
        v.violated = "eq8";
        v.witness = final_terms.r8_witness;
    } else {
        v.violated = "compatibility";
        v.witness = final_terms.bracket_witness;
    }
    return v;
}

std::vector<ResidualField> certify_residual_table(const MetricField& E, double c) {
    std::vector<ResidualField> table;
    table.push_back(r8_residual(E, c));
    auto compat = compatibility_residuals(E, c);
    table.push_back(std::move(compat.r10));
    table.push_back(std::move(compat.r11));
    table.push_back(harmonicity_residual(E));
    std::vector<double> grad(E.size());
    for (int k = 0; k < E.size(); ++k) grad[k] = std::sqrt(E.E[k].grad_norm_sq());
    table.push_back(ResidualField::build("grad_norm", E, std::move(grad)));
    return table;
}

}  // namespace umbilic
