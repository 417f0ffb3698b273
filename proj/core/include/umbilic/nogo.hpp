#ifndef UMBILIC_NOGO_HPP
#define UMBILIC_NOGO_HPP

#include <array>
#include <string>
#include <vector>

#include "umbilic/expr.hpp"
#include "umbilic/jet.hpp"
#include "umbilic/surfaces.hpp"

namespace umbilic {

/// Conformal factor sampled as jets over a grid. The certifier requires
/// analytic (order-3) jets; immersion-derived fields carry jets valid through
/// order two, which is all the residual formulas consume.
struct MetricField {
    std::string name;
    Domain domain = kDefaultDomain;
    GridSpec grid;
    std::vector<double> u, v;
    std::vector<Jet3> E;

    int size() const { return static_cast<int>(E.size()); }
    double min_value() const;
    std::array<double, 2> point(int k) const { return {u[k], v[k]}; }

    /// Samples an expression. Enforces E >= kPositivityMargin (DomainError).
    static MetricField from_expr(const Expr& conformal, const Domain& domain,
                                 const GridSpec& grid, std::string name);
    /// Wraps a metric-only GridSample.
    static MetricField from_sample(const GridSample& s, std::string name);
    /// No positivity check; the certifier reports violations instead.
    static MetricField from_raw(std::vector<Jet3> jets, const Domain& domain,
                                const GridSpec& grid, std::string name);
};

/// Second-fundamental-form coefficients as jets (order >= 1), grid-aligned
/// with a MetricField.
struct SecondFormField {
    std::vector<Jet3> l11, l12, l22;

    int size() const { return static_cast<int>(l11.size()); }

    /// Synthesizes the umbilical family l11 = l22 = e, l12 = 0.
    static SecondFormField umbilical(const std::vector<Jet3>& e);
};

/// Both fields of an immersion sample: E = g11 (order-2 jets) and l_ij
/// (order-1 jets), all computed in jet arithmetic so Codazzi residuals can
/// differentiate them.
struct ImmersionFields {
    MetricField metric;
    SecondFormField second_form;
};
ImmersionFields immersion_fields(const GridSample& sample, const std::string& name);

/// Named residual over a grid with its norms and worst point.
struct ResidualField {
    std::string name;
    GridSpec grid;
    std::vector<double> values;
    double linf = 0;                    // max |value|
    double l2 = 0;                      // root mean square
    std::array<double, 2> argmax{0, 0};  // grid point attaining linf

    static ResidualField build(std::string name, const MetricField& geometry,
                               std::vector<double> values);
};

/// Codazzi-Mainardi residuals of an isothermal immersion; hold with no
/// harmonicity assumption:
///   r5a = d(l22)/du - d(l12)/dv - (E_u/(2E)) (l11+l22)
///   r5b = d(l11)/dv - d(l12)/du - (E_v/(2E)) (l11+l22)
std::pair<ResidualField, ResidualField> codazzi_residuals(const MetricField& E,
                                                          const SecondFormField& L);

/// Reduced Gauss residual r5c = l11 l22 - l12^2 - |grad E|^2/(2E).
/// This encodes Gauss's equation only where lap E = 0; it is evaluated
/// verbatim regardless and interpreted jointly with harmonicity by the
/// certifier.
ResidualField gauss_residual_reduced(const MetricField& E, const SecondFormField& L);

/// Residuals of the umbilical reduction (l11 = l22 = e, l12 = 0):
///   r6a = e_u - (E_u/E) e
///   r6b = e_v - (E_v/E) e
///   r6c = e^2/E^2 - |grad E|^2/(2E^3)
struct ReducedUmbilicResiduals {
    ResidualField r6a, r6b, r6c;
};
ReducedUmbilicResiduals reduced_umbilic_residuals(const MetricField& E,
                                                  const std::vector<Jet3>& e);

/// Least-squares constant of proportionality l11 ~ c E over the grid,
/// with the pointwise fit residual l11 - c E.
struct ProportionalityFit {
    double c;
    ResidualField residual;
};
ProportionalityFit fit_c(const MetricField& E, const std::vector<Jet3>& l11);

/// r8 = 2 c^2 E^3 - |grad E|^2.
ResidualField r8_residual(const MetricField& E, double c);

/// The unique Hessian of E compatible with the differentiated r8 identity
/// plus harmonicity, at a point where grad E does not vanish:
///   Huu = 3 c^2 E^2 (E_u^2 - E_v^2)/|grad E|^2
///   Huv = 6 c^2 E^2 E_u E_v / |grad E|^2
///   Hvv = -Huu
/// Throws ContractError when |grad|^2 <= 1e-18.
struct ConstrainedHessian {
    double huu, huv, hvv;
};
ConstrainedHessian constrained_hessian(double E_value, std::array<double, 2> grad, double c);

/// Gradient-norm floor below which points are excluded from the constrained
/// Hessian and from the compatibility-bracket normalization.
inline constexpr double kGradientFloor = 1e-9;

/// Integrability residuals of the constrained Hessian, verbatim with their
/// printed prefactors:
///   r10 = E E_v (3 c^2 E^3 - |grad E|^2)
///   r11 = E E_u (3 c^2 E^3 - |grad E|^2)
struct CompatibilityResiduals {
    ResidualField r10, r11;
};
CompatibilityResiduals compatibility_residuals(const MetricField& E, double c);

/// lap E = E_uu + E_vv pointwise.
ResidualField harmonicity_residual(const MetricField& E);

/// Gaussian curvature of the conformal metric per point, with sign counts.
/// When E is harmonic no point may have K meaningfully below zero.
struct CurvatureSignSummary {
    int negative = 0, zero = 0, positive = 0;
    double min_k = 0, max_k = 0;
};
std::pair<ResidualField, CurvatureSignSummary> remark1_curvature_sign(const MetricField& E);

enum class VerdictOutcome { FlatConsistent, NoGo, HypothesisViolated };

struct Verdict {
    VerdictOutcome outcome;
    std::string violated;  // harmonicity | positivity | eq8 | compatibility | "" (flat)
    double margin = 0;
    std::array<double, 2> witness{0, 0};
    double best_c = 0;
    int excluded_gradient_points = 0;  // |grad E| <= kGradientFloor
};

std::string to_string(VerdictOutcome o);

/// Default residual tolerances: synthetic (analytic) fields vs fields
/// derived from immersion jets.
inline constexpr double kSyntheticTol = 1e-9;
inline constexpr double kImmersionTol = 1e-7;

/// The no-go decision procedure:
///   1. linf(lap E) > tol            -> hypothesis_violated(harmonicity)
///   2. min E < positivity margin    -> hypothesis_violated(positivity)
///   3. linf(|grad E|) <= tol        -> flat_consistent with best_c = 0
///   4. otherwise minimize over c the larger of linf(r8) and the normalized
///      compatibility bracket |3c^2 E^3 - |grad E|^2| / (1 + 3c^2 E^3 +
///      |grad E|^2) (gradient-floor points excluded); the minimax value is
///      the no-go margin. Golden-section on c^2, cross-checked by a
///      10^4-point scan.
Verdict certify_no_go(const MetricField& E, double tol = kSyntheticTol);

/// The certifier's residual table at a decided c: r8, r10, r11, harmonicity,
/// gradient norm. Used by reports.
std::vector<ResidualField> certify_residual_table(const MetricField& E, double c);

}  // namespace umbilic

#endif
