#include "umbilic/search.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <random>

namespace umbilic {

std::vector<ExprPtr> harmonic_basis(int degree) {
    if (degree < 0 || degree > kMaxHarmonicDegree) {
        throw std::invalid_argument("harmonic basis degree must be in [0, " +
                                    std::to_string(kMaxHarmonicDegree) + "]");
    }
    std::vector<ExprPtr> basis;
    basis.push_back(make_number(1.0));
    if (degree == 0) return basis;

    // Re z^k = u Re z^(k-1) - v Im z^(k-1); Im z^k = u Im z^(k-1) + v Re z^(k-1)
    ExprPtr re = make_var('u');
    ExprPtr im = make_var('v');
    basis.push_back(re);
    basis.push_back(im);
    for (int k = 2; k <= degree; ++k) {
        const ExprPtr u = make_var('u');
        const ExprPtr v = make_var('v');
        ExprPtr re_next =
            make_binary(BinaryOp::Sub, make_binary(BinaryOp::Mul, u, re),
                        make_binary(BinaryOp::Mul, v, im));
        ExprPtr im_next =
            make_binary(BinaryOp::Add, make_binary(BinaryOp::Mul, u, im),
                        make_binary(BinaryOp::Mul, v, re));
        basis.push_back(re_next);
        basis.push_back(im_next);
        re = std::move(re_next);
        im = std::move(im_next);
    }
    return basis;
}

namespace {

// Basis jets tabulated once per grid: E and its gradient are linear in the
// coefficients, so residual Jacobians are exact.
struct BasisTable {
    int npts = 0;
    int nbasis = 0;
    std::vector<double> us, vs;
    Eigen::MatrixXd value;   // npts x nbasis
    Eigen::MatrixXd grad_u;  // npts x nbasis
    Eigen::MatrixXd grad_v;  // npts x nbasis

    BasisTable(int degree, const GridSpec& grid, const Domain& domain) {
        const auto basis = harmonic_basis(degree);
        nbasis = static_cast<int>(basis.size());
        npts = grid.nu * grid.nv;
        us.resize(npts);
        vs.resize(npts);
        value.resize(npts, nbasis);
        grad_u.resize(npts, nbasis);
        grad_v.resize(npts, nbasis);
        const double du = domain.width() / (grid.nu - 1);
        const double dv = domain.height() / (grid.nv - 1);
        for (int j = 0; j < grid.nv; ++j) {
            for (int i = 0; i < grid.nu; ++i) {
                const int k = j * grid.nu + i;
                us[k] = domain.u_min + i * du;
                vs[k] = domain.v_min + j * dv;
                for (int b = 0; b < nbasis; ++b) {
                    const Jet3 jet = eval_jet(*basis[b], us[k], vs[k]);
                    value(k, b) = jet.f;
                    grad_u(k, b) = jet.fu;
                    grad_v(k, b) = jet.fv;
                }
            }
        }
    }
};

struct PointData {
    double E, Eu, Ev;
};

PointData point_data(const BasisTable& table, const Eigen::VectorXd& coeffs, int k) {
    PointData p{};
    for (int b = 0; b < table.nbasis; ++b) {
        p.E += coeffs[b] * table.value(k, b);
        p.Eu += coeffs[b] * table.grad_u(k, b);
        p.Ev += coeffs[b] * table.grad_v(k, b);
    }
    return p;
}

double objective_from_table(const BasisTable& table, const Eigen::VectorXd& coeffs, double c,
                            double eps_pos, double eps_c, double penalty_weight) {
    const double c2 = c * c;
    double floor_term = 0;
    double penalty = 0;
    for (int k = 0; k < table.npts; ++k) {
        const PointData p = point_data(table, coeffs, k);
        const double A = 2.0 * c2 * p.E * p.E * p.E;
        const double W = p.Eu * p.Eu + p.Ev * p.Ev;
        floor_term = std::max(floor_term, std::abs(A - W) / (1.0 + A + W));
        const double hp = std::max(0.0, eps_pos - p.E);
        penalty += penalty_weight * hp * hp;
    }
    const double hc = std::max(0.0, eps_c - std::abs(c));
    penalty += penalty_weight * hc * hc;
    return floor_term + penalty;
}

// residual vector: npts normalized r8 rows, npts positivity-hinge rows, one
// c-floor row. theta = [coeffs..., c].
void residuals_and_jacobian(const BasisTable& table, const Eigen::VectorXd& theta,
                            double eps_pos, double eps_c, double penalty_weight,
                            Eigen::VectorXd& r, Eigen::MatrixXd* J) {
    const int nb = table.nbasis;
    const double c = theta[nb];
    const double c2 = c * c;
    const double sw = std::sqrt(penalty_weight);
    const int m = 2 * table.npts + 1;
    r.resize(m);
    if (J) J->setZero(m, nb + 1);

    for (int k = 0; k < table.npts; ++k) {
        const PointData p = point_data(table, theta.head(nb), k);
        const double E3 = p.E * p.E * p.E;
        const double A = 2.0 * c2 * E3;
        const double W = p.Eu * p.Eu + p.Ev * p.Ev;
        const double denom = 1.0 + A + W;
        r[k] = (A - W) / denom;

        const double hp = std::max(0.0, eps_pos - p.E);
        r[table.npts + k] = sw * hp;

        if (J) {
            const double denom2 = denom * denom;
            for (int b = 0; b < nb; ++b) {
                const double dA = 6.0 * c2 * p.E * p.E * table.value(k, b);
                const double dW =
                    2.0 * (p.Eu * table.grad_u(k, b) + p.Ev * table.grad_v(k, b));
                (*J)(k, b) = (dA * (1.0 + 2.0 * W) - dW * (1.0 + 2.0 * A)) / denom2;
            }
            (*J)(k, nb) = 4.0 * c * E3 * (1.0 + 2.0 * W) / denom2;
            if (hp > 0.0) {
                for (int b = 0; b < nb; ++b) {
                    (*J)(table.npts + k, b) = -sw * table.value(k, b);
                }
            }
        }
    }

    const double hc = std::max(0.0, eps_c - std::abs(c));
    r[m - 1] = sw * hc;
    if (J && hc > 0.0) {
        (*J)(m - 1, nb) = c >= 0.0 ? -sw : sw;
    }
}

// Box-Muller normal sampler over mt19937_64; pinned here rather than using
// std::normal_distribution so identical seeds give identical streams on any
// standard library.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        constexpr double kTwoPi = 6.283185307179586;
        spare_ = radius * std::sin(kTwoPi * u2);
        have_spare_ = true;
        return radius * std::cos(kTwoPi * u2);
    }

private:
    double uniform01() {  // (0, 1]
        return static_cast<double>((rng_() >> 11) + 1) * 0x1.0p-53;
    }

    std::mt19937_64 rng_;
    bool have_spare_ = false;
    double spare_ = 0;
};

}  // namespace

double search_objective(const HarmonicAnsatz& ansatz, double c, const GridSpec& grid,
                        const Domain& domain, double eps_pos, double eps_c,
                        double penalty_weight) {
    const BasisTable table(ansatz.degree, grid, domain);
    Eigen::VectorXd coeffs =
        Eigen::Map<const Eigen::VectorXd>(ansatz.coeffs.data(), ansatz.coeffs.size());
    return objective_from_table(table, coeffs, c, eps_pos, eps_c, penalty_weight);
}

SearchResult falsify(const SearchConfig& config) {
    const BasisTable table(config.degree, config.grid, config.domain);
    const int nb = table.nbasis;

    SearchResult result;
    result.config = config;
    result.best_objective = std::numeric_limits<double>::infinity();

    Eigen::VectorXd r;
    Eigen::MatrixXd J;
    Eigen::VectorXd r_trial;

    for (int ridx = 0; ridx < config.restarts; ++ridx) {
        NormalSampler normal(config.seed * 1000003ull + static_cast<std::uint64_t>(ridx));

        Eigen::VectorXd theta(nb + 1);
        theta[0] = 1.0 + 0.3 * normal();
        for (int b = 1; b < nb; ++b) theta[b] = 0.3 * normal();
        theta[nb] = config.eps_c + std::abs(0.3 * normal());

        residuals_and_jacobian(table, theta, config.eps_pos, config.eps_c,
                               config.penalty_weight, r, &J);
        double cost = r.squaredNorm();

        RestartTrace trace;
        trace.restart_index = ridx;
        trace.initial_cost = cost;
        trace.accepted_costs.push_back(cost);

        double damping = config.init_damping;
        int it = 0;
        bool converged = false;
        for (; it < config.max_iterations && !converged; ++it) {
            Eigen::MatrixXd H = J.transpose() * J;
            const Eigen::VectorXd g = J.transpose() * r;
            Eigen::VectorXd diag = H.diagonal().cwiseMax(1e-12);
            H.diagonal() += damping * diag;

            const Eigen::VectorXd delta = H.ldlt().solve(-g);
            const Eigen::VectorXd theta_trial = theta + delta;
            residuals_and_jacobian(table, theta_trial, config.eps_pos, config.eps_c,
                                   config.penalty_weight, r_trial, nullptr);
            const double cost_trial = r_trial.squaredNorm();

            if (cost_trial < cost) {
                theta = theta_trial;
                const double improvement = cost - cost_trial;
                cost = cost_trial;
                trace.accepted_costs.push_back(cost);
                damping = std::max(damping / 10.0, 1e-14);
                residuals_and_jacobian(table, theta, config.eps_pos, config.eps_c,
                                       config.penalty_weight, r, &J);
                if (delta.norm() < 1e-14 * (1.0 + theta.norm()) ||
                    improvement < 1e-18 * (1.0 + cost)) {
                    converged = true;
                }
            } else {
                damping *= 10.0;
                if (damping > 1e14) break;  // no acceptable step left at this scale
            }
        }

        trace.iterations = it;
        trace.converged = converged;
        trace.final_cost = cost;
        trace.final_objective = objective_from_table(table, theta.head(nb), theta[nb],
                                                     config.eps_pos, config.eps_c,
                                                     config.penalty_weight);
        result.total_iterations += it;

        if (trace.final_objective < result.best_objective) {
            result.best_objective = trace.final_objective;
            result.best_coeffs.assign(theta.data(), theta.data() + nb);
            result.best_c = theta[nb];
            result.best_restart = ridx;
        }
        result.restarts.push_back(std::move(trace));
    }
    return result;
}

MetricField ansatz_metric_field(const HarmonicAnsatz& ansatz, const Domain& domain,
                                const GridSpec& grid, std::string name) {
    const auto basis = harmonic_basis(ansatz.degree);
    if (basis.size() != ansatz.coeffs.size()) {
        throw std::invalid_argument("ansatz coefficient count does not match basis size");
    }
    const int n = grid.nu * grid.nv;
    std::vector<Jet3> jets(n);
    const double du = domain.width() / (grid.nu - 1);
    const double dv = domain.height() / (grid.nv - 1);
    for (int j = 0; j < grid.nv; ++j) {
        for (int i = 0; i < grid.nu; ++i) {
            const int k = j * grid.nu + i;
            const double u0 = domain.u_min + i * du;
            const double v0 = domain.v_min + j * dv;
            Jet3 sum;
            for (std::size_t b = 0; b < basis.size(); ++b) {
                sum = sum + ansatz.coeffs[b] * eval_jet(*basis[b], u0, v0);
            }
            jets[k] = sum;
        }
    }
    return MetricField::from_raw(std::move(jets), domain, grid, std::move(name));
}

}  // namespace umbilic
