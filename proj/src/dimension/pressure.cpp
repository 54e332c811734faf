#include "ietlab/dimension.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace ietlab {

void PressureModel::validate() const {
    if (cutoff < 2) throw std::invalid_argument("digit cutoff must be at least 2");
    if (nodes < 8) throw std::invalid_argument("need at least 8 collocation points");
    if (!(tol > 0)) throw std::invalid_argument("power iteration tolerance must be positive");
}

namespace {

// Chebyshev points of the first kind mapped to [0,1], with barycentric weights.
struct Collocation {
    std::vector<double> x, w;

    explicit Collocation(int n) : x(n), w(n) {
        for (int i = 0; i < n; ++i) {
            double angle = (2 * i + 1) * std::numbers::pi / (2 * n);
            x[i] = (1 - std::cos(angle)) / 2;
            w[i] = (i % 2 ? -1.0 : 1.0) * std::sin(angle);
        }
    }

    // Values at y of all Lagrange basis polynomials.
    void basis(double y, double* out) const {
        const std::size_t n = x.size();
        for (std::size_t j = 0; j < n; ++j)
            if (y == x[j]) {
                for (std::size_t k = 0; k < n; ++k) out[k] = k == j ? 1.0 : 0.0;
                return;
            }
        double total = 0;
        for (std::size_t j = 0; j < n; ++j) {
            out[j] = w[j] / (y - x[j]);
            total += out[j];
        }
        for (std::size_t j = 0; j < n; ++j) out[j] /= total;
    }
};

constexpr int kTailDegree = 10;

Eigen::MatrixXd transfer_matrix(double t, double q, const PressureModel& m) {
    const int n = m.nodes;
    Collocation col(n);
    Eigen::MatrixXd op = Eigen::MatrixXd::Zero(n, n);
    std::vector<double> ell(n);

    // monomial fit on [0,1] used for the tail integral
    Collocation fit(kTailDegree + 1);
    Eigen::MatrixXd vander(kTailDegree + 1, kTailDegree + 1);
    for (int k = 0; k <= kTailDegree; ++k)
        for (int i = 0; i <= kTailDegree; ++i) vander(k, i) = std::pow(fit.x[k], i);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(vander);

    const double p = 2 * t - q - 1;
    const double mid = m.cutoff + 0.5;
    for (int i = 0; i < n; ++i) {
        const double x = col.x[i];
        for (int a = 1; a <= m.cutoff; ++a) {
            double weight = std::pow(static_cast<double>(a), q) * std::pow(a + x, -2 * t);
            col.basis(1 / (a + x), ell.data());
            for (int j = 0; j < n; ++j) op(i, j) += weight * ell[j];
        }
        // sum over a > cutoff: integral from cutoff + 1/2 plus g'(cutoff + 1/2)/24.
        // With y = 1/(a+x) the integral is int_0^Y y^{p-1} (1 - x y)^q phi(y) dy.
        const double top = 1 / (mid + x);
        Eigen::MatrixXd values(kTailDegree + 1, n);
        for (int k = 0; k <= kTailDegree; ++k) {
            double y = top * fit.x[k];
            col.basis(y, ell.data());
            double factor = std::pow(1 - x * y, q);
            for (int j = 0; j < n; ++j) values(k, j) = factor * ell[j];
        }
        Eigen::MatrixXd coef = lu.solve(values);
        const double scale = std::pow(top, p);
        auto g = [&](double a, int j) {
            col.basis(1 / (a + x), ell.data());
            return std::pow(a, q) * std::pow(a + x, -2 * t) * ell[j];
        };
        const double h = 1e-3 * mid;
        for (int j = 0; j < n; ++j) {
            double integral = 0;
            for (int k = 0; k <= kTailDegree; ++k) integral += coef(k, j) / (p + k);
            double slope = (g(mid + h, j) - g(mid - h, j)) / (2 * h);
            op(i, j) += scale * integral + slope / 24;
        }
    }
    return op;
}

}  // namespace

double pressure(double t, double q, const PressureModel& model) {
    model.validate();
    if (!(2 * t - q > 1)) throw DomainViolation("pressure needs 2t - q > 1");
    Eigen::MatrixXd op = transfer_matrix(t, q, model);
    Eigen::VectorXd v = Eigen::VectorXd::Ones(model.nodes);
    double lambda = 0;
    for (int sweep = 0; sweep < 1000; ++sweep) {
        Eigen::VectorXd u = op * v;
        double next = u.cwiseAbs().maxCoeff();
        if (!(next > 0) || !std::isfinite(next)) throw NonConvergence("transfer operator iteration degenerated");
        u /= next;
        bool settled = std::fabs(next - lambda) <= model.tol * next && (u - v).cwiseAbs().maxCoeff() <= 1e-12;
        lambda = next;
        v = u;
        if (settled) return std::log(lambda);
    }
    throw NonConvergence("power iteration did not settle in 1000 sweeps");
}

double pressure_dq(double t, double q, const PressureModel& model, double h) {
    return (pressure(t, q + h, model) - pressure(t, q - h, model)) / (2 * h);
}

double pressure_dt(double t, double q, const PressureModel& model, double h) {
    return (pressure(t + h, q, model) - pressure(t - h, q, model)) / (2 * h);
}

namespace {

// t with P(t,q) = q zeta; P is decreasing in t and blows up at the boundary 2t - q = 1.
double t_on_curve(double q, double zeta, const PressureModel& model) {
    auto phi = [&](double t) { return pressure(t, q, model) - q * zeta; };
    double lo = (1 + q) / 2 + 1e-9;
    if (!(phi(lo) > 0)) throw NonBracketing("P - q zeta is not positive at the domain boundary", lo);
    double hi = std::max(lo + 0.25, 1.0);
    for (int k = 0; phi(hi) >= 0; ++k) {
        if (k > 60) throw NonBracketing("P - q zeta does not change sign in t", hi);
        lo = hi;
        hi += 0.5;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        double mid = (lo + hi) / 2;
        (phi(mid) > 0 ? lo : hi) = mid;
    }
    return (lo + hi) / 2;
}

TZeta finish(double t, double q, double zeta, const PressureModel& model, bool newton) {
    TZeta r;
    r.t = t;
    r.q = q;
    r.residual_value = pressure(t, q, model) - q * zeta;
    r.residual_slope = pressure_dq(t, q, model) - zeta;
    r.newton = newton;
    return r;
}

std::optional<TZeta> newton_solve(double zeta, const PressureModel& model, double tol) {
    double t = 1, q = 0;
    auto residual = [&](double tt, double qq) {
        Eigen::Vector2d f;
        f << pressure(tt, qq, model) - qq * zeta, pressure_dq(tt, qq, model) - zeta;
        return f;
    };
    try {
        Eigen::Vector2d f = residual(t, q);
        for (int it = 0; it < 40; ++it) {
            if (f.cwiseAbs().maxCoeff() < tol) return finish(t, q, zeta, model, true);
            const double h = 1e-4;
            Eigen::Matrix2d jac;
            jac.col(0) = (residual(t + h, q) - residual(t - h, q)) / (2 * h);
            jac.col(1) = (residual(t, q + h) - residual(t, q - h)) / (2 * h);
            Eigen::Vector2d step = jac.fullPivLu().solve(-f);
            if (!step.allFinite()) return std::nullopt;
            double damping = 1;
            bool improved = false;
            for (int halving = 0; halving < 30; ++halving, damping /= 2) {
                double tt = t + damping * step(0), qq = q + damping * step(1);
                if (!(2 * tt - qq > 1 + 1e-6) || tt <= 0) continue;
                Eigen::Vector2d g = residual(tt, qq);
                if (g.norm() < f.norm()) {
                    t = tt;
                    q = qq;
                    f = g;
                    improved = true;
                    break;
                }
            }
            if (!improved) return std::nullopt;
        }
    } catch (const std::runtime_error&) {
        return std::nullopt;
    }
    return std::nullopt;
}

TZeta bisection_solve(double zeta, const PressureModel& model, double tol) {
    // Along t(q), dt/dq = (zeta - P_q)/P_t vanishes where P_q = zeta; P_q increases with q.
    auto slope = [&](double q) { return pressure_dq(t_on_curve(q, zeta, model), q, model) - zeta; };
    double lo = 0, hi = 0;
    double s0 = slope(0);
    double step = 0.05;
    if (s0 < 0) {
        for (hi = step;; hi += step, step *= 1.5) {
            if (hi > 1.95) throw NonConvergence("no bracket for q above 0");
            if (slope(hi) >= 0) break;
            lo = hi;
        }
    } else {
        for (lo = -step;; lo -= step, step *= 1.5) {
            if (lo < -50) throw NonConvergence("no bracket for q below 0");
            if (slope(lo) <= 0) break;
            hi = lo;
        }
    }
    for (int it = 0; it < 100 && hi - lo > 1e-12; ++it) {
        double mid = (lo + hi) / 2;
        (slope(mid) < 0 ? lo : hi) = mid;
    }
    double q = (lo + hi) / 2;
    TZeta r = finish(t_on_curve(q, zeta, model), q, zeta, model, false);
    if (std::fabs(r.residual_value) >= tol || std::fabs(r.residual_slope) >= tol)
        throw NonConvergence("t(zeta) residuals " + std::to_string(r.residual_value) + ", " +
                             std::to_string(r.residual_slope) + " exceed tolerance");
    return r;
}

}  // namespace

TZeta solve_t_of_zeta(double zeta, const PressureModel& model, double tol) {
    model.validate();
    if (!(zeta > 0)) throw std::invalid_argument("zeta must be positive");
    if (auto r = newton_solve(zeta, model, tol)) {
        if (2 * r->t - r->q > 1 && r->t <= 1 + tol) return *r;
    }
    return bisection_solve(zeta, model, tol);
}

double TZetaBand::band() const { return std::fabs(value.t - t_double_cutoff); }

TZetaBand solve_t_of_zeta_with_band(double zeta, const PressureModel& model, double tol) {
    TZetaBand b;
    b.value = solve_t_of_zeta(zeta, model, tol);
    PressureModel wide = model;
    wide.cutoff *= 2;
    b.t_double_cutoff = solve_t_of_zeta(zeta, wide, tol).t;
    return b;
}

}  // namespace ietlab
