#pragma once

#include "ietlab/confrac.hpp"

#include <stdexcept>

namespace ietlab {

// Khinchin's constant and its logarithm.
inline constexpr double kKhinchin = 2.6854520010653064;
double zeta0();

class NonBracketing : public std::runtime_error {
public:
    NonBracketing(const std::string& what, double endpoint) : std::runtime_error(what), endpoint(endpoint) {}
    double endpoint;
};

class NonConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// 1/2 + 1/(2 ln(2 C0 + 2)); requires 2 C0 >= 20.
double good_lower_bound(double c0);
// 3/2 + 1/(2 ln(2 C0 + 2))
double parameter_set_lower_bound(double c0);

// Root d of sum over digits in [min, max]^depth of |I_depth|^d = 1, depth 1..3.
double cylinder_dim_estimate(long digit_min, long digit_max, int depth, unsigned jobs = 1, double tol = 1e-7);

struct PressureModel {
    int cutoff = 64;     // digits 1..cutoff summed explicitly, the rest by an integral tail
    int nodes = 32;      // Chebyshev collocation points on [0,1]
    double tol = 1e-14;  // power iteration, relative change of the eigenvalue

    void validate() const;
};

// log spectral radius of (L phi)(x) = sum_a a^q (a+x)^{-2t} phi(1/(a+x)); requires 2t - q > 1.
double pressure(double t, double q, const PressureModel& model = {});
double pressure_dq(double t, double q, const PressureModel& model = {}, double h = 1e-4);
double pressure_dt(double t, double q, const PressureModel& model = {}, double h = 1e-4);

struct TZeta {
    double t = 0, q = 0;
    double residual_value = 0;  // P(t,q) - q zeta
    double residual_slope = 0;  // dP/dq - zeta
    bool newton = false;        // false when the bisection fallback produced the answer
};

// Solves P(t,q) = q zeta and dP/dq(t,q) = zeta.
TZeta solve_t_of_zeta(double zeta, const PressureModel& model = {}, double tol = 1e-7);

struct TZetaBand {
    TZeta value;            // at the model's cutoff
    double t_double_cutoff; // same solve with twice the cutoff
    double band() const;
};

TZetaBand solve_t_of_zeta_with_band(double zeta, const PressureModel& model = {}, double tol = 1e-7);

struct DimensionReport {
    double c0 = 0;
    double lambda = 0;  // sqrt(2 C0 / 3)
    double zeta = 0;    // ln lambda
    double k0 = kKhinchin;
    double zeta0 = 0;
    double good = 0;
    double lower_bound = 0;
    double t = 0, q = 0;
    double truncation_band = 0;
    double upper_bound = 0;
    bool gradient_nonvanishing = false;
    bool lebesgue_null = false;
    bool ok = false;
};

DimensionReport p0_dimension_bounds(double c0, const PressureModel& model = {});

// Min over a grid of the open simplex of |dA/dalpha| and |dA/dbeta| for A = (1-alpha)/(1+beta).
std::pair<double, double> min_gradient_of_a(int grid = 200);

struct GaussExponents {
    double khintchine = 0;  // (1/n) sum ln a_j
    double lyapunov = 0;    // (1/n) sum ln |T'(T^j x)|
};

// Uses all supplied digits to approximate the Gauss orbit of x; needs at least n.
GaussExponents gauss_exponents(const Digits& digits, std::size_t n);
GaussExponents gauss_exponents(const Real& x, std::size_t n, const PrecisionPolicy& policy = {});

}  // namespace ietlab
