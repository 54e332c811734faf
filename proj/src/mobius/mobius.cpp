#include "ietlab/mobius.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace ietlab {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

std::complex<double> unit(double turns) {
    double t = turns - std::floor(turns);
    return std::polar(1.0, kTwoPi * t);
}

// Runs body(i) for i in [0, n) split across `jobs` threads.
template <class Body>
void parallel_for(std::size_t n, unsigned jobs, Body body) {
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (jobs == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += jobs) body(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace

MobiusTable::MobiusTable(long limit) : limit_(limit) {
    if (limit < 1) throw std::invalid_argument("sieve limit must be at least 1");
    const auto n = static_cast<std::size_t>(limit);
    values_.assign(n + 1, 0);
    std::vector<bool> composite(n + 1, false);
    std::vector<long> primes;
    values_[1] = 1;
    for (std::size_t i = 2; i <= n; ++i) {
        if (!composite[i]) {
            primes.push_back(static_cast<long>(i));
            values_[i] = -1;
        }
        for (long p : primes) {
            std::size_t ip = i * static_cast<std::size_t>(p);
            if (ip > n) break;
            composite[ip] = true;
            if (i % static_cast<std::size_t>(p) == 0) {
                values_[ip] = 0;
                break;
            }
            values_[ip] = static_cast<std::int8_t>(-values_[i]);
        }
    }
}

long MobiusTable::mertens(long n) const {
    if (n > limit_) throw std::out_of_range("Mertens sum beyond the sieve limit");
    long sum = 0;
    for (long k = 1; k <= n; ++k) sum += values_[static_cast<std::size_t>(k)];
    return sum;
}

MobiusTable sieve_mobius(long limit) { return MobiusTable(limit); }

Observable Observable::parse(const std::string& name) {
    Observable o;
    if (name == "const" || name == "constant") {
        o.kind = Kind::Constant;
    } else if (name == "root" || name == "root3") {
        o.kind = Kind::SymbolRootOfUnity;
    } else if (name.size() == 9 && name.rfind("centered", 0) == 0 && name[8] >= '1' && name[8] <= '3') {
        o.kind = Kind::CenteredIndicator;
        o.part = name[8] - '0';
    } else {
        throw std::invalid_argument("unknown observable '" + name + "' (const, root3, centered1..3)");
    }
    return o;
}

std::string Observable::name() const {
    switch (kind) {
        case Kind::Constant: return "const";
        case Kind::SymbolRootOfUnity: return "root3";
        case Kind::CenteredIndicator: return "centered" + std::to_string(part);
    }
    return "?";
}

std::complex<double> observable_value(const Observable& obs, int symbol, double alpha, double beta) {
    switch (obs.kind) {
        case Observable::Kind::Constant: return 1.0;
        case Observable::Kind::SymbolRootOfUnity: return unit(symbol / 3.0);
        case Observable::Kind::CenteredIndicator: {
            const double measure[3] = {alpha, beta, 1 - alpha - beta};
            return (symbol == obs.part ? 1.0 : 0.0) - measure[obs.part - 1];
        }
    }
    return 0.0;
}

std::vector<std::complex<double>> observable_sequence(const IETState& state, const Real& x0, const Observable& obs,
                                                      std::size_t n, const PrecisionPolicy& policy) {
    Coding c = code_trajectory(state, x0, n + 1, policy);
    if (c.ambiguous_at) throw BranchAmbiguous("trajectory cannot be coded at step " + std::to_string(*c.ambiguous_at));
    const double alpha = state.params().alpha.approx(), beta = state.params().beta.approx();
    std::vector<std::complex<double>> f(n);
    for (std::size_t k = 1; k <= n; ++k) f[k - 1] = observable_value(obs, c.symbols[k], alpha, beta);
    return f;
}

std::vector<SeriesPoint> disjointness_series(const MobiusTable& table, const std::vector<std::complex<double>>& f,
                                             const std::vector<long>& checkpoints) {
    std::vector<long> sorted = checkpoints;
    std::sort(sorted.begin(), sorted.end());
    if (!sorted.empty() && (sorted.front() < 1 || sorted.back() > table.limit() ||
                            static_cast<std::size_t>(sorted.back()) > f.size()))
        throw std::out_of_range("checkpoint outside the sieve or trajectory range");
    std::vector<SeriesPoint> out;
    std::complex<long double> sum = 0;
    long k = 0;
    for (long n : sorted) {
        for (; k < n; ++k) {
            int mu = table(k + 1);
            if (mu != 0) sum += std::complex<long double>(f[static_cast<std::size_t>(k)]) * static_cast<long double>(mu);
        }
        out.push_back({n, std::complex<double>(sum / static_cast<long double>(n))});
    }
    return out;
}

std::vector<SeriesPoint> disjointness_series(const MobiusTable& table, const IETState& state, const Real& x0,
                                             const Observable& obs, const std::vector<long>& checkpoints,
                                             const PrecisionPolicy& policy) {
    long top = checkpoints.empty() ? 0 : *std::max_element(checkpoints.begin(), checkpoints.end());
    auto f = observable_sequence(state, x0, obs, static_cast<std::size_t>(std::max(top, 0L)), policy);
    return disjointness_series(table, f, checkpoints);
}

std::complex<double> mu_exponential_sum(const MobiusTable& table, double theta, long n) {
    if (n > table.limit()) throw std::out_of_range("exponential sum beyond the sieve limit");
    std::complex<long double> sum = 0;
    for (long k = 1; k <= n; ++k) {
        int mu = table(k);
        if (mu == 0) continue;
        // reduce k*theta mod 1 before taking the exponential
        long double turns = std::fmod(static_cast<long double>(k) * theta, 1.0L);
        sum += std::complex<long double>(std::cos(kTwoPi * turns), std::sin(kTwoPi * turns)) *
               static_cast<long double>(mu);
    }
    return std::complex<double>(sum);
}

double mu_exponential_max(const MobiusTable& table, long n, std::size_t grid, unsigned jobs) {
    std::vector<double> mags(grid);
    parallel_for(grid, jobs, [&](std::size_t j) {
        mags[j] = std::abs(mu_exponential_sum(table, static_cast<double>(j) / grid, n));
    });
    return grid == 0 ? 0.0 : *std::max_element(mags.begin(), mags.end());
}

namespace {

double parseval_rhs(const MobiusTable& table, const std::vector<std::complex<double>>& f, std::size_t grid,
                    unsigned jobs) {
    const std::size_t n = f.size();
    std::vector<std::complex<double>> roots(grid);
    for (std::size_t j = 0; j < grid; ++j) roots[j] = unit(static_cast<double>(j) / grid);
    std::vector<double> terms(grid);
    parallel_for(grid, jobs, [&](std::size_t j) {
        std::complex<double> sf = 0, sm = 0;
        for (std::size_t k = 1; k <= n; ++k) {
            const std::complex<double>& e = roots[(k * j) % grid];
            sf += f[k - 1] * e;
            if (int mu = table(static_cast<long>(k))) sm += static_cast<double>(mu) * std::conj(e);
        }
        terms[j] = std::abs(sf) * std::abs(sm);
    });
    long double total = 0;
    for (double t : terms) total += t;
    return static_cast<double>(total / grid);
}

}  // namespace

ParsevalResult parseval_check(const MobiusTable& table, const std::vector<std::complex<double>>& f,
                              std::size_t grid, double tolerance, unsigned jobs) {
    const std::size_t n = f.size();
    if (static_cast<long>(n) > table.limit()) throw std::out_of_range("Parseval check beyond the sieve limit");
    if (grid < 4 * n) throw std::invalid_argument("Parseval grid must have at least 4N points");
    ParsevalResult r;
    std::complex<long double> direct = 0;
    for (std::size_t k = 1; k <= n; ++k)
        direct += std::complex<long double>(f[k - 1]) * static_cast<long double>(table(static_cast<long>(k)));
    r.lhs = static_cast<double>(std::abs(direct));
    if (n == 0) {
        r.ok = true;
        return r;
    }
    r.rhs = parseval_rhs(table, f, grid, jobs);
    r.rhs_double = parseval_rhs(table, f, 2 * grid, jobs);
    r.ok = r.lhs <= r.rhs + tolerance;
    return r;
}

double dirichlet_l1(long k) {
    if (k < 1) throw std::invalid_argument("Dirichlet kernel index must be at least 1");
    using boost::math::quadrature::gauss_kronrod;
    const double half = (k + 1) / 2.0;
    auto integrand = [half](double t) {
        double s = std::sin(t / 2);
        if (s == 0) return 2 * half;
        return std::fabs(std::sin(half * t) / s);
    };
    // symmetric about pi; integrate between consecutive zeros 2 pi j/(k+1) on [0, pi]
    const double step = kTwoPi / (k + 1);
    long double total = 0;
    double left = 0;
    while (left < std::numbers::pi) {
        double right = std::min(left + step, std::numbers::pi);
        total += gauss_kronrod<double, 31>::integrate(integrand, left, right, 4, 1e-12);
        left = right;
    }
    return static_cast<double>(2 * total);
}

double sine_integral_pi() {
    using boost::math::quadrature::gauss_kronrod;
    auto sinc = [](double t) { return t == 0 ? 1.0 : std::sin(t) / t; };
    return gauss_kronrod<double, 31>::integrate(sinc, 0.0, std::numbers::pi, 15, 1e-15);
}

}  // namespace ietlab
