#include "halfsphere/exact_formulas.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/LU>

#include "halfsphere/errors.hpp"
#include "halfsphere/quadrature.hpp"

namespace halfsphere {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kQuadratureRelTol = 1e-13;
constexpr int kMaxPanels = 20000;
constexpr std::size_t kOuterBlock = 4096;

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

double binom_small(int n, int k) {
    return binomial(static_cast<std::uint64_t>(n), k);
}

void require_n(std::uint64_t n, std::uint64_t min_n, const char* what) {
    if (n < min_n) throw InvalidConfig(std::string(what) + ": sample size below its minimum");
}

// Neumaier-compensated running sum.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            carry += (sum - t) + x;
        else
            carry += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

struct BlockMoments {
    double sum = 0.0;
    double sum_sq = 0.0;
};

BlockMoments cd_block(int d, RandomSource rng, std::size_t outer, std::size_t inner) {
    CompensatedSum s;
    CompensatedSum s2;
    const double half_sphere = omega(d).value / 2.0;
    Eigen::MatrixXd u(d, d);
    Eigen::VectorXd x(d);
    Eigen::VectorXd coeff(d);
    for (std::size_t o = 0; o < outer; ++o) {
        // u_1..u_d uniform on the hemisphere of S^{d-1} around the first axis.
        for (int j = 0; j < d; ++j) {
            UnitVector uj = sample_uniform_sphere(d, rng);
            Vec c = uj.coords();
            if (c[0] < 0.0) c = -c;
            u.col(j) = c;
        }
        const double gram_volume = std::abs(u.determinant());
        double value = 0.0;
        if (gram_volume >= 1e-12) {
            const Eigen::MatrixXd inv = u.inverse();
            double acc = 0.0;
            for (std::size_t s_i = 0; s_i < inner; ++s_i) {
                UnitVector xv = sample_uniform_sphere(d, rng);
                for (int j = 0; j < d; ++j) x[j] = xv[j];
                if (x[0] < 0.0) x = -x;
                coeff.noalias() = inv * x;
                if (coeff.minCoeff() >= 0.0) acc += x[0];
            }
            value = gram_volume * half_sphere * acc / static_cast<double>(inner);
        }
        s.add(value);
        s2.add(value * value);
    }
    return BlockMoments{s.value(), s2.value()};
}

}  // namespace

ExactValue omega(int k) {
    if (k < 1) throw InvalidConfig("omega(k) needs k >= 1");
    return ExactValue{2.0 * std::pow(kPi, k / 2.0) / std::tgamma(k / 2.0), 0.0, "omega"};
}

ExactValue kappa(int k) {
    if (k < 1) throw InvalidConfig("kappa(k) needs k >= 1");
    return ExactValue{omega(k).value / k, 0.0, "kappa"};
}

double binomial(std::uint64_t n, int k) {
    if (k < 0 || static_cast<std::uint64_t>(k) > n) return 0.0;
    if (n > 1000000) {
        // Extended precision: lgamma(n) ~ 1e7 here, so double would lose ~1e-9 relative.
        const long double nn = static_cast<long double>(n);
        return static_cast<double>(std::exp(std::lgamma(nn + 1.0L) - std::lgamma(k + 1.0L) - std::lgamma(nn - k + 1.0L)));
    }
    // Exact: C <- C (n-i) / (i+1), dividing out the common factor first.
    unsigned __int128 c = 1;
    for (int i = 0; i < k; ++i) {
        auto num = static_cast<unsigned __int128>(n - static_cast<std::uint64_t>(i));
        auto den = static_cast<unsigned __int128>(i + 1);
        const std::uint64_t g = std::gcd(static_cast<std::uint64_t>(c % den), static_cast<std::uint64_t>(den));
        c = (c / g) * (num / (den / g));
    }
    return static_cast<double>(c);
}

ExactValue integral_I(std::uint64_t exponent, Dim d, int panel_multiplier) {
    const double m = static_cast<double>(exponent);
    const int power = d.value() - 1;
    auto f = [m, power](double a) {
        const double base = std::exp(m * std::log1p(-a / kPi));
        return base * std::pow(std::sin(a), power);
    };
    std::vector<double> breaks;
    if (exponent <= 50) {
        for (int i = 0; i <= 8; ++i) breaks.push_back(kPi * i / 8.0);
    } else {
        // Geometric panels towards 0, where the mass sits for large exponents.
        const double floor_scale = kPi / (16.0 * m);
        breaks.push_back(0.0);
        std::vector<double> geo;
        for (double a = kPi; a > floor_scale; a *= 0.5) geo.push_back(a);
        std::reverse(geo.begin(), geo.end());
        breaks.insert(breaks.end(), geo.begin(), geo.end());
    }
    const QuadratureResult q = integrate_composite(f, breaks, kQuadratureRelTol, kMaxPanels, panel_multiplier);
    if (!q.converged || q.abs_error > 1e-10 * std::abs(q.value)) {
        throw NonConvergence("central integral quadrature did not reach its tolerance");
    }
    return ExactValue{q.value, q.abs_error, "central_integral"};
}

ExactValue expected_facets(std::uint64_t n, Dim d) {
    require_n(n, static_cast<std::uint64_t>(d.value()), "expected_facets");
    const double factor = 2.0 * omega(d.value()).value / omega(d.ambient()).value * binomial(n, d.value());
    const ExactValue integral = integral_I(n - static_cast<std::uint64_t>(d.value()), d);
    return ExactValue{factor * integral.value, factor * integral.abs_error_bound, "expected_facets"};
}

ExactValue limit_facets(Dim d) {
    const double k = kappa(d.value()).value;
    return ExactValue{std::ldexp(1.0, -d.value()) * factorial(d.value()) * k * k, 0.0, "facets_limit"};
}

ExactValue facet_integral_expansion(std::uint64_t n, Dim d) {
    require_n(n, static_cast<std::uint64_t>(d.value()) + 1, "facet_integral_expansion");
    const double nn = static_cast<double>(n);
    const double value = std::pow(kPi, d.value()) / d.value() *
                         (1.0 - binom_small(d.value() + 1, 3) * kPi * kPi / (nn * nn));
    return ExactValue{value, 0.0, "facet_integral_expansion"};
}

ExactValue expected_surface_area(std::uint64_t n, Dim d) {
    require_n(n, static_cast<std::uint64_t>(d.value()), "expected_surface_area");
    const double factor =
        d.value() * omega(d.value()).value / std::pow(kPi, d.value()) * binomial(n, d.value());
    const ExactValue integral = integral_I(n - static_cast<std::uint64_t>(d.value()), d);
    return ExactValue{factor * integral.value, factor * integral.abs_error_bound, "expected_surface_area"};
}

ExactValue surface_area_asymptotic(std::uint64_t n, Dim d) {
    require_n(n, 1, "surface_area_asymptotic");
    const double nn = static_cast<double>(n);
    const double value = omega(d.value()).value * (1.0 - binom_small(d.value() + 1, 3) * kPi * kPi / (nn * nn));
    return ExactValue{value, 0.0, "surface_area_asymptotic"};
}

ExactValue expected_mean_width(std::uint64_t n, Dim d) {
    require_n(n, 1, "expected_mean_width");
    const double ratio = omega(d.value()).value / omega(d.ambient()).value;
    const ExactValue integral = integral_I(n, d);
    return ExactValue{0.5 - ratio * integral.value, ratio * integral.abs_error_bound, "expected_mean_width"};
}

ExactValue mean_width_asymptotic(std::uint64_t n, Dim d) {
    require_n(n, 1, "mean_width_asymptotic");
    const double ratio = omega(d.value()).value / omega(d.ambient()).value;
    const double value = 0.5 - ratio * factorial(d.value() - 1) * std::pow(kPi, d.value()) *
                                   std::pow(static_cast<double>(n), -d.value());
    return ExactValue{value, 0.0, "mean_width_asymptotic"};
}

std::optional<ExactValue> expected_vertices(std::uint64_t n, Dim d) {
    if (d.value() != 2 && d.value() != 3) return std::nullopt;
    ExactValue f = expected_facets(n, d);
    if (d.value() == 3) {
        f.value = 0.5 * f.value + 2.0;
        f.abs_error_bound *= 0.5;
    }
    f.formula_id = "expected_vertices";
    return f;
}

ExactValue c_d_closed_form(Dim d) {
    if (d.value() == 2) return ExactValue{2.0 * kPi, 0.0, "cd_closed_form"};
    if (d.value() == 3) return ExactValue{std::pow(kPi, 5) / 6.0 + std::pow(kPi, 3) / 2.0, 0.0, "cd_closed_form"};
    throw UnsupportedDimension("no closed form of C(d) for d = " + std::to_string(d.value()));
}

ConstantEstimate c_d_monte_carlo(Dim d, const RandomSource& rng, std::size_t outer_samples, std::size_t inner_samples,
                                 int threads) {
    if (outer_samples < 2 || inner_samples < 1)
        throw InvalidConfig("C(d) estimator needs at least 2 outer and 1 inner sample");
    const std::size_t blocks = (outer_samples + kOuterBlock - 1) / kOuterBlock;
    std::vector<BlockMoments> moments(blocks);
    auto run_block = [&](std::size_t b) {
        const std::size_t count = std::min(kOuterBlock, outer_samples - b * kOuterBlock);
        moments[b] = cd_block(d.value(), rng.fork(b), count, inner_samples);
    };
    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers == 1) {
        for (std::size_t b = 0; b < blocks; ++b) run_block(b);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t b = w; b < blocks; b += workers) run_block(b);
            });
        }
        for (auto& t : pool) t.join();
    }
    CompensatedSum s;
    CompensatedSum s2;
    for (const BlockMoments& m : moments) {
        s.add(m.sum);
        s2.add(m.sum_sq);
    }
    const double count = static_cast<double>(outer_samples);
    const double mean = s.value() / count;
    const double var = std::max(0.0, (s2.value() - count * mean * mean) / (count - 1.0));
    const double domain = std::pow(omega(d.value()).value / 2.0, d.value());
    return ConstantEstimate{domain * mean, domain * std::sqrt(var / count), outer_samples};
}

ExactValue expected_missed_volume_asymptotic(std::uint64_t n, Dim d, std::optional<double> c_d) {
    require_n(n, 1, "expected_missed_volume_asymptotic");
    const double c = c_d ? *c_d : c_d_closed_form(d).value;
    const double value = c * std::pow(kPi, d.value() + 1) * std::pow(2.0 / omega(d.ambient()).value, d.value()) *
                         omega(d.value()).value / static_cast<double>(n);
    return ExactValue{value, 0.0, "missed_volume_asymptotic"};
}

ExactValue vertex_limit(Dim d, std::optional<double> c_d) {
    const double c = c_d ? *c_d : c_d_closed_form(d).value;
    const double value = c * std::pow(kPi, d.value() + 1) * std::pow(2.0 / omega(d.ambient()).value, d.value() + 1) *
                         omega(d.value()).value;
    return ExactValue{value, 0.0, "vertex_limit"};
}

double efron_residual(double mean_f0_at_n_plus_1, double mean_volume_at_n, std::uint64_t n, Dim d) {
    return (1.0 - mean_f0_at_n_plus_1 / static_cast<double>(n + 1)) -
           2.0 / omega(d.ambient()).value * mean_volume_at_n;
}

}  // namespace halfsphere
