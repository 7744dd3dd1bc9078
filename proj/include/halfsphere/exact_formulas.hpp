#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "halfsphere/random_source.hpp"
#include "halfsphere/sphere_core.hpp"

namespace halfsphere {

// A closed-form or quadrature value. abs_error_bound is 0 for closed forms.
struct ExactValue {
    double value = 0.0;
    double abs_error_bound = 0.0;
    std::string formula_id;
};

// Monte Carlo estimate of a constant.
struct ConstantEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

// Surface measure of the unit sphere in R^k, 2 pi^{k/2} / Gamma(k/2).
ExactValue omega(int k);
// Volume of the unit ball in R^k, omega(k) / k.
ExactValue kappa(int k);

// binom(n, k) as a double; exact integer arithmetic up to n = 10^6, log-Gamma above.
double binomial(std::uint64_t n, int k);

// Central integral I(m, d) = int_0^pi (1 - a/pi)^m sin^{d-1}(a) da.
// panel_multiplier > 1 re-evaluates every accepted panel on that many sub-panels.
ExactValue integral_I(std::uint64_t exponent, Dim d, int panel_multiplier = 1);

// Expected facet number of the hull of n uniform points on the halfsphere.
ExactValue expected_facets(std::uint64_t n, Dim d);
// Its limit 2^{-d} d! kappa_d^2.
ExactValue limit_facets(Dim d);
// Two-term expansion (pi^d/d)(1 - binom(d+1,3) pi^2 / n^2) of binom(n,d) I(n-d,d).
ExactValue facet_integral_expansion(std::uint64_t n, Dim d);

ExactValue expected_surface_area(std::uint64_t n, Dim d);
ExactValue surface_area_asymptotic(std::uint64_t n, Dim d);

ExactValue expected_mean_width(std::uint64_t n, Dim d);
ExactValue mean_width_asymptotic(std::uint64_t n, Dim d);

// Exact E f_0 for d = 2 (f_0 = f_1) and d = 3 (f_0 = f_2/2 + 2); nullopt otherwise.
std::optional<ExactValue> expected_vertices(std::uint64_t n, Dim d);

// Closed forms of the missed-volume constant: C(2) = 2 pi, C(3) = pi^5/6 + pi^3/2.
// Throws UnsupportedDimension for other d.
ExactValue c_d_closed_form(Dim d);

// Monte Carlo estimate of C(d): outer draws of d points on a hemisphere of the
// great subsphere e^perp, weighted by their Gram volume, times an inner
// membership estimate of int_U <x, ebar> over their spherical simplex U.
// Outer draws are split into blocks that use fixed forks of `rng`, so the
// result does not depend on `threads`.
ConstantEstimate c_d_monte_carlo(Dim d, const RandomSource& rng, std::size_t outer_samples, std::size_t inner_samples,
                                 int threads = 1);

// Asymptotic E sigma(S_e^+ \ P_n) = C(d) pi^{d+1} (2/omega_{d+1})^d omega_d / n.
// Uses the closed-form C(d) unless `c_d` is supplied; throws UnsupportedDimension
// when neither is available.
ExactValue expected_missed_volume_asymptotic(std::uint64_t n, Dim d, std::optional<double> c_d = std::nullopt);
// lim E f_0 = C(d) pi^{d+1} (2/omega_{d+1})^{d+1} omega_d.
ExactValue vertex_limit(Dim d, std::optional<double> c_d = std::nullopt);

// (1 - E f_0(P_{n+1})/(n+1)) - (2/omega_{d+1}) E sigma(P_n); zero for exact expectations.
double efron_residual(double mean_f0_at_n_plus_1, double mean_volume_at_n, std::uint64_t n, Dim d);

}  // namespace halfsphere
