#include "halfsphere/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace halfsphere {

GaussLegendre::GaussLegendre(int order) {
    if (order < 1) throw std::invalid_argument("Gauss-Legendre order must be positive");
    nodes_.resize(static_cast<std::size_t>(order));
    weights_.resize(static_cast<std::size_t>(order));
    const long double pi = std::numbers::pi_v<long double>;
    for (int i = 0; i < order; ++i) {
        long double x = std::cos(pi * (i + 0.75L) / (order + 0.5L));
        long double dp = 0.0L;
        for (int it = 0; it < 100; ++it) {
            long double p0 = 1.0L;
            long double p1 = x;
            for (int k = 2; k <= order; ++k) {
                const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (order == 1) {
                p1 = x;
                p0 = 1.0L;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0L);
            const long double step = p1 / dp;
            x -= step;
            if (std::fabs(step) < 1e-19L) break;
        }
        nodes_[static_cast<std::size_t>(i)] = static_cast<double>(x);
        weights_[static_cast<std::size_t>(i)] = static_cast<double>(2.0L / ((1.0L - x * x) * dp * dp));
    }
}

double GaussLegendre::integrate(const std::function<double(double)>& f, double a, double b) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) sum += weights_[i] * f(mid + half * nodes_[i]);
    return half * sum;
}

QuadratureResult integrate_composite(const std::function<double(double)>& f, const std::vector<double>& breakpoints,
                                     double rel_tol, int max_panels, int panel_multiplier) {
    static const GaussLegendre rule(20);
    struct Panel {
        double a;
        double b;
        double whole;
    };
    std::vector<Panel> pending;
    double estimate = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double a = breakpoints[i];
        const double b = breakpoints[i + 1];
        if (!(b > a)) continue;
        const double w = rule.integrate(f, a, b);
        estimate += std::abs(w);
        pending.push_back({a, b, w});
    }

    QuadratureResult out;
    std::vector<Panel> accepted;
    std::vector<double> accepted_error;
    int panels = static_cast<int>(pending.size());
    while (!pending.empty()) {
        const Panel p = pending.back();
        pending.pop_back();
        const double mid = 0.5 * (p.a + p.b);
        const double left = rule.integrate(f, p.a, mid);
        const double right = rule.integrate(f, mid, p.b);
        const double err = std::abs(left + right - p.whole);
        if (err <= rel_tol * estimate || mid <= p.a || mid >= p.b || panels >= max_panels) {
            accepted.push_back({p.a, p.b, left + right});
            accepted_error.push_back(err);
            continue;
        }
        pending.push_back({p.a, mid, left});
        pending.push_back({mid, p.b, right});
        ++panels;
    }
    std::sort(accepted.begin(), accepted.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });

    double value = 0.0;
    double error = 0.0;
    for (std::size_t i = 0; i < accepted.size(); ++i) {
        const Panel& p = accepted[i];
        if (panel_multiplier > 1) {
            const double h = (p.b - p.a) / panel_multiplier;
            for (int k = 0; k < panel_multiplier; ++k) value += rule.integrate(f, p.a + k * h, p.a + (k + 1) * h);
        } else {
            value += p.whole;
        }
    }
    for (double e : accepted_error) error += e;
    out.value = value;
    out.abs_error = error;
    out.panels = static_cast<int>(accepted.size()) * std::max(1, panel_multiplier);
    out.converged = panels < max_panels;
    return out;
}

}  // namespace halfsphere
