#pragma once

#include <functional>
#include <vector>

namespace halfsphere {

// Fixed-order Gauss-Legendre rule on [-1, 1], nodes computed by Newton iteration.
class GaussLegendre {
public:
    explicit GaussLegendre(int order);

    int order() const { return static_cast<int>(nodes_.size()); }
    double integrate(const std::function<double(double)>& f, double a, double b) const;

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;  // sum over panels of |two-half estimate - one-panel estimate|
    int panels = 0;
    bool converged = false;
};

// Composite Gauss-Legendre over the given breakpoints, bisecting a panel until
// its halves agree with the whole to rel_tol times the running total.
// panel_multiplier > 1 re-integrates every accepted panel on that many equal
// sub-panels (used as a finer independent evaluation).
QuadratureResult integrate_composite(const std::function<double(double)>& f, const std::vector<double>& breakpoints,
                                     double rel_tol, int max_panels, int panel_multiplier = 1);

}  // namespace halfsphere
