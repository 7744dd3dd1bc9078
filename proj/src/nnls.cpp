#include "halfsphere/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/QR>

#include "halfsphere/errors.hpp"

namespace halfsphere {

NnlsResult solve_nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_iterations) {
    const Eigen::Index m = a.rows();
    const Eigen::Index n = a.cols();
    const double scale = std::max(1.0, a.cwiseAbs().colwise().sum().maxCoeff()) * std::max(1.0, b.norm());
    const double tol = 10.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(std::max(m, n)) * scale;

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    std::vector<bool> passive(static_cast<std::size_t>(n), false);
    std::vector<bool> blocked(static_cast<std::size_t>(n), false);
    int iterations = 0;

    auto solve_passive = [&](Eigen::VectorXd& z) {
        std::vector<Eigen::Index> cols;
        for (Eigen::Index j = 0; j < n; ++j)
            if (passive[static_cast<std::size_t>(j)]) cols.push_back(j);
        Eigen::MatrixXd ap(m, static_cast<Eigen::Index>(cols.size()));
        for (std::size_t k = 0; k < cols.size(); ++k) ap.col(static_cast<Eigen::Index>(k)) = a.col(cols[k]);
        const Eigen::VectorXd zp = ap.colPivHouseholderQr().solve(b);
        z.setZero(n);
        for (std::size_t k = 0; k < cols.size(); ++k) z[cols[k]] = zp[static_cast<Eigen::Index>(k)];
        if (++iterations > max_iterations) throw IterationLimit("NNLS active-set loop exceeded its iteration cap");
    };

    Eigen::VectorXd z(n);
    while (true) {
        const Eigen::VectorXd w = a.transpose() * (b - a * x);
        Eigen::Index t = -1;
        double best = tol;
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto js = static_cast<std::size_t>(j);
            if (!passive[js] && !blocked[js] && w[j] > best) {
                best = w[j];
                t = j;
            }
        }
        if (t < 0) break;
        passive[static_cast<std::size_t>(t)] = true;

        while (true) {
            solve_passive(z);
            if (z[t] <= 0.0 && x[t] == 0.0) {
                // Entering column makes no progress (rounding); leave it out until the next step.
                passive[static_cast<std::size_t>(t)] = false;
                blocked[static_cast<std::size_t>(t)] = true;
                break;
            }
            bool feasible = true;
            double alpha = std::numeric_limits<double>::infinity();
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[static_cast<std::size_t>(j)] && z[j] <= 0.0) {
                    feasible = false;
                    alpha = std::min(alpha, x[j] / (x[j] - z[j]));
                }
            }
            if (feasible) {
                x = z;
                std::fill(blocked.begin(), blocked.end(), false);
                break;
            }
            x += alpha * (z - x);
            for (Eigen::Index j = 0; j < n; ++j) {
                const auto js = static_cast<std::size_t>(j);
                if (passive[js] && x[j] <= tol) {
                    passive[js] = false;
                    x[j] = 0.0;
                }
            }
        }
    }
    return NnlsResult{x, a * x - b, iterations};
}

std::optional<Eigen::VectorXd> least_distance(const Eigen::MatrixXd& g, const Eigen::VectorXd& h) {
    const Eigen::Index rows = g.rows();
    const Eigen::Index dim = g.cols();
    Eigen::MatrixXd e(dim + 1, rows);
    e.topRows(dim) = g.transpose();
    e.row(dim) = h.transpose();
    Eigen::VectorXd f = Eigen::VectorXd::Zero(dim + 1);
    f[dim] = 1.0;
    const NnlsResult sol = solve_nnls(e, f, 50 * static_cast<int>(rows) + 50);
    const Eigen::VectorXd& r = sol.residual;
    if (r.norm() < 1e-12 || std::abs(r[dim]) < 1e-14) return std::nullopt;
    return Eigen::VectorXd(-r.head(dim) / r[dim]);
}

}  // namespace halfsphere
