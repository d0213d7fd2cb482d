#include "fairmiss/lp.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "fairmiss/error.hpp"

namespace fairmiss::lp {

void Problem::add_constraint(std::vector<double> row, double bound) {
    if (row.size() != n_vars) throw ParameterError("LP constraint width does not match variable count");
    lhs.push_back(std::move(row));
    rhs.push_back(bound);
}

void Problem::add_unit_box() {
    for (std::size_t k = 0; k < n_vars; ++k) {
        std::vector<double> up(n_vars, 0.0), down(n_vars, 0.0);
        up[k] = 1.0;
        down[k] = -1.0;
        add_constraint(std::move(up), 1.0);
        add_constraint(std::move(down), 0.0);
    }
}

std::optional<Solution> simplex_maximize(const Problem& p) {
    const std::size_t m = p.lhs.size(), n = p.n_vars;
    for (double b : p.rhs)
        if (b < 0.0) throw ParameterError("simplex_maximize needs a feasible origin (b >= 0)");

    // Tableau columns: n structural, m slack, 1 rhs. Last row holds reduced costs.
    const std::size_t width = n + m + 1;
    std::vector<std::vector<double>> t(m + 1, std::vector<double>(width, 0.0));
    std::vector<std::size_t> basis(m);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t k = 0; k < n; ++k) t[r][k] = p.lhs[r][k];
        t[r][n + r] = 1.0;
        t[r][width - 1] = p.rhs[r];
        basis[r] = n + r;
    }
    for (std::size_t k = 0; k < n; ++k) t[m][k] = -p.objective[k];

    constexpr double eps = 1e-12;
    while (true) {
        // Bland: lowest-index column with negative reduced cost.
        std::size_t enter = width;
        for (std::size_t k = 0; k + 1 < width; ++k)
            if (t[m][k] < -eps) {
                enter = k;
                break;
            }
        if (enter == width) break;

        std::size_t leave = m;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < m; ++r) {
            if (t[r][enter] <= eps) continue;
            const double ratio = t[r][width - 1] / t[r][enter];
            if (ratio < best_ratio - eps || (std::abs(ratio - best_ratio) <= eps && leave < m && basis[r] < basis[leave])) {
                best_ratio = ratio;
                leave = r;
            }
        }
        if (leave == m) return std::nullopt;

        const double pivot = t[leave][enter];
        for (auto& v : t[leave]) v /= pivot;
        for (std::size_t r = 0; r <= m; ++r) {
            if (r == leave || t[r][enter] == 0.0) continue;
            const double f = t[r][enter];
            for (std::size_t k = 0; k < width; ++k) t[r][k] -= f * t[leave][k];
        }
        basis[leave] = enter;
    }

    Solution sol;
    sol.x.assign(n, 0.0);
    for (std::size_t r = 0; r < m; ++r)
        if (basis[r] < n) sol.x[basis[r]] = t[r][width - 1];
    sol.value = 0.0;
    for (std::size_t k = 0; k < n; ++k) sol.value += p.objective[k] * sol.x[k];
    return sol;
}

std::optional<Solution> enumerate_vertices(const Problem& p, const std::vector<double>& tie_break,
                                           double tie_tolerance, double feasibility_tolerance) {
    const std::size_t m = p.lhs.size(), n = p.n_vars;
    if (m < n) return std::nullopt;

    std::optional<Solution> best;
    double best_tie = 0.0;
    std::vector<std::size_t> pick(n);
    for (std::size_t k = 0; k < n; ++k) pick[k] = k;

    Eigen::MatrixXd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Eigen::VectorXd b(static_cast<Eigen::Index>(n));
    while (true) {
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t k = 0; k < n; ++k)
                a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = p.lhs[pick[r]][k];
            b(static_cast<Eigen::Index>(r)) = p.rhs[pick[r]];
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
        if (lu.rank() == static_cast<Eigen::Index>(n)) {
            const Eigen::VectorXd x = lu.solve(b);
            bool feasible = true;
            for (std::size_t r = 0; r < m && feasible; ++r) {
                double lhs = 0.0;
                for (std::size_t k = 0; k < n; ++k) lhs += p.lhs[r][k] * x(static_cast<Eigen::Index>(k));
                feasible = lhs <= p.rhs[r] + feasibility_tolerance;
            }
            if (feasible) {
                double value = 0.0, tie = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    value += p.objective[k] * x(static_cast<Eigen::Index>(k));
                    if (!tie_break.empty()) tie += tie_break[k] * x(static_cast<Eigen::Index>(k));
                }
                const bool better = !best || value > best->value + tie_tolerance ||
                                    (value >= best->value - tie_tolerance && tie < best_tie - tie_tolerance);
                if (better) {
                    best = Solution{value, std::vector<double>(x.data(), x.data() + n)};
                    best_tie = tie;
                }
            }
        }
        // Next n-combination of m rows in lexicographic order.
        std::size_t i = n;
        while (i > 0 && pick[i - 1] == m - n + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t k = i; k < n; ++k) pick[k] = pick[k - 1] + 1;
    }
    return best;
}

}  // namespace fairmiss::lp
