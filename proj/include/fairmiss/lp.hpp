#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace fairmiss::lp {

// maximize c.x  subject to  A x <= b  (row-major A, one row per constraint).
struct Problem {
    std::size_t n_vars = 0;
    std::vector<double> objective;              // c
    std::vector<std::vector<double>> lhs;       // A
    std::vector<double> rhs;                    // b

    void add_constraint(std::vector<double> row, double bound);
    // 0 <= x_k <= 1 for every variable.
    void add_unit_box();
};

struct Solution {
    double value = 0.0;
    std::vector<double> x;
};

// Dense tableau simplex with Bland's rule, for problems whose constraints are
// all of the form A x <= b with b >= 0 and x >= 0 implied (origin feasible).
// Throws ParameterError when some b < 0; returns nullopt when unbounded.
std::optional<Solution> simplex_maximize(const Problem& p);

// Exhaustive enumeration of basic solutions: every n-subset of constraint rows
// is solved as an equality system and kept if feasible. Among optimal vertices
// (within tie_tolerance) the one minimizing `tie_break . x` wins. Returns
// nullopt when the polytope has no vertex.
std::optional<Solution> enumerate_vertices(const Problem& p, const std::vector<double>& tie_break = {},
                                           double tie_tolerance = 1e-12, double feasibility_tolerance = 1e-10);

}  // namespace fairmiss::lp
