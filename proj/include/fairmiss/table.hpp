#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace fairmiss {

// Exact joint probability table over (s, x, y) with a finite x-domain.
// x is an index into `domain`; y is 0 or 1.
class DiscreteTable {
public:
    DiscreteTable(std::size_t n_groups, std::vector<std::string> domain);

    std::size_t groups() const { return n_groups_; }
    std::size_t domain_size() const { return domain_.size(); }
    const std::vector<std::string>& domain() const { return domain_; }

    double& at(std::size_t s, std::size_t x, int y) { return p_[index(s, x, y)]; }
    double at(std::size_t s, std::size_t x, int y) const { return p_[index(s, x, y)]; }

    double total() const;
    // Pr(Y = y, S = s).
    double cell_mass(std::size_t s, int y) const;
    // Index of a domain value; throws ParameterError when absent.
    std::size_t value_index(const std::string& value) const;

private:
    std::size_t index(std::size_t s, std::size_t x, int y) const {
        return (s * domain_.size() + x) * 2 + static_cast<std::size_t>(y);
    }

    std::size_t n_groups_;
    std::vector<std::string> domain_;
    std::vector<double> p_;
};

}  // namespace fairmiss
