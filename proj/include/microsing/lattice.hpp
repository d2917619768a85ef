#pragma once
// Truncated frequency lattice {k in Z^d : |k|_inf <= N} on the flat torus T^d = (R/2piZ)^d.

#include <array>
#include <compare>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace microsing {

struct Mode {
    int k1 = 0;
    int k2 = 0;
    auto operator<=>(const Mode&) const = default;
    Mode operator+(const Mode& o) const noexcept { return {k1 + o.k1, k2 + o.k2}; }
    Mode operator-(const Mode& o) const noexcept { return {k1 - o.k1, k2 - o.k2}; }
    Mode operator-() const noexcept { return {-k1, -k2}; }
};

using Point = std::array<double, 2>;
using Direction = std::array<double, 2>;

class FrequencyLattice {
public:
    FrequencyLattice(int dim, int bandlimit);

    int dim() const noexcept { return dim_; }
    int bandlimit() const noexcept { return N_; }
    int side() const noexcept { return 2 * N_ + 1; }
    std::size_t size() const noexcept;

    bool contains(Mode k) const noexcept;
    // d = 1: k1 + N; d = 2: row-major (k1 + N)(2N + 1) + (k2 + N).
    std::size_t index(Mode k) const;
    Mode mode(std::size_t i) const noexcept;
    int sup_norm(std::size_t i) const noexcept;

    double eigenvalue(std::size_t i) const noexcept { return tables_->lambda[i]; }
    const std::vector<double>& eigenvalues() const noexcept { return tables_->lambda; }

    // Distinct eigenvalues, ascending; graded norms only depend on sums per class.
    std::size_t class_count() const noexcept { return tables_->class_lambda.size(); }
    const std::vector<int>& eigen_class() const noexcept { return tables_->cls; }
    const std::vector<double>& class_eigenvalue() const noexcept { return tables_->class_lambda; }

    std::string describe() const;

    bool operator==(const FrequencyLattice& o) const noexcept { return dim_ == o.dim_ && N_ == o.N_; }
    bool operator!=(const FrequencyLattice& o) const noexcept { return !(*this == o); }

private:
    struct Tables {
        std::vector<double> lambda;
        std::vector<int> cls;
        std::vector<double> class_lambda;
    };
    int dim_;
    int N_;
    std::shared_ptr<const Tables> tables_;
};

void require_same_lattice(const FrequencyLattice& a, const FrequencyLattice& b, const char* where);

}  // namespace microsing
