#pragma once

#include <vector>

#include "qevolve/vec.hpp"

namespace qevolve {

/// Sparse symmetric matrix in CSR form. Built from triplets that cover the
/// full pattern (duplicates are summed).
class SymmetricCsr {
public:
    SymmetricCsr() = default;

    static SymmetricCsr from_triplets(int n,
                                      const std::vector<int>& rows,
                                      const std::vector<int>& cols,
                                      const Vec& values);

    int rows() const { return n_; }

    void multiply(const Vec& x, Vec& y) const;
    Vec multiply(const Vec& x) const;

    /// x^T K x
    double quadratic(const Vec& x) const;

    /// (K x)_i for a single row.
    double row_dot(int i, const Vec& x) const;

    std::size_t nonzeros() const { return val_.size(); }

private:
    int n_ = 0;
    std::vector<int> ptr_;
    std::vector<int> col_;
    Vec val_;
};

} // namespace qevolve
