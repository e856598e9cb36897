#include "qevolve/sparse.hpp"

#include <algorithm>
#include <numeric>

#include "qevolve/errors.hpp"

namespace qevolve {

SymmetricCsr SymmetricCsr::from_triplets(int n, const std::vector<int>& rows,
                                         const std::vector<int>& cols,
                                         const Vec& values)
{
    QEVOLVE_REQUIRE(rows.size() == cols.size() && rows.size() == values.size(),
                    "triplet arrays must have equal length");
    SymmetricCsr m;
    m.n_ = n;

    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (rows[a] != rows[b])
            return rows[a] < rows[b];
        return cols[a] < cols[b];
    });

    m.ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (std::size_t k = 0; k < order.size(); ++k) {
        const std::size_t t = order[k];
        QEVOLVE_REQUIRE(rows[t] >= 0 && rows[t] < n && cols[t] >= 0 && cols[t] < n,
                        "triplet index out of range");
        if (!m.col_.empty() && rows[t] == rows[order[k - 1]] &&
            cols[t] == cols[order[k - 1]]) {
            m.val_.back() += values[t];
            continue;
        }
        m.col_.push_back(cols[t]);
        m.val_.push_back(values[t]);
        ++m.ptr_[static_cast<std::size_t>(rows[t]) + 1];
    }
    for (int i = 0; i < n; ++i)
        m.ptr_[static_cast<std::size_t>(i) + 1] += m.ptr_[static_cast<std::size_t>(i)];
    return m;
}

void SymmetricCsr::multiply(const Vec& x, Vec& y) const
{
    QEVOLVE_REQUIRE(static_cast<int>(x.size()) == n_, "matvec: dimension mismatch");
    y.assign(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int k = ptr_[static_cast<std::size_t>(i)];
             k < ptr_[static_cast<std::size_t>(i) + 1]; ++k)
            s += val_[static_cast<std::size_t>(k)] *
                 x[static_cast<std::size_t>(col_[static_cast<std::size_t>(k)])];
        y[static_cast<std::size_t>(i)] = s;
    }
}

Vec SymmetricCsr::multiply(const Vec& x) const
{
    Vec y;
    multiply(x, y);
    return y;
}

double SymmetricCsr::quadratic(const Vec& x) const
{
    QEVOLVE_REQUIRE(static_cast<int>(x.size()) == n_, "quadratic: dimension mismatch");
    double q = 0.0;
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int k = ptr_[static_cast<std::size_t>(i)];
             k < ptr_[static_cast<std::size_t>(i) + 1]; ++k)
            s += val_[static_cast<std::size_t>(k)] *
                 x[static_cast<std::size_t>(col_[static_cast<std::size_t>(k)])];
        q += x[static_cast<std::size_t>(i)] * s;
    }
    return q;
}

double SymmetricCsr::row_dot(int i, const Vec& x) const
{
    double s = 0.0;
    for (int k = ptr_[static_cast<std::size_t>(i)];
         k < ptr_[static_cast<std::size_t>(i) + 1]; ++k)
        s += val_[static_cast<std::size_t>(k)] *
             x[static_cast<std::size_t>(col_[static_cast<std::size_t>(k)])];
    return s;
}

} // namespace qevolve
