#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace tspn {

/// Revised primal simplex for  min c^T x  s.t.  A x = b, x >= 0  with a small
/// number of rows and columns that may be generated on demand.  Bland's rule
/// is used for both the entering and the leaving variable.
class ColumnLP {
public:
    using Column = std::pair<Eigen::VectorXd, double>;  // (a_j, c_j)
    /// Given the row duals, return a column with negative reduced cost, if any.
    using Pricer = std::function<std::optional<Column>(const Eigen::VectorXd& duals)>;

    enum class Status { Optimal, Unbounded, IterationLimit };

    explicit ColumnLP(Eigen::VectorXd b);

    int add_column(const Eigen::VectorXd& a, double cost);
    /// Starting basis; B^{-1} b must be non-negative.
    void set_basis(std::vector<int> columns);

    Status solve(const Pricer& pricer, double tol = 1e-9, int max_iter = 100000);

    int rows() const { return static_cast<int>(b_.size()); }
    int columns() const { return static_cast<int>(cost_.size()); }
    double value(int column) const;
    double objective() const;
    const Eigen::VectorXd& duals() const { return y_; }
    const std::vector<int>& basis() const { return basis_; }
    int iterations() const { return iters_; }

private:
    void factor();

    Eigen::VectorXd b_;
    std::vector<Eigen::VectorXd> cols_;
    std::vector<double> cost_;
    std::vector<int> basis_;
    std::vector<int> where_;  // column -> basis row or -1
    Eigen::VectorXd xb_;
    Eigen::VectorXd y_;
    Eigen::MatrixXd B_;
    int iters_ = 0;
};

}  // namespace tspn
