#include "tspn/simplex.hpp"

#include <Eigen/LU>
#include <limits>
#include <stdexcept>

namespace tspn {

ColumnLP::ColumnLP(Eigen::VectorXd b) : b_(std::move(b)) {}

int ColumnLP::add_column(const Eigen::VectorXd& a, double cost) {
    if (a.size() != b_.size()) throw std::invalid_argument("ColumnLP: column has wrong length");
    cols_.push_back(a);
    cost_.push_back(cost);
    where_.push_back(-1);
    return columns() - 1;
}

void ColumnLP::set_basis(std::vector<int> columns) {
    if (static_cast<int>(columns.size()) != rows()) throw std::invalid_argument("ColumnLP: basis size mismatch");
    for (int& w : where_) w = -1;
    basis_ = std::move(columns);
    for (int i = 0; i < rows(); ++i) where_[basis_[i]] = i;
    factor();
    for (int i = 0; i < rows(); ++i)
        if (xb_[i] < -1e-9) throw std::invalid_argument("ColumnLP: starting basis is not primal feasible");
}

void ColumnLP::factor() {
    const int m = rows();
    B_.resize(m, m);
    Eigen::VectorXd cb(m);
    for (int i = 0; i < m; ++i) {
        B_.col(i) = cols_[basis_[i]];
        cb[i] = cost_[basis_[i]];
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B_);
    xb_ = lu.solve(b_);
    y_ = lu.transpose().solve(cb);
    for (int i = 0; i < m; ++i)
        if (xb_[i] < 0 && xb_[i] > -1e-11) xb_[i] = 0;
}

double ColumnLP::value(int column) const {
    int r = where_.at(column);
    return r < 0 ? 0.0 : xb_[r];
}

double ColumnLP::objective() const {
    double s = 0.0;
    for (int i = 0; i < rows(); ++i) s += cost_[basis_[i]] * xb_[i];
    return s;
}

ColumnLP::Status ColumnLP::solve(const Pricer& pricer, double tol, int max_iter) {
    const int m = rows();
    for (iters_ = 0; iters_ < max_iter; ++iters_) {
        int enter = -1;
        for (int j = 0; j < columns(); ++j) {
            if (where_[j] >= 0) continue;
            if (cost_[j] - y_.dot(cols_[j]) < -tol) {
                enter = j;
                break;
            }
        }
        if (enter < 0 && pricer) {
            if (auto col = pricer(y_)) {
                if (col->second - y_.dot(col->first) < -tol) enter = add_column(col->first, col->second);
            }
        }
        if (enter < 0) return Status::Optimal;

        Eigen::VectorXd dir = B_.partialPivLu().solve(cols_[enter]);
        int leave = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            if (dir[i] <= 1e-12) continue;
            double ratio = std::max(0.0, xb_[i]) / dir[i];
            if (ratio < best - 1e-14 || (ratio <= best + 1e-14 && leave >= 0 && basis_[i] < basis_[leave])) {
                best = std::min(best, ratio);
                leave = i;
            }
        }
        if (leave < 0) return Status::Unbounded;
        where_[basis_[leave]] = -1;
        basis_[leave] = enter;
        where_[enter] = leave;
        factor();
    }
    return Status::IterationLimit;
}

}  // namespace tspn
