#include "fmnc/feasibility.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fmnc {

namespace {

// Dense phase-1 simplex with Bland's rule. Rows: dim equality constraints for
// the coordinates plus one for the weight sum. Columns: one weight per
// generator followed by one artificial per row. Minimizes the artificial sum;
// feasible iff the optimum is (numerically) zero.
class Phase1Simplex {
public:
    Phase1Simplex(std::span<const Vector> gens, const Vector& q) {
        rows_ = static_cast<std::size_t>(q.coords.size()) + 1;
        cols_ = gens.size() + rows_;
        tab_.assign(rows_, std::vector<double>(cols_ + 1, 0.0));
        basis_.resize(rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            double rhs = r + 1 < rows_ ? q.coords[r] : 1.0;
            for (std::size_t j = 0; j < gens.size(); ++j)
                tab_[r][j] = r + 1 < rows_ ? gens[j].coords[r] : 1.0;
            // flip rows with negative rhs so artificials start feasible
            if (rhs < 0.0) {
                rhs = -rhs;
                for (std::size_t j = 0; j < gens.size(); ++j) tab_[r][j] = -tab_[r][j];
            }
            tab_[r][gens.size() + r] = 1.0;
            tab_[r][cols_] = rhs;
            basis_[r] = gens.size() + r;
        }
        n_weights_ = gens.size();
    }

    // Returns the phase-1 objective (sum of artificials) at optimum.
    double solve(std::vector<double>& weights) {
        std::vector<double> reduced(cols_ + 1, 0.0);
        auto recompute_reduced = [&] {
            // objective row: sum of artificial rows still in play
            std::fill(reduced.begin(), reduced.end(), 0.0);
            for (std::size_t r = 0; r < rows_; ++r)
                if (basis_[r] >= n_weights_)
                    for (std::size_t c = 0; c <= cols_; ++c) reduced[c] += tab_[r][c];
        };
        recompute_reduced();
        const double eps = 1e-12;
        for (long iter = 0; iter < 10000; ++iter) {
            // Bland: smallest improving column among the weights and
            // non-basic artificials.
            std::size_t enter = cols_;
            for (std::size_t c = 0; c < cols_; ++c) {
                if (reduced[c] > eps && !is_basic(c)) { enter = c; break; }
            }
            if (enter == cols_) break;
            // ratio test, Bland tie-break on basis index
            std::size_t leave = rows_;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t r = 0; r < rows_; ++r) {
                if (tab_[r][enter] > eps) {
                    const double ratio = tab_[r][cols_] / tab_[r][enter];
                    if (ratio < best - eps ||
                        (ratio < best + eps && (leave == rows_ || basis_[r] < basis_[leave]))) {
                        best = ratio;
                        leave = r;
                    }
                }
            }
            if (leave == rows_) break; // unbounded cannot happen with artificials
            pivot(leave, enter);
            recompute_reduced();
        }
        weights.assign(n_weights_, 0.0);
        for (std::size_t r = 0; r < rows_; ++r)
            if (basis_[r] < n_weights_) weights[basis_[r]] = tab_[r][cols_];
        double objective = 0.0;
        for (std::size_t r = 0; r < rows_; ++r)
            if (basis_[r] >= n_weights_) objective += tab_[r][cols_];
        return objective;
    }

private:
    bool is_basic(std::size_t c) const {
        for (std::size_t r = 0; r < rows_; ++r)
            if (basis_[r] == c) return true;
        return false;
    }

    void pivot(std::size_t leave, std::size_t enter) {
        const double piv = tab_[leave][enter];
        for (std::size_t c = 0; c <= cols_; ++c) tab_[leave][c] /= piv;
        for (std::size_t r = 0; r < rows_; ++r) {
            if (r == leave) continue;
            const double f = tab_[r][enter];
            if (f == 0.0) continue;
            for (std::size_t c = 0; c <= cols_; ++c) tab_[r][c] -= f * tab_[leave][c];
        }
        basis_[leave] = enter;
    }

    std::vector<std::vector<double>> tab_;
    std::vector<std::size_t> basis_;
    std::size_t rows_ = 0, cols_ = 0, n_weights_ = 0;
};

} // namespace

ConvexMembership convex_membership(std::span<const Vector> generators, const Vector& q,
                                   double tol) {
    if (generators.empty()) throw std::invalid_argument("convex_membership needs generators");
    for (const Vector& g : generators) require_same_space(g, q);

    Phase1Simplex lp(generators, q);
    ConvexMembership out;
    const double objective = lp.solve(out.weights);

    // Witness verification: recompute the combination regardless of the
    // solver's claim.
    double wsum = 0.0;
    std::vector<double> recon(q.coords.size(), 0.0);
    for (std::size_t j = 0; j < generators.size(); ++j) {
        if (out.weights[j] < -tol) { out.inside = false; return out; }
        wsum += out.weights[j];
        for (std::size_t i = 0; i < recon.size(); ++i)
            recon[i] += out.weights[j] * generators[j].coords[i];
    }
    out.residual = std::abs(wsum - 1.0);
    for (std::size_t i = 0; i < recon.size(); ++i)
        out.residual = std::max(out.residual, std::abs(recon[i] - q.coords[i]));
    out.inside = objective <= tol && out.residual <= tol;
    return out;
}

} // namespace fmnc
