#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace powermdp {

/// Dense two-phase simplex for the small LPs used by the non-domination
/// checks: max c'x subject to Ax <= b, x >= 0. Dimensions here are tiny
/// (variables ~ |S|, constraints ~ |F(s)|), so a dense tableau is the
/// right tool. Classic KACTL-style formulation.
class LpSolver {
public:
    using Row = std::vector<double>;

    LpSolver(const std::vector<Row>& A, const Row& b, const Row& c)
        : m_(static_cast<int>(b.size())),
          n_(static_cast<int>(c.size())),
          N_(n_ + 1),
          B_(m_),
          D_(m_ + 2, Row(n_ + 2)) {
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < n_; ++j) D_[i][j] = A[i][j];
        for (int i = 0; i < m_; ++i) {
            B_[i] = n_ + i;
            D_[i][n_] = -1;
            D_[i][n_ + 1] = b[i];
        }
        for (int j = 0; j < n_; ++j) {
            N_[j] = j;
            D_[m_][j] = -c[j];
        }
        N_[n_] = -1;
        D_[m_ + 1][n_] = 1;
    }

    /// Maximum objective value; x receives an optimizer. Returns +inf when
    /// unbounded and -inf when infeasible.
    double solve(std::vector<double>& x) {
        int r = 0;
        for (int i = 1; i < m_; ++i)
            if (D_[i][n_ + 1] < D_[r][n_ + 1]) r = i;
        if (D_[r][n_ + 1] < -kEps) {
            pivot(r, n_);
            if (!simplex(2) || D_[m_ + 1][n_ + 1] < -kEps)
                return -std::numeric_limits<double>::infinity();
            for (int i = 0; i < m_; ++i)
                if (B_[i] == -1) {
                    int s = 0;
                    for (int j = 1; j <= n_; ++j)
                        if (std::pair(D_[i][j], N_[j]) < std::pair(D_[i][s], N_[s]))
                            s = j;
                    pivot(i, s);
                }
        }
        bool ok = simplex(1);
        x.assign(n_, 0.0);
        for (int i = 0; i < m_; ++i)
            if (B_[i] < n_) x[B_[i]] = D_[i][n_ + 1];
        return ok ? D_[m_][n_ + 1] : std::numeric_limits<double>::infinity();
    }

private:
    static constexpr double kEps = 1e-10;

    void pivot(int r, int s) {
        double* a = D_[r].data();
        double inv = 1.0 / a[s];
        for (int i = 0; i < m_ + 2; ++i)
            if (i != r && std::abs(D_[i][s]) > kEps) {
                double* b = D_[i].data();
                double inv2 = b[s] * inv;
                for (int j = 0; j < n_ + 2; ++j) b[j] -= a[j] * inv2;
                b[s] = a[s] * inv2;
            }
        for (int j = 0; j < n_ + 2; ++j)
            if (j != s) D_[r][j] *= inv;
        for (int i = 0; i < m_ + 2; ++i)
            if (i != r) D_[i][s] *= -inv;
        D_[r][s] = inv;
        std::swap(B_[r], N_[s]);
    }

    bool simplex(int phase) {
        int goal = m_ + phase - 1;
        for (;;) {
            int s = -1;
            for (int j = 0; j <= n_; ++j) {
                if (N_[j] == -phase) continue;
                if (s == -1 ||
                    std::pair(D_[goal][j], N_[j]) < std::pair(D_[goal][s], N_[s]))
                    s = j;
            }
            if (D_[goal][s] >= -kEps) return true;
            int r = -1;
            for (int i = 0; i < m_; ++i) {
                if (D_[i][s] <= kEps) continue;
                if (r == -1 || std::pair(D_[i][n_ + 1] / D_[i][s], B_[i]) <
                                   std::pair(D_[r][n_ + 1] / D_[r][s], B_[r]))
                    r = i;
            }
            if (r == -1) return false;  // unbounded
            pivot(r, s);
        }
    }

    int m_, n_;
    std::vector<int> N_, B_;
    std::vector<Row> D_;
};

/// Strict-optimality test used for non-domination of vector sets: does some
/// reward r with ||r||_inf <= 1 make `candidate` beat every vector in
/// `rivals` by a positive margin?  Maximizes e subject to
/// (candidate - rival)'r >= e for all rivals. Returns the optimum margin and
/// the witnessing reward.
struct StrictOptResult {
    double margin = 0.0;
    std::vector<double> witness;  // reward vector in [-1, 1]^dim
};

inline StrictOptResult max_strict_margin(
    const std::vector<double>& candidate,
    const std::vector<std::vector<double>>& rivals) {
    const int dim = static_cast<int>(candidate.size());
    if (rivals.empty()) {
        // No rivals: strictly optimal with unbounded margin; report 1.
        return {1.0, std::vector<double>(dim, 0.0)};
    }
    // Variables: y_i = r_i + 1 in [0, 2] (i < dim), then e+ and e-.
    // Constraint per rival g = candidate - rival:  e+ - e- - g'y <= -g'1.
    // Box: y_i <= 2. Objective: max e+ - e-.
    const int nvar = dim + 2;
    std::vector<std::vector<double>> A;
    std::vector<double> b, c(nvar, 0.0);
    c[dim] = 1.0;
    c[dim + 1] = -1.0;
    for (const auto& rival : rivals) {
        std::vector<double> row(nvar, 0.0);
        double rhs = 0.0;
        for (int i = 0; i < dim; ++i) {
            double g = candidate[i] - rival[i];
            row[i] = -g;
            rhs -= g;  // -g'1
        }
        row[dim] = 1.0;
        row[dim + 1] = -1.0;
        A.push_back(std::move(row));
        b.push_back(rhs);
    }
    for (int i = 0; i < dim; ++i) {
        std::vector<double> row(nvar, 0.0);
        row[i] = 1.0;
        A.push_back(std::move(row));
        b.push_back(2.0);
    }
    // |e| cannot exceed max |g'r| over the box; cap both parts so the LP
    // stays bounded when the margin is negative.
    double cap = 1.0;
    for (const auto& rival : rivals) {
        double norm1 = 0.0;
        for (int i = 0; i < dim; ++i) norm1 += std::abs(candidate[i] - rival[i]);
        cap = std::max(cap, norm1 + 1.0);
    }
    for (int part = 0; part < 2; ++part) {
        std::vector<double> row(nvar, 0.0);
        row[dim + part] = 1.0;
        A.push_back(std::move(row));
        b.push_back(cap);
    }
    std::vector<double> x;
    double value = LpSolver(A, b, c).solve(x);
    StrictOptResult out;
    out.margin = value;
    out.witness.resize(dim);
    for (int i = 0; i < dim; ++i) out.witness[i] = x[i] - 1.0;
    return out;
}

}  // namespace powermdp
