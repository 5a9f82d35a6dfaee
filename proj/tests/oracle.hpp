#pragma once

// Reference computations used only by the tests.  They rebuild matrices from
// scratch and solve them by routes the library does not use.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <random>
#include <vector>

namespace oracle {

struct Jump {
    int from, to;
    double rate;
    double q;  // increment of the tilted observable
};

inline Eigen::MatrixXd matrix(int n, const std::vector<Jump>& jumps, double lambda = 0.0)
{
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (const auto& j : jumps) {
        m(j.to, j.from) += j.rate * std::exp(lambda * j.q);
        m(j.from, j.from) -= j.rate;
    }
    return m;
}

inline double dominant(const Eigen::MatrixXd& m)
{
    Eigen::EigenSolver<Eigen::MatrixXd> es(m);
    double best = -1e300;
    for (int i = 0; i < es.eigenvalues().size(); ++i) best = std::max(best, es.eigenvalues()[i].real());
    return best;
}

// Null vector of the generator from the smallest singular value.
inline Eigen::VectorXd stationary(const Eigen::MatrixXd& m)
{
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    Eigen::VectorXd p = svd.matrixV().col(m.cols() - 1);
    return p / p.sum();
}

// Open exclusion chain with occupations stored as an int vector per state,
// state index = sum occ[i] 2^i.  q counts left-boundary flux.
inline std::vector<Jump> ssep_jumps(int L, double a, double g, double b, double d, double r = 1.0)
{
    std::vector<Jump> out;
    int n = 1 << L;
    for (int s = 0; s < n; ++s) {
        std::vector<int> occ(L);
        for (int i = 0; i < L; ++i) occ[i] = (s >> i) & 1;
        auto index = [&](const std::vector<int>& o) {
            int k = 0;
            for (int i = 0; i < L; ++i) k += o[i] << i;
            return k;
        };
        auto push = [&](std::vector<int> o, double rate, double q) {
            if (rate > 0) out.push_back({s, index(o), rate, q});
        };
        {
            auto o = occ;
            o[0] = 1 - o[0];
            push(o, occ[0] ? g : a, occ[0] ? -1.0 : 1.0);
        }
        for (int i = 0; i + 1 < L; ++i) {
            if (occ[i] != occ[i + 1]) {
                auto o = occ;
                std::swap(o[i], o[i + 1]);
                push(o, occ[i] ? 1.0 : r, 0.0);
            }
        }
        {
            auto o = occ;
            o[L - 1] = 1 - o[L - 1];
            push(o, occ[L - 1] ? b : d, 0.0);
        }
    }
    return out;
}

// <n_i>, <n_i n_j>, <n_i n_j n_k> from a probability vector over bitmasks.
inline double moment(const Eigen::VectorXd& p, const std::vector<int>& sites)
{
    double s = 0.0;
    for (int c = 0; c < p.size(); ++c) {
        bool all = true;
        for (int i : sites) all = all && ((c >> (i - 1)) & 1);
        if (all) s += p[c];
    }
    return s;
}

}  // namespace oracle
