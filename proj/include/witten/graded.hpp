#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace witten {

// Block-scale clustering of graded symmetric matrices: M = Omega (M' + O(h)) Omega
// with Omega = diag(eps_j I_{r_j}). Rescaling by Omega^{-1} exposes the diagonal
// blocks; their spectra, scaled back by eps_j^2, locate the clusters. The residual
// off-diagonal norm of the rescaled matrix is the O(h) certificate.
struct GradedClusters {
    struct Block {
        double scale2;                   // eps_j^2
        std::vector<double> eigenvalues;  // of the rescaled diagonal block M_j
    };
    std::vector<Block> blocks;
    double residual = 0;  // max norm of off-diagonal blocks after rescaling

    // predicted location of eigenvalue i of block j
    double predicted(int j, int i) const { return blocks[j].scale2 * blocks[j].eigenvalues[i]; }
};

inline GradedClusters graded_cluster(const Eigen::MatrixXd& M, const std::vector<int>& block_sizes,
                                     const std::vector<double>& eps) {
    const auto n = M.rows();
    if (M.cols() != n) throw std::invalid_argument("matrix not square");
    long sum = 0;
    for (int r : block_sizes) sum += r;
    if (sum != n) throw std::invalid_argument("block sizes do not sum to the matrix dimension");
    if (eps.size() != block_sizes.size()) throw std::invalid_argument("one scale per block");
    if (eps.empty() || eps[0] != 1.0) throw std::invalid_argument("eps_1 must be 1");
    for (size_t j = 1; j < eps.size(); ++j)
        if (!(eps[j] < eps[j - 1]) || eps[j] <= 0)
            throw std::invalid_argument("eps must be strictly decreasing and positive");
    if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * M.cwiseAbs().maxCoeff())
        throw std::invalid_argument("matrix not symmetric");

    Eigen::VectorXd inv(n);
    {
        long at = 0;
        for (size_t j = 0; j < block_sizes.size(); ++j)
            for (int k = 0; k < block_sizes[j]; ++k) inv[at++] = 1.0 / eps[j];
    }
    Eigen::MatrixXd R = inv.asDiagonal() * M * inv.asDiagonal();

    GradedClusters out;
    long at = 0;
    for (size_t j = 0; j < block_sizes.size(); ++j) {
        int r = block_sizes[j];
        Eigen::MatrixXd D = R.block(at, at, r, r);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D);
        if (es.info() != Eigen::Success) throw std::runtime_error("block eigensolve failed");
        double scale = D.cwiseAbs().maxCoeff();
        for (int i = 0; i < r; ++i)
            if (std::abs(es.eigenvalues()[i]) < 1e-12 * std::max(scale, 1.0))
                throw std::invalid_argument("diagonal block numerically singular (outside D_r0)");
        GradedClusters::Block blk;
        blk.scale2 = eps[j] * eps[j];
        for (int i = 0; i < r; ++i) blk.eigenvalues.push_back(es.eigenvalues()[i]);
        out.blocks.push_back(std::move(blk));
        at += r;
    }
    // residual: largest off-diagonal block entry of the rescaled matrix
    at = 0;
    for (size_t j = 0; j < block_sizes.size(); ++j) {
        long bt = 0;
        for (size_t k = 0; k < block_sizes.size(); ++k) {
            if (k != j) {
                double v = R.block(at, bt, block_sizes[j], block_sizes[k]).cwiseAbs().maxCoeff();
                out.residual = std::max(out.residual, v);
            }
            bt += block_sizes[k];
        }
        at += block_sizes[j];
    }
    return out;
}

}  // namespace witten
