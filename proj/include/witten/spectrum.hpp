#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <vector>

#include "witten/potential.hpp"

namespace witten {

// Central-difference discretization of Delta_V = -h^2 lap + |grad V|^2 - h lap V
// on the spec box with homogeneous Dirichlet boundary, interior nodes only.
struct DiscreteOperator {
    int dim = 0;
    std::array<long, 3> n{1, 1, 1};          // interior nodes per axis
    std::array<double, 3> lo{0, 0, 0}, dx{1, 1, 1};
    double h = 0;
    Eigen::SparseMatrix<double> A;           // symmetric, 2d+1 nonzeros per interior row
    double norm_est = 0;                     // Gershgorin bound

    long size() const { return A.rows(); }
    long index(const std::array<long, 3>& c) const { return (c[2] * n[1] + c[1]) * n[0] + c[0]; }
    std::array<long, 3> coords(long id) const {
        return {id % n[0], (id / n[0]) % n[1], id / (n[0] * n[1])};
    }
    std::vector<double> point(long id) const {
        auto c = coords(id);
        std::vector<double> x(dim);
        for (int i = 0; i < dim; ++i) x[i] = lo[i] + dx[i] * (c[i] + 1);
        return x;
    }
};

inline DiscreteOperator assemble(const PotentialSpec& spec, double h, long npts) {
    if (spec.dim > 3) throw SpecError(ErrorClass::Dimension, 0, "discretization limited to d <= 3");
    if (npts < 16) throw SpecError(ErrorClass::Invariant, 0, "grid too small (n < 16)");
    long total = 1;
    for (int i = 0; i < spec.dim; ++i) total *= npts;
    if (total > (1L << 22))
        throw SpecError(ErrorClass::Dimension, 0, "memory estimate exceeded for the requested grid");

    DiscreteOperator op;
    op.dim = spec.dim;
    op.h = h;
    for (int i = 0; i < spec.dim; ++i) {
        op.n[i] = npts;
        op.lo[i] = to_double(spec.box[i].first);
        double hi = to_double(spec.box[i].second);
        op.dx[i] = (hi - op.lo[i]) / static_cast<double>(npts + 1);
    }

    // potential terms sampled from exact polynomials
    RatPoly grad2(spec.dim), lap(spec.dim);
    for (int i = 0; i < spec.dim; ++i) {
        RatPoly gi = spec.V.derivative(i);
        grad2 = grad2 + gi * gi;
        lap = lap + gi.derivative(i);
    }

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(total * (2 * spec.dim + 1));
    double kin_diag = 0;
    for (int i = 0; i < spec.dim; ++i) kin_diag += 2.0 * h * h / (op.dx[i] * op.dx[i]);
    for (long id = 0; id < total; ++id) {
        auto x = op.point(id);
        double w = grad2.evaluate<double>(x) - h * lap.evaluate<double>(x);
        trip.emplace_back(id, id, kin_diag + w);
        auto c = op.coords(id);
        for (int ax = 0; ax < spec.dim; ++ax) {
            double off = -h * h / (op.dx[ax] * op.dx[ax]);
            if (c[ax] + 1 < op.n[ax]) {
                auto cc = c;
                cc[ax] += 1;
                long nb = op.index(cc);
                trip.emplace_back(id, nb, off);
                trip.emplace_back(nb, id, off);
            }
        }
    }
    op.A.resize(total, total);
    op.A.setFromTriplets(trip.begin(), trip.end());
    op.A.makeCompressed();

    // Gershgorin estimate
    for (long id = 0; id < total; ++id) {
        double row = 0;
        for (Eigen::SparseMatrix<double>::InnerIterator it(op.A, id); it; ++it)
            row += std::abs(it.value());
        op.norm_est = std::max(op.norm_est, row);
    }
    return op;
}

// --- shift-inverted Lanczos with deflation ------------------------------------------

struct EigenPairs {
    std::vector<double> values;
    std::vector<Eigen::VectorXd> vectors;
    std::vector<double> residuals;  // ||A v - lambda v||
    int iterations = 0;
    double floor = 0;  // floating-point floor: values below are reported as clipped
    std::vector<bool> below_floor;
};

// Samples exp(-(V - min V)/h) on the grid; the ground state up to discretization.
inline Eigen::VectorXd ground_state_seed(const PotentialSpec& spec, const DiscreteOperator& op) {
    Eigen::VectorXd v(op.size());
    double vmin = std::numeric_limits<double>::infinity();
    for (long id = 0; id < op.size(); ++id)
        vmin = std::min(vmin, spec.V.evaluate<double>(op.point(id)));
    for (long id = 0; id < op.size(); ++id)
        v[id] = std::exp(-(spec.V.evaluate<double>(op.point(id)) - vmin) / op.h);
    v.normalize();
    return v;
}

// k algebraically smallest eigenpairs through Lanczos on (A - sigma I)^{-1} with
// full reorthogonalization; sigma sits slightly below the spectrum so the smallest
// eigenvalues map to the largest of the inverse.
inline EigenPairs smallest_eigs(const DiscreteOperator& op, int k, double tol,
                                const Eigen::VectorXd* seed = nullptr, int max_iter = 400) {
    const long n = op.size();
    if (k >= n / 4) throw std::invalid_argument("k must be small against the matrix dimension");
    double sigma = -1e-8 * op.norm_est - 1e-300;
    Eigen::SparseMatrix<double> shifted = op.A;
    for (long i = 0; i < n; ++i) shifted.coeffRef(i, i) -= sigma;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(shifted);
    if (solver.info() != Eigen::Success)
        throw SpecError(ErrorClass::Convergence, 0, "sparse factorization failed");

    int m = std::min<long>(std::max(4 * k + 20, 40), n);
    max_iter = std::min<long>(max_iter, n);
    std::vector<Eigen::VectorXd> basis;
    std::vector<double> alpha, beta;
    Eigen::VectorXd v = seed ? *seed : Eigen::VectorXd::Ones(n);
    v.normalize();
    basis.push_back(v);

    EigenPairs out;
    Eigen::VectorXd w;
    for (int it = 0; it < max_iter; ++it) {
        w = solver.solve(basis.back());
        alpha.push_back(basis.back().dot(w));
        // full reorthogonalization (twice for stability)
        for (int pass = 0; pass < 2; ++pass)
            for (auto& b : basis) w -= b.dot(w) * b;
        double bnorm = w.norm();
        beta.push_back(bnorm);
        bool breakdown = bnorm < 1e-14;
        if (!breakdown) {
            w /= bnorm;
            basis.push_back(w);
        }

        int mm = static_cast<int>(alpha.size());
        bool last = breakdown || mm >= m || it == max_iter - 1;
        if (mm >= std::max(2 * k, 8) || last) {
            // Rayleigh-Ritz on the Krylov basis (use the explicit projection for robustness)
            Eigen::MatrixXd T = Eigen::MatrixXd::Zero(mm, mm);
            for (int i = 0; i < mm; ++i) {
                T(i, i) = alpha[i];
                if (i + 1 < mm) T(i, i + 1) = T(i + 1, i) = beta[i];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
            // largest eigenvalues of the inverse -> smallest of A
            std::vector<int> order(mm);
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(),
                      [&](int a2, int b2) { return es.eigenvalues()[a2] > es.eigenvalues()[b2]; });
            out.values.clear();
            out.vectors.clear();
            out.residuals.clear();
            int take = std::min(k, mm);
            bool converged = true;
            for (int q = 0; q < take; ++q) {
                double mu = es.eigenvalues()[order[q]];
                if (std::abs(mu) < 1e-300) {
                    converged = false;
                    break;
                }
                Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
                for (int i = 0; i < mm; ++i) y += es.eigenvectors()(i, order[q]) * basis[i];
                y.normalize();
                double lam = sigma + 1.0 / mu;
                double res = (op.A * y - lam * y).norm();
                out.values.push_back(lam);
                out.vectors.push_back(std::move(y));
                out.residuals.push_back(res);
                converged &= res <= tol * op.norm_est;
            }
            out.iterations = it + 1;
            if ((converged && take == k) || last) {
                if (!converged && last) {
                    std::ostringstream os;
                    os << "eigensolver did not converge; best residuals:";
                    for (double r : out.residuals) os << " " << r;
                    throw SpecError(ErrorClass::Convergence, 0, os.str());
                }
                break;
            }
        }
        if (breakdown) break;
    }
    out.floor = 1e-14 * op.norm_est;
    for (double v2 : out.values) out.below_floor.push_back(std::abs(v2) < out.floor);
    return out;
}

// --- h sweep -------------------------------------------------------------------------

struct SweepRow {
    double h = 0;
    long n = 0;
    std::vector<double> values, residuals;
    std::vector<bool> below_floor;
    std::vector<int> branch;  // branch id per eigenvalue, tracked by eigenvector overlap
    int iterations = 0;
    bool failed = false;
    std::string error;
};

struct SpectralTable {
    std::vector<SweepRow> rows;
    int k = 0;
};

// Default grid rule: n = max(512, ceil(20 * box_width / h^{1/nu_under})), capped by dim.
inline long default_n_rule(const PotentialSpec& spec, double h) {
    double width = 0;
    for (auto& [lo, hi] : spec.box) width = std::max(width, to_double(hi) - to_double(lo));
    int nu_under = 2;
    if (!spec.critical_points.empty()) nu_under = nu_stats(spec.critical_points).nu_under;
    double target = 20.0 * width / std::pow(h, 1.0 / nu_under);
    long n = std::max<long>(512, static_cast<long>(std::ceil(target)));
    long cap = spec.dim == 1 ? (1L << 15) : (spec.dim == 2 ? (1L << 10) : 128);
    return std::min(n, cap);
}

inline SpectralTable sweep(const PotentialSpec& spec, std::vector<double> h_list, int k,
                           const std::function<long(double)>& n_rule, double tol = 1e-10) {
    std::sort(h_list.begin(), h_list.end(), std::greater<>());
    h_list.erase(std::unique(h_list.begin(), h_list.end()), h_list.end());
    SpectralTable table;
    table.k = k;
    std::vector<Eigen::VectorXd> prev_vectors;
    long prev_n = -1;
    int next_branch = 0;
    std::vector<int> prev_branch;
    for (double h : h_list) {
        SweepRow row;
        row.h = h;
        try {
            long n = n_rule ? n_rule(h) : default_n_rule(spec, h);
            row.n = n;
            DiscreteOperator op = assemble(spec, h, n);
            Eigen::VectorXd seed = ground_state_seed(spec, op);
            EigenPairs pairs = smallest_eigs(op, k, tol, &seed);
            row.values = pairs.values;
            row.residuals = pairs.residuals;
            row.below_floor = pairs.below_floor;
            row.iterations = pairs.iterations;
            // branch tracking by eigenvector overlap against the previous row
            row.branch.assign(pairs.values.size(), -1);
            if (prev_n == n && !prev_vectors.empty()) {
                for (size_t i = 0; i < pairs.vectors.size(); ++i) {
                    double best = 0;
                    int who = -1;
                    for (size_t j = 0; j < prev_vectors.size(); ++j) {
                        double ov = std::abs(pairs.vectors[i].dot(prev_vectors[j]));
                        if (ov > best) {
                            best = ov;
                            who = static_cast<int>(j);
                        }
                    }
                    row.branch[i] = (best >= 0.9 && who >= 0) ? prev_branch[who] : next_branch++;
                }
            } else {
                for (auto& b : row.branch) b = next_branch++;
            }
            prev_vectors = pairs.vectors;
            prev_branch = row.branch;
            prev_n = n;
        } catch (const std::exception& e) {
            row.failed = true;
            row.error = e.what();
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

inline std::string spectral_csv(const SpectralTable& t) {
    std::ostringstream os;
    os.precision(17);
    os << "h";
    for (int i = 0; i < t.k; ++i) os << ",lambda" << i + 1;
    for (int i = 0; i < t.k; ++i) os << ",res" << i + 1;
    os << ",n,iters\n";
    for (auto& r : t.rows) {
        if (r.failed) {
            os << r.h << ",failed: " << r.error << "\n";
            continue;
        }
        os << r.h;
        for (double v : r.values) os << "," << v;
        for (double v : r.residuals) os << "," << v;
        os << "," << r.n << "," << r.iterations << "\n";
    }
    return os.str();
}

inline std::string matrix_export(const DiscreteOperator& op) {
    std::ostringstream os;
    os.precision(17);
    for (long col = 0; col < op.A.outerSize(); ++col)
        for (Eigen::SparseMatrix<double>::InnerIterator it(op.A, col); it; ++it)
            os << it.row() << " " << it.col() << " " << it.value() << "\n";
    return os.str();
}

}  // namespace witten
