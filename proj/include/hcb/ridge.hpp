#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

namespace hcb {

/// Historical covariance seed for one arm or cluster:
/// H = I + sum x x^T and bh = sum r x over the historical contexts.
struct HistorySeed {
    Eigen::MatrixXd H;
    Eigen::VectorXd bh;

    static HistorySeed empty(int d) {
        return HistorySeed{Eigen::MatrixXd::Identity(d, d), Eigen::VectorXd::Zero(d)};
    }

    void add(const Eigen::VectorXd& x, double reward) {
        H.noalias() += x * x.transpose();
        bh.noalias() += reward * x;
    }
};

/// Online ridge regression state (A, b, theta_hat) for one arm or cluster.
///
/// theta_hat is maintained through rank-one inverse updates with a direct
/// re-factorization every kRefactorInterval updates to bound drift; the
/// residual ||A theta - b||_inf is checked after every solve and a failing
/// solve falls back to a fresh factorization (counted as a conditioning
/// warning if even that does not meet the tolerance).
class RidgeState {
public:
    static constexpr int kRefactorInterval = 256;
    static constexpr double kResidualTol = 1e-9;

    explicit RidgeState(int d)
        : A_(Eigen::MatrixXd::Identity(d, d)),
          A_inv_(Eigen::MatrixXd::Identity(d, d)),
          b_(Eigen::VectorXd::Zero(d)),
          theta_(Eigen::VectorXd::Zero(d)) {}

    explicit RidgeState(const HistorySeed& seed) : A_(seed.H), b_(seed.bh) {
        validate_seed(seed);
        A_inv_ = direct_inverse(A_);
        theta_ = A_inv_ * b_;
        enforce_residual();
    }

    int dim() const { return static_cast<int>(A_.rows()); }
    const Eigen::MatrixXd& A() const { return A_; }
    const Eigen::VectorXd& b() const { return b_; }
    const Eigen::VectorXd& theta() const { return theta_; }
    int conditioning_warnings() const { return conditioning_warnings_; }

    /// theta^T x + alpha sqrt(x^T A^-1 x).
    double score(const Eigen::VectorXd& x, double alpha) const {
        if (x.size() != A_.rows()) throw std::invalid_argument("RidgeState::score: dimension mismatch");
        const double width = x.dot(A_inv_ * x);
        return theta_.dot(x) + alpha * std::sqrt(std::max(0.0, width));
    }

    /// A += x x^T, b += r x; theta re-solved through the incremental inverse.
    void rank_one_update(const Eigen::VectorXd& x, double reward) {
        if (x.size() != A_.rows()) {
            throw std::invalid_argument("RidgeState::rank_one_update: dimension mismatch");
        }
        if (!x.allFinite() || !std::isfinite(reward)) {
            throw std::invalid_argument("RidgeState::rank_one_update: non-finite input");
        }
        A_.noalias() += x * x.transpose();
        b_.noalias() += reward * x;
        if (++updates_since_refactor_ >= kRefactorInterval) {
            refactor();
        } else {
            // Sherman-Morrison: (A + xx^T)^-1 = A^-1 - (A^-1 x)(A^-1 x)^T / (1 + x^T A^-1 x)
            const Eigen::VectorXd u = A_inv_ * x;
            A_inv_.noalias() -= u * u.transpose() / (1.0 + x.dot(u));
        }
        theta_.noalias() = A_inv_ * b_;
        enforce_residual();
    }

    /// Log-determinant of A via Cholesky; A is SPD with det >= 1 whenever the
    /// state was seeded from an identity-regularized history.
    double log_det() const {
        Eigen::LLT<Eigen::MatrixXd> llt(A_);
        if (llt.info() != Eigen::Success) {
            throw std::runtime_error("RidgeState::log_det: matrix not positive definite");
        }
        return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    }

    /// Independent direct route: fresh Cholesky solve of A theta = b.
    static Eigen::VectorXd solve_direct(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
        Eigen::LLT<Eigen::MatrixXd> llt(A);
        if (llt.info() != Eigen::Success) {
            throw std::runtime_error("RidgeState::solve_direct: matrix not positive definite");
        }
        return llt.solve(b);
    }

private:
    static void validate_seed(const HistorySeed& seed) {
        if (seed.H.rows() != seed.H.cols() || seed.H.rows() != seed.bh.size()) {
            throw std::invalid_argument("HistorySeed: dimension mismatch");
        }
        const double asym = (seed.H - seed.H.transpose()).cwiseAbs().maxCoeff();
        if (asym > 1e-9 * (1.0 + seed.H.cwiseAbs().maxCoeff())) {
            throw std::invalid_argument("HistorySeed: H is not symmetric");
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(seed.H, Eigen::EigenvaluesOnly);
        if (eig.eigenvalues().minCoeff() < 1.0 - 1e-9) {
            throw std::invalid_argument("HistorySeed: H must have eigenvalues >= 1");
        }
    }

    static Eigen::MatrixXd direct_inverse(const Eigen::MatrixXd& A) {
        Eigen::LLT<Eigen::MatrixXd> llt(A);
        if (llt.info() != Eigen::Success) {
            throw std::runtime_error("RidgeState: matrix not positive definite");
        }
        return llt.solve(Eigen::MatrixXd::Identity(A.rows(), A.cols()));
    }

    void refactor() {
        A_inv_ = direct_inverse(A_);
        updates_since_refactor_ = 0;
    }

    void enforce_residual() {
        const double tol = kResidualTol * (1.0 + b_.cwiseAbs().maxCoeff());
        if ((A_ * theta_ - b_).cwiseAbs().maxCoeff() <= tol) return;
        refactor();
        theta_.noalias() = A_inv_ * b_;
        if ((A_ * theta_ - b_).cwiseAbs().maxCoeff() > tol) {
            ++conditioning_warnings_;
        }
    }

    Eigen::MatrixXd A_;
    Eigen::MatrixXd A_inv_;
    Eigen::VectorXd b_;
    Eigen::VectorXd theta_;
    int updates_since_refactor_ = 0;
    int conditioning_warnings_ = 0;
};

}  // namespace hcb
