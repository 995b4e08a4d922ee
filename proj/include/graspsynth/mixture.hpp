#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "graspsynth/random.hpp"
#include "graspsynth/se3.hpp"

namespace graspsynth {

// Data sets are stored one sample per column (d x N).
using DataMatrix = Eigen::MatrixXd;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

// Upper bound on mixture dimension; lets the evaluation paths use
// stack-allocated scratch vectors.
inline constexpr std::size_t kMaxMixtureDim = 32;

double log_sum_exp(std::span<const double> values);

/// Partition of the mixture dimensions into a pose block `u` and a feature
/// block `r`. The two lists must be disjoint and cover 0..d-1.
struct BlockSpec {
    std::vector<std::size_t> u_dims;
    std::vector<std::size_t> r_dims;

    void validate(std::size_t dim) const;
};

/// Gaussian mixture over R^d. Immutable; the Cholesky factors and
/// normalizers are cached at construction so evaluation allocates nothing.
class GaussianMixture {
public:
    // Weights are renormalized; they must be nonnegative with a positive sum.
    // Covariances must be symmetric positive-definite (checked via Cholesky).
    GaussianMixture(std::vector<double> weights, std::vector<Eigen::VectorXd> means,
                    std::vector<Eigen::MatrixXd> covariances);

    std::size_t components() const { return weights_.size(); }
    std::size_t dim() const { return dim_; }
    const std::vector<double>& weights() const { return weights_; }
    const Eigen::VectorXd& mean(std::size_t j) const { return means_[j]; }
    const Eigen::MatrixXd& covariance(std::size_t j) const { return covariances_[j]; }

    double log_likelihood(const VectorRef& x) const;
    // log N(x | mu_j, Sigma_j), without the component weight.
    double component_log_density(std::size_t j, const VectorRef& x) const;
    Eigen::VectorXd sample(Rng& rng) const;

    Eigen::VectorXd mixture_mean() const;
    Eigen::MatrixXd mixture_covariance() const;

private:
    std::size_t dim_ = 0;
    std::vector<double> weights_;
    std::vector<double> log_weights_;
    std::vector<Eigen::VectorXd> means_;
    std::vector<Eigen::MatrixXd> covariances_;
    std::vector<Eigen::MatrixXd> cholesky_;  // lower factors
    std::vector<double> log_normalizer_;     // -0.5 (d log 2pi + log det)
};

struct EmOptions {
    int max_iter = 200;
    double tol = 1e-6;
    std::uint64_t seed = 0;
    double cov_floor = 1e-8;
};

struct EmReport {
    GaussianMixture model;
    // Weighted mean log-likelihood after each E-step (weights normalized).
    std::vector<double> log_likelihood;
    int iterations = 0;
    bool converged = false;
};

/// Weighted EM with k-means++ seeding. `weights` may be empty (uniform).
EmReport em_fit_report(const DataMatrix& data, std::span<const double> weights, std::size_t components,
                       const EmOptions& options = {});
GaussianMixture em_fit(const DataMatrix& data, std::span<const double> weights, std::size_t components,
                       const EmOptions& options = {});

double gmm_log_likelihood(const GaussianMixture& m, const VectorRef& x);
Eigen::VectorXd gmm_sample(const GaussianMixture& m, Rng& rng);

/// Closed-form conditioning of every component on the feature block, with
/// the r-independent parts (gains, Schur complements, factors) precomputed.
class GaussianConditioner {
public:
    GaussianConditioner(const GaussianMixture& joint, BlockSpec spec);

    const BlockSpec& spec() const { return spec_; }
    // pi_j ∝ w_j N(r | mu_r, Sigma_rr), normalized.
    std::vector<double> posterior_weights(const VectorRef& r) const;
    GaussianMixture condition(const VectorRef& r) const;
    // Draw u ~ p(u | r) without materializing the conditional mixture.
    Eigen::VectorXd sample(const VectorRef& r, Rng& rng) const;

private:
    Eigen::VectorXd conditional_mean(std::size_t j, const VectorRef& r) const;

    BlockSpec spec_;
    std::vector<double> log_weights_;
    std::vector<Eigen::VectorXd> mean_u_;
    std::vector<Eigen::VectorXd> mean_r_;
    std::vector<Eigen::MatrixXd> gain_;  // Sigma_ur Sigma_rr^-1
    std::vector<Eigen::MatrixXd> conditional_cov_;
    std::vector<Eigen::MatrixXd> conditional_chol_;
    std::vector<Eigen::MatrixXd> feature_chol_;
    std::vector<double> feature_log_normalizer_;
};

GaussianMixture gmm_condition(const GaussianMixture& m, const BlockSpec& spec, const VectorRef& r);

/// Marginal over `dims` (in the given order); component weights unchanged.
GaussianMixture gmm_marginalize(const GaussianMixture& m, std::span<const std::size_t> dims);

/// Weighted Gaussian-kernel density with a per-dimension bandwidth.
class KernelDensity {
public:
    KernelDensity(DataMatrix centers, std::vector<double> weights, Eigen::VectorXd bandwidth);

    std::size_t size() const { return static_cast<std::size_t>(centers_.cols()); }
    std::size_t dim() const { return static_cast<std::size_t>(centers_.rows()); }
    const DataMatrix& centers() const { return centers_; }
    const std::vector<double>& weights() const { return weights_; }
    const Eigen::VectorXd& bandwidth() const { return bandwidth_; }

    double log_likelihood(const VectorRef& x) const;
    Eigen::VectorXd sample(Rng& rng) const;

private:
    DataMatrix centers_;
    DataMatrix scaled_centers_;  // centers / bandwidth
    std::vector<double> weights_;
    std::vector<double> log_weights_;
    std::vector<double> cumulative_;
    Eigen::VectorXd bandwidth_;
    Eigen::VectorXd inv_bandwidth_;
    double log_normalizer_ = 0.0;
};

KernelDensity kde_fit(const DataMatrix& data, std::span<const double> weights, const Eigen::VectorXd& bandwidth);
double kde_log_likelihood(const KernelDensity& k, const VectorRef& x);
Eigen::VectorXd kde_sample(const KernelDensity& k, Rng& rng);

/// Embeds (pose, features) as [p, log(q), r] in R^(6+n).
struct PoseFeatureCodec {
    std::size_t n_features = 0;

    std::size_t dim() const { return 6 + n_features; }
    Eigen::VectorXd encode(const Pose& pose, const VectorRef& features) const;
    Eigen::VectorXd encode(const Pose& pose) const;
    std::pair<Pose, Eigen::VectorXd> decode(const VectorRef& x) const;
};

Eigen::Matrix<double, 6, 1> encode_pose(const Pose& pose);
Pose decode_pose(const VectorRef& x);

// JSON documents: {"type": "gmm", "dim", "weights", "means", "covariances"}
// with row-major covariances, or {"type": "kde", "dim", "weights",
// "centers", "bandwidth"}. Doubles print in shortest round-trip form.
nlohmann::json mixture_to_json(const GaussianMixture& m);
GaussianMixture mixture_from_json(const nlohmann::json& j);
nlohmann::json kde_to_json(const KernelDensity& k);
KernelDensity kde_from_json(const nlohmann::json& j);

}  // namespace graspsynth
