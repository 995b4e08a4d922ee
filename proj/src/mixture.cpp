#include "graspsynth/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "graspsynth/error.hpp"

namespace graspsynth {

namespace {

using Scratch = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, static_cast<int>(kMaxMixtureDim), 1>;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kLog2Pi = std::log(2.0 * std::numbers::pi);

// Running log-sum-exp: one pass, rescales the accumulator when a new maximum
// appears.
struct StreamingLse {
    double max = kNegInf;
    double sum = 0.0;

    void add(double t) {
        if (t == kNegInf) {
            return;
        }
        if (t <= max) {
            sum += std::exp(t - max);
        } else {
            sum = sum * std::exp(max - t) + 1.0;
            max = t;
        }
    }
    double value() const { return max == kNegInf ? kNegInf : max + std::log(sum); }
};

std::vector<double> normalized_weights(std::vector<double> weights, std::size_t expected, const char* what) {
    if (weights.empty()) {
        return std::vector<double>(expected, 1.0 / static_cast<double>(expected));
    }
    if (weights.size() != expected) {
        fail(ErrorKind::InvalidArgument, std::string(what) + ": expected " + std::to_string(expected) +
                                             " weights, got " + std::to_string(weights.size()));
    }
    double total = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0) {
            fail(ErrorKind::InvalidArgument, std::string(what) + ": weights must be finite and nonnegative");
        }
        total += w;
    }
    if (!(total > 0.0)) {
        fail(ErrorKind::InvalidArgument, std::string(what) + ": weights are all zero");
    }
    // Already-normalized input is kept bit-for-bit so serialization round-trips.
    if (std::abs(total - 1.0) > 1e-12) {
        for (double& w : weights) {
            w /= total;
        }
    }
    return weights;
}

double log_of(double w) { return w > 0.0 ? std::log(w) : kNegInf; }

std::size_t pick_by_cumulative(const std::vector<double>& cumulative, double u) {
    const double target = u * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    if (it == cumulative.end()) {
        --it;
    }
    return static_cast<std::size_t>(it - cumulative.begin());
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& s) { return 0.5 * (s + s.transpose()); }

// Lower Cholesky factor; grows the diagonal floor until the factorization
// succeeds.
Eigen::MatrixXd repaired_cholesky(Eigen::MatrixXd& cov, double floor) {
    const auto d = cov.rows();
    double extra = std::max(floor, 1e-300);
    for (int attempt = 0; attempt < 400; ++attempt) {
        Eigen::LLT<Eigen::MatrixXd> llt(cov);
        if (llt.info() == Eigen::Success && llt.matrixL().toDenseMatrix().diagonal().minCoeff() > 0.0) {
            return llt.matrixL();
        }
        cov += extra * Eigen::MatrixXd::Identity(d, d);
        extra *= 10.0;
    }
    fail(ErrorKind::InvalidState, "covariance repair failed");
}

}  // namespace

double log_sum_exp(std::span<const double> values) {
    StreamingLse lse;
    for (double v : values) {
        lse.add(v);
    }
    return lse.value();
}

void BlockSpec::validate(std::size_t dim) const {
    if (u_dims.empty() || r_dims.empty()) {
        fail(ErrorKind::InvalidArgument, "BlockSpec: both blocks must be nonempty");
    }
    std::vector<int> seen(dim, 0);
    auto mark = [&](std::size_t i) {
        if (i >= dim) {
            fail(ErrorKind::InvalidArgument, "BlockSpec: index " + std::to_string(i) + " out of range");
        }
        if (seen[i]++ != 0) {
            fail(ErrorKind::InvalidArgument, "BlockSpec: index " + std::to_string(i) + " repeated");
        }
    };
    for (auto i : u_dims) mark(i);
    for (auto i : r_dims) mark(i);
    if (u_dims.size() + r_dims.size() != dim) {
        fail(ErrorKind::InvalidArgument, "BlockSpec: blocks do not cover all dimensions");
    }
}

// ---------------------------------------------------------------------------
// GaussianMixture

GaussianMixture::GaussianMixture(std::vector<double> weights, std::vector<Eigen::VectorXd> means,
                                 std::vector<Eigen::MatrixXd> covariances) {
    const std::size_t k = means.size();
    if (k == 0) {
        fail(ErrorKind::InvalidArgument, "GaussianMixture: no components");
    }
    if (weights.size() != k || covariances.size() != k) {
        fail(ErrorKind::InvalidArgument, "GaussianMixture: weights/means/covariances size mismatch");
    }
    dim_ = static_cast<std::size_t>(means[0].size());
    if (dim_ == 0 || dim_ > kMaxMixtureDim) {
        fail(ErrorKind::InvalidArgument, "GaussianMixture: dimension must be in 1.." + std::to_string(kMaxMixtureDim));
    }
    weights_ = normalized_weights(std::move(weights), k, "GaussianMixture");
    means_ = std::move(means);
    covariances_ = std::move(covariances);
    const auto d = static_cast<Eigen::Index>(dim_);
    for (std::size_t j = 0; j < k; ++j) {
        const std::string tag = "GaussianMixture component " + std::to_string(j);
        if (means_[j].size() != d || !means_[j].allFinite()) {
            fail(ErrorKind::InvalidArgument, tag + ": bad mean");
        }
        Eigen::MatrixXd& s = covariances_[j];
        if (s.rows() != d || s.cols() != d || !s.allFinite()) {
            fail(ErrorKind::InvalidArgument, tag + ": bad covariance shape");
        }
        const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
        if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
            fail(ErrorKind::InvalidArgument, tag + ": covariance is not symmetric");
        }
        s = symmetrized(s);
        Eigen::LLT<Eigen::MatrixXd> llt(s);
        Eigen::MatrixXd l = llt.matrixL();
        if (llt.info() != Eigen::Success || !(l.diagonal().minCoeff() > 0.0)) {
            fail(ErrorKind::InvalidArgument, tag + ": covariance is not positive definite");
        }
        log_weights_.push_back(log_of(weights_[j]));
        log_normalizer_.push_back(-0.5 * static_cast<double>(d) * kLog2Pi - l.diagonal().array().log().sum());
        cholesky_.push_back(std::move(l));
    }
}

double GaussianMixture::component_log_density(std::size_t j, const VectorRef& x) const {
    Scratch y = x - means_[j];
    cholesky_[j].triangularView<Eigen::Lower>().solveInPlace(y);
    return log_normalizer_[j] - 0.5 * y.squaredNorm();
}

double GaussianMixture::log_likelihood(const VectorRef& x) const {
    if (static_cast<std::size_t>(x.size()) != dim_) {
        fail(ErrorKind::InvalidArgument, "gmm_log_likelihood: dimension mismatch (" + std::to_string(x.size()) +
                                             " vs " + std::to_string(dim_) + ")");
    }
    StreamingLse lse;
    for (std::size_t j = 0; j < weights_.size(); ++j) {
        if (log_weights_[j] == kNegInf) {
            continue;
        }
        lse.add(log_weights_[j] + component_log_density(j, x));
    }
    return lse.value();
}

Eigen::VectorXd GaussianMixture::sample(Rng& rng) const {
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t j = 0;
    for (; j + 1 < weights_.size(); ++j) {
        acc += weights_[j];
        if (u < acc && weights_[j] > 0.0) {
            break;
        }
    }
    while (weights_[j] == 0.0 && j > 0) {
        --j;
    }
    Eigen::VectorXd z(static_cast<Eigen::Index>(dim_));
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        z[i] = rng.normal();
    }
    return means_[j] + cholesky_[j] * z;
}

Eigen::VectorXd GaussianMixture::mixture_mean() const {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim_));
    for (std::size_t j = 0; j < weights_.size(); ++j) {
        m += weights_[j] * means_[j];
    }
    return m;
}

Eigen::MatrixXd GaussianMixture::mixture_covariance() const {
    const Eigen::VectorXd m = mixture_mean();
    const auto d = static_cast<Eigen::Index>(dim_);
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t j = 0; j < weights_.size(); ++j) {
        c += weights_[j] * (covariances_[j] + means_[j] * means_[j].transpose());
    }
    return c - m * m.transpose();
}

double gmm_log_likelihood(const GaussianMixture& m, const VectorRef& x) { return m.log_likelihood(x); }

Eigen::VectorXd gmm_sample(const GaussianMixture& m, Rng& rng) { return m.sample(rng); }

// ---------------------------------------------------------------------------
// EM

namespace {

std::vector<Eigen::Index> kmeanspp_seeds(const DataMatrix& data, const std::vector<double>& w, std::size_t k,
                                         Rng& rng) {
    const Eigen::Index n = data.cols();
    std::vector<double> cumulative(static_cast<std::size_t>(n));
    auto draw = [&](const std::vector<double>& mass) -> Eigen::Index {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            acc += mass[static_cast<std::size_t>(i)];
            cumulative[static_cast<std::size_t>(i)] = acc;
        }
        return static_cast<Eigen::Index>(pick_by_cumulative(cumulative, rng.uniform()));
    };

    std::vector<Eigen::Index> seeds;
    seeds.push_back(draw(w));
    std::vector<double> d2(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    std::vector<double> mass(static_cast<std::size_t>(n));
    while (seeds.size() < k) {
        const auto last = data.col(seeds.back());
        double total = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            d2[ui] = std::min(d2[ui], (data.col(i) - last).squaredNorm());
            mass[ui] = w[ui] * d2[ui];
            total += mass[ui];
        }
        seeds.push_back(total > 0.0 ? draw(mass) : draw(w));
    }
    return seeds;
}


}  // namespace

EmReport em_fit_report(const DataMatrix& data, std::span<const double> weights, std::size_t components,
                       const EmOptions& options) {
    const Eigen::Index n = data.cols();
    const Eigen::Index d = data.rows();
    if (d < 1 || static_cast<std::size_t>(d) > kMaxMixtureDim) {
        fail(ErrorKind::InvalidArgument, "em_fit: dimension must be in 1.." + std::to_string(kMaxMixtureDim));
    }
    if (components < 1) {
        fail(ErrorKind::InvalidArgument, "em_fit: K must be at least 1");
    }
    if (static_cast<std::size_t>(n) < components) {
        fail(ErrorKind::InvalidArgument, "em_fit: K = " + std::to_string(components) + " exceeds data count " +
                                             std::to_string(n));
    }
    if (!data.allFinite()) {
        fail(ErrorKind::InvalidArgument, "em_fit: data contains non-finite values");
    }
    if (!(options.cov_floor >= 0.0)) {
        fail(ErrorKind::InvalidArgument, "em_fit: cov_floor must be nonnegative");
    }
    const std::vector<double> w = normalized_weights(std::vector<double>(weights.begin(), weights.end()),
                                                     static_cast<std::size_t>(n), "em_fit");
    const auto k = static_cast<Eigen::Index>(components);
    const Eigen::MatrixXd floor_eye = options.cov_floor * Eigen::MatrixXd::Identity(d, d);

    Rng rng(options.seed);
    const auto seeds = kmeanspp_seeds(data, w, components, rng);

    Eigen::VectorXd global_mean = Eigen::VectorXd::Zero(d);
    double wsum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        global_mean += w[static_cast<std::size_t>(i)] * data.col(i);
        wsum += w[static_cast<std::size_t>(i)];
    }
    global_mean /= wsum;
    Eigen::MatrixXd global_cov = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd c = data.col(i) - global_mean;
        global_cov.noalias() += w[static_cast<std::size_t>(i)] * c * c.transpose();
    }
    global_cov = symmetrized(global_cov / wsum) + floor_eye;

    // k-means++ seeds as means, the global covariance everywhere.
    std::vector<double> mix(components, 1.0 / static_cast<double>(components));
    std::vector<Eigen::VectorXd> means;
    std::vector<Eigen::MatrixXd> covs(components, global_cov);
    for (const Eigen::Index s : seeds) means.emplace_back(data.col(s));

    // Each sample is expanded once into the monomials [x_a x_b (b <= a), x_a, 1]
    // of the globally centered data, so the E-step quadratic forms and the
    // M-step moment sums are both matrix products.
    const Eigen::Index tri = d * (d + 1) / 2;
    const Eigen::Index m = tri + d + 1;
    Eigen::MatrixXd feats(m, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd c = data.col(i) - global_mean;
        double* f = feats.col(i).data();
        for (Eigen::Index a = 0; a < d; ++a) {
            for (Eigen::Index b = 0; b <= a; ++b) *f++ = c[a] * c[b];
        }
        for (Eigen::Index a = 0; a < d; ++a) *f++ = c[a];
        *f = 1.0;
    }
    Eigen::MatrixXd coef(k, m);
    Eigen::MatrixXd resp(k, n);
    Eigen::MatrixXd moments(m, k);
    std::vector<double> history;
    double previous = kNegInf;
    bool converged = false;
    int iterations = 0;

    for (int iter = 0;; ++iter) {
        // log(pi_j N(x | mu_j, S_j)) = coef_j . feats(x) with P = S_j^-1:
        // quadratic -P/2, linear P mu, constant log_coef - mu' P mu / 2.
        for (std::size_t j = 0; j < components; ++j) {
            const auto row = static_cast<Eigen::Index>(j);
            if (!(mix[j] > 0.0)) {
                coef.row(row).setZero();
                continue;
            }
            const Eigen::MatrixXd l = repaired_cholesky(covs[j], options.cov_floor);
            const Eigen::MatrixXd li = l.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(d, d));
            const Eigen::MatrixXd prec = li.transpose() * li;
            const Eigen::VectorXd mu = means[j] - global_mean;
            const Eigen::VectorXd pm = prec * mu;
            Eigen::Index c = 0;
            for (Eigen::Index a = 0; a < d; ++a) {
                for (Eigen::Index b = 0; b <= a; ++b) coef(row, c++) = a == b ? -0.5 * prec(a, a) : -prec(a, b);
            }
            for (Eigen::Index a = 0; a < d; ++a) coef(row, c++) = pm[a];
            coef(row, c) = std::log(mix[j]) - 0.5 * static_cast<double>(d) * kLog2Pi -
                           l.diagonal().array().log().sum() - 0.5 * mu.dot(pm);
        }
        // E-step
        resp.noalias() = coef * feats;
        double ll = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            double* ri = resp.col(i).data();
            double mx = kNegInf;
            for (std::size_t j = 0; j < components; ++j) {
                if (!(mix[j] > 0.0)) ri[j] = kNegInf;
                mx = std::max(mx, ri[j]);
            }
            double total = kNegInf;
            if (mx != kNegInf) {
                double sum = 0.0;
                for (std::size_t j = 0; j < components; ++j) {
                    ri[j] = ri[j] == kNegInf ? 0.0 : std::exp(ri[j] - mx);
                    sum += ri[j];
                }
                const double inv = 1.0 / sum;
                for (std::size_t j = 0; j < components; ++j) ri[j] *= inv;
                total = mx + std::log(sum);
            } else {
                for (std::size_t j = 0; j < components; ++j) ri[j] = 0.0;
            }
            ll += w[static_cast<std::size_t>(i)] * total;
        }
        history.push_back(ll);
        if (iter > 0 && std::abs(ll - previous) < options.tol) {
            converged = true;
            break;
        }
        if (iter >= options.max_iter) {
            break;
        }
        // M-step
        for (Eigen::Index i = 0; i < n; ++i) resp.col(i) *= w[static_cast<std::size_t>(i)];
        moments.noalias() = feats * resp.transpose();
        for (std::size_t j = 0; j < components; ++j) {
            const auto col = static_cast<Eigen::Index>(j);
            const double nk = moments(m - 1, col);
            if (!(nk > 1e-300)) {
                // Empty component: parameters stay put, weight drops to zero.
                mix[j] = 0.0;
                continue;
            }
            const Eigen::VectorXd mu = moments.col(col).segment(tri, d) / nk;
            Eigen::MatrixXd cov(d, d);
            Eigen::Index c = 0;
            for (Eigen::Index a = 0; a < d; ++a) {
                for (Eigen::Index b = 0; b <= a; ++b) {
                    cov(a, b) = cov(b, a) = moments(c++, col) / nk - mu[a] * mu[b];
                }
            }
            means[j] = mu + global_mean;
            covs[j] = cov + floor_eye;
            mix[j] = nk;
        }
        double msum = 0.0;
        for (double mj : mix) msum += mj;
        for (double& mj : mix) mj /= msum;
        previous = ll;
        iterations = iter + 1;
    }
    return EmReport{GaussianMixture(mix, means, covs), std::move(history), iterations, converged};
}

GaussianMixture em_fit(const DataMatrix& data, std::span<const double> weights, std::size_t components,
                       const EmOptions& options) {
    return em_fit_report(data, weights, components, options).model;
}

// ---------------------------------------------------------------------------
// Conditioning and marginals

namespace {

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& s, const std::vector<std::size_t>& rows,
                          const std::vector<std::size_t>& cols) {
    Eigen::MatrixXd out(rows.size(), cols.size());
    for (std::size_t a = 0; a < rows.size(); ++a) {
        for (std::size_t b = 0; b < cols.size(); ++b) {
            out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                s(static_cast<Eigen::Index>(rows[a]), static_cast<Eigen::Index>(cols[b]));
        }
    }
    return out;
}

Eigen::VectorXd subvector(const Eigen::VectorXd& v, const std::vector<std::size_t>& idx) {
    Eigen::VectorXd out(idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a) {
        out[static_cast<Eigen::Index>(a)] = v[static_cast<Eigen::Index>(idx[a])];
    }
    return out;
}

}  // namespace

GaussianConditioner::GaussianConditioner(const GaussianMixture& joint, BlockSpec spec) : spec_(std::move(spec)) {
    spec_.validate(joint.dim());
    const auto nr = static_cast<double>(spec_.r_dims.size());
    for (std::size_t j = 0; j < joint.components(); ++j) {
        const Eigen::MatrixXd& s = joint.covariance(j);
        const Eigen::MatrixXd suu = submatrix(s, spec_.u_dims, spec_.u_dims);
        const Eigen::MatrixXd sur = submatrix(s, spec_.u_dims, spec_.r_dims);
        const Eigen::MatrixXd srr = submatrix(s, spec_.r_dims, spec_.r_dims);
        Eigen::LLT<Eigen::MatrixXd> feature(srr);
        Eigen::MatrixXd lr = feature.matrixL();
        if (feature.info() != Eigen::Success || !(lr.diagonal().minCoeff() > 0.0)) {
            fail(ErrorKind::InvalidState, "gmm_condition: component " + std::to_string(j) +
                                              " has a singular feature covariance");
        }
        Eigen::MatrixXd gain = feature.solve(sur.transpose()).transpose();
        Eigen::MatrixXd cond = symmetrized(suu - gain * sur.transpose());
        Eigen::LLT<Eigen::MatrixXd> cond_llt(cond);
        Eigen::MatrixXd lc = cond_llt.matrixL();
        if (cond_llt.info() != Eigen::Success || !(lc.diagonal().minCoeff() > 0.0)) {
            fail(ErrorKind::InvalidState, "gmm_condition: component " + std::to_string(j) +
                                              " has a singular conditional covariance");
        }
        const double w = joint.weights()[j];
        log_weights_.push_back(w > 0.0 ? std::log(w) : kNegInf);
        mean_u_.push_back(subvector(joint.mean(j), spec_.u_dims));
        mean_r_.push_back(subvector(joint.mean(j), spec_.r_dims));
        gain_.push_back(std::move(gain));
        conditional_cov_.push_back(std::move(cond));
        conditional_chol_.push_back(std::move(lc));
        feature_log_normalizer_.push_back(-0.5 * nr * kLog2Pi - lr.diagonal().array().log().sum());
        feature_chol_.push_back(std::move(lr));
    }
}

std::vector<double> GaussianConditioner::posterior_weights(const VectorRef& r) const {
    if (static_cast<std::size_t>(r.size()) != spec_.r_dims.size()) {
        fail(ErrorKind::InvalidArgument, "gmm_condition: feature vector has " + std::to_string(r.size()) +
                                             " entries, expected " + std::to_string(spec_.r_dims.size()));
    }
    std::vector<double> t(log_weights_.size());
    StreamingLse lse;
    for (std::size_t j = 0; j < t.size(); ++j) {
        if (log_weights_[j] == kNegInf) {
            t[j] = kNegInf;
            continue;
        }
        Scratch y = r - mean_r_[j];
        feature_chol_[j].triangularView<Eigen::Lower>().solveInPlace(y);
        t[j] = log_weights_[j] + feature_log_normalizer_[j] - 0.5 * y.squaredNorm();
        lse.add(t[j]);
    }
    const double total = lse.value();
    for (double& v : t) {
        v = (v == kNegInf) ? 0.0 : std::exp(v - total);
    }
    return t;
}

Eigen::VectorXd GaussianConditioner::conditional_mean(std::size_t j, const VectorRef& r) const {
    return mean_u_[j] + gain_[j] * (r - mean_r_[j]);
}

GaussianMixture GaussianConditioner::condition(const VectorRef& r) const {
    std::vector<double> pi = posterior_weights(r);
    std::vector<Eigen::VectorXd> means;
    for (std::size_t j = 0; j < pi.size(); ++j) {
        means.push_back(conditional_mean(j, r));
    }
    return GaussianMixture(std::move(pi), std::move(means), conditional_cov_);
}

Eigen::VectorXd GaussianConditioner::sample(const VectorRef& r, Rng& rng) const {
    const std::vector<double> pi = posterior_weights(r);
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t j = 0;
    for (; j + 1 < pi.size(); ++j) {
        acc += pi[j];
        if (u < acc && pi[j] > 0.0) {
            break;
        }
    }
    while (pi[j] == 0.0 && j > 0) {
        --j;
    }
    Eigen::VectorXd z(static_cast<Eigen::Index>(spec_.u_dims.size()));
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        z[i] = rng.normal();
    }
    return conditional_mean(j, r) + conditional_chol_[j] * z;
}

GaussianMixture gmm_condition(const GaussianMixture& m, const BlockSpec& spec, const VectorRef& r) {
    return GaussianConditioner(m, spec).condition(r);
}

GaussianMixture gmm_marginalize(const GaussianMixture& m, std::span<const std::size_t> dims) {
    if (dims.empty()) {
        fail(ErrorKind::InvalidArgument, "gmm_marginalize: empty dimension list");
    }
    std::vector<std::size_t> keep(dims.begin(), dims.end());
    std::vector<int> seen(m.dim(), 0);
    for (auto i : keep) {
        if (i >= m.dim()) {
            fail(ErrorKind::InvalidArgument, "gmm_marginalize: index " + std::to_string(i) + " out of range");
        }
        if (seen[i]++ != 0) {
            fail(ErrorKind::InvalidArgument, "gmm_marginalize: index " + std::to_string(i) + " repeated");
        }
    }
    std::vector<Eigen::VectorXd> means;
    std::vector<Eigen::MatrixXd> covs;
    for (std::size_t j = 0; j < m.components(); ++j) {
        means.push_back(subvector(m.mean(j), keep));
        covs.push_back(submatrix(m.covariance(j), keep, keep));
    }
    return GaussianMixture(m.weights(), std::move(means), std::move(covs));
}

// ---------------------------------------------------------------------------
// Kernel density

KernelDensity::KernelDensity(DataMatrix centers, std::vector<double> weights, Eigen::VectorXd bandwidth)
    : centers_(std::move(centers)), bandwidth_(std::move(bandwidth)) {
    if (centers_.cols() == 0) {
        fail(ErrorKind::InvalidArgument, "kde_fit: no data");
    }
    if (centers_.rows() == 0 || static_cast<std::size_t>(centers_.rows()) > kMaxMixtureDim) {
        fail(ErrorKind::InvalidArgument, "kde_fit: dimension must be in 1.." + std::to_string(kMaxMixtureDim));
    }
    if (!centers_.allFinite()) {
        fail(ErrorKind::InvalidArgument, "kde_fit: non-finite data");
    }
    if (bandwidth_.size() != centers_.rows()) {
        fail(ErrorKind::InvalidArgument, "kde_fit: bandwidth has " + std::to_string(bandwidth_.size()) +
                                             " entries, expected " + std::to_string(centers_.rows()));
    }
    for (Eigen::Index i = 0; i < bandwidth_.size(); ++i) {
        if (!(bandwidth_[i] > 0.0) || !std::isfinite(bandwidth_[i])) {
            fail(ErrorKind::InvalidArgument, "kde_fit: bandwidth must be positive");
        }
    }
    weights_ = normalized_weights(std::move(weights), size(), "kde_fit");
    inv_bandwidth_ = bandwidth_.cwiseInverse();
    scaled_centers_ = inv_bandwidth_.asDiagonal() * centers_;
    double acc = 0.0;
    for (double w : weights_) {
        log_weights_.push_back(log_of(w));
        acc += w;
        cumulative_.push_back(acc);
    }
    log_normalizer_ = -0.5 * static_cast<double>(dim()) * kLog2Pi - bandwidth_.array().log().sum();
}

double KernelDensity::log_likelihood(const VectorRef& x) const {
    if (static_cast<std::size_t>(x.size()) != dim()) {
        fail(ErrorKind::InvalidArgument, "kde_log_likelihood: dimension mismatch (" + std::to_string(x.size()) +
                                             " vs " + std::to_string(dim()) + ")");
    }
    const Scratch xs = x.cwiseProduct(inv_bandwidth_);
    const Eigen::Index d = centers_.rows();
    const double* c = scaled_centers_.data();
    StreamingLse lse;
    for (std::size_t i = 0; i < weights_.size(); ++i, c += d) {
        double q = 0.0;
        for (Eigen::Index k = 0; k < d; ++k) {
            const double diff = xs[k] - c[k];
            q += diff * diff;
        }
        lse.add(log_weights_[i] - 0.5 * q);
    }
    return log_normalizer_ + lse.value();
}

Eigen::VectorXd KernelDensity::sample(Rng& rng) const {
    const std::size_t i = pick_by_cumulative(cumulative_, rng.uniform());
    Eigen::VectorXd out = centers_.col(static_cast<Eigen::Index>(i));
    for (Eigen::Index k = 0; k < out.size(); ++k) {
        out[k] += bandwidth_[k] * rng.normal();
    }
    return out;
}

KernelDensity kde_fit(const DataMatrix& data, std::span<const double> weights, const Eigen::VectorXd& bandwidth) {
    return KernelDensity(data, std::vector<double>(weights.begin(), weights.end()), bandwidth);
}

double kde_log_likelihood(const KernelDensity& k, const VectorRef& x) { return k.log_likelihood(x); }

Eigen::VectorXd kde_sample(const KernelDensity& k, Rng& rng) { return k.sample(rng); }

// ---------------------------------------------------------------------------
// Pose codec

Eigen::VectorXd PoseFeatureCodec::encode(const Pose& pose, const VectorRef& features) const {
    if (static_cast<std::size_t>(features.size()) != n_features) {
        fail(ErrorKind::InvalidArgument, "PoseFeatureCodec: expected " + std::to_string(n_features) + " features");
    }
    Eigen::VectorXd x(static_cast<Eigen::Index>(dim()));
    x.head<6>() = encode_pose(pose);
    x.tail(static_cast<Eigen::Index>(n_features)) = features;
    return x;
}

Eigen::VectorXd PoseFeatureCodec::encode(const Pose& pose) const {
    return encode(pose, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_features)));
}

std::pair<Pose, Eigen::VectorXd> PoseFeatureCodec::decode(const VectorRef& x) const {
    if (static_cast<std::size_t>(x.size()) != dim()) {
        fail(ErrorKind::InvalidArgument, "PoseFeatureCodec: expected a " + std::to_string(dim()) + "-vector");
    }
    return {decode_pose(x.head<6>()), x.tail(static_cast<Eigen::Index>(n_features))};
}

Eigen::Matrix<double, 6, 1> encode_pose(const Pose& pose) {
    Eigen::Matrix<double, 6, 1> x;
    x.head<3>() = pose.p;
    x.tail<3>() = quat_log(pose.q).omega;
    return x;
}

Pose decode_pose(const VectorRef& x) {
    if (x.size() < 6) {
        fail(ErrorKind::InvalidArgument, "decode_pose: expected at least 6 entries");
    }
    return {x.head<3>(), quat_exp(RotVec{x.segment<3>(3)})};
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

nlohmann::json vector_json(const Eigen::VectorXd& v) {
    return nlohmann::json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd vector_from(const nlohmann::json& j, std::size_t expected, const char* what) {
    const auto values = j.get<std::vector<double>>();
    if (values.size() != expected) {
        fail(ErrorKind::InvalidArgument, std::string(what) + ": wrong length");
    }
    return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

void expect_type(const nlohmann::json& j, const char* type) {
    if (!j.is_object() || !j.contains("type") || j.at("type") != type) {
        fail(ErrorKind::InvalidArgument, std::string("expected a model document of type '") + type + "'");
    }
}

}  // namespace

nlohmann::json mixture_to_json(const GaussianMixture& m) {
    nlohmann::json j;
    j["type"] = "gmm";
    j["dim"] = m.dim();
    j["weights"] = m.weights();
    j["means"] = nlohmann::json::array();
    j["covariances"] = nlohmann::json::array();
    for (std::size_t c = 0; c < m.components(); ++c) {
        j["means"].push_back(vector_json(m.mean(c)));
        const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m.covariance(c);
        j["covariances"].push_back(std::vector<double>(rm.data(), rm.data() + rm.size()));
    }
    return j;
}

GaussianMixture mixture_from_json(const nlohmann::json& j) {
    try {
        expect_type(j, "gmm");
        const auto d = j.at("dim").get<std::size_t>();
        auto weights = j.at("weights").get<std::vector<double>>();
        std::vector<Eigen::VectorXd> means;
        std::vector<Eigen::MatrixXd> covs;
        for (const auto& mj : j.at("means")) {
            means.push_back(vector_from(mj, d, "gmm mean"));
        }
        for (const auto& cj : j.at("covariances")) {
            const Eigen::VectorXd flat = vector_from(cj, d * d, "gmm covariance");
            covs.emplace_back(Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
                flat.data(), static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
        }
        return GaussianMixture(std::move(weights), std::move(means), std::move(covs));
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::InvalidArgument, std::string("malformed gmm document: ") + e.what());
    }
}

nlohmann::json kde_to_json(const KernelDensity& k) {
    nlohmann::json j;
    j["type"] = "kde";
    j["dim"] = k.dim();
    j["weights"] = k.weights();
    j["centers"] = nlohmann::json::array();
    for (Eigen::Index i = 0; i < k.centers().cols(); ++i) {
        j["centers"].push_back(vector_json(k.centers().col(i)));
    }
    j["bandwidth"] = vector_json(k.bandwidth());
    return j;
}

KernelDensity kde_from_json(const nlohmann::json& j) {
    try {
        expect_type(j, "kde");
        const auto d = j.at("dim").get<std::size_t>();
        const auto& cj = j.at("centers");
        DataMatrix centers(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(cj.size()));
        for (std::size_t i = 0; i < cj.size(); ++i) {
            centers.col(static_cast<Eigen::Index>(i)) = vector_from(cj[i], d, "kde center");
        }
        return KernelDensity(std::move(centers), j.at("weights").get<std::vector<double>>(),
                             vector_from(j.at("bandwidth"), d, "kde bandwidth"));
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::InvalidArgument, std::string("malformed kde document: ") + e.what());
    }
}

}  // namespace graspsynth
