#include "brmst/sampler.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "brmst/rng.hpp"

namespace brmst {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct ChainResult {
  Eigen::MatrixXd draws;
  Eigen::VectorXd acceptance;
};

class Chain {
 public:
  Chain(const SurvivalModel& model, const SamplerConfig& config, int index)
      : model_(model), layout_(model.layout()), config_(config), rng_(config.seed, static_cast<std::uint64_t>(index)) {}

  ChainResult run() {
    initialize();
    const Eigen::Index q = static_cast<Eigen::Index>(joint_.size());
    const int scalar_blocks = static_cast<int>(scalar_indices_.size());
    ChainResult result;
    result.draws.resize(config_.iterations - config_.burnin, layout_.dim());
    Eigen::VectorXd accepted = Eigen::VectorXd::Zero(1 + scalar_blocks + (shift_ ? 1 : 0));
    double shift_log_scale = std::log(config_.initial_step);

    beta_chol_ = Eigen::MatrixXd::Identity(q, q);
    double beta_log_scale = std::log(config_.initial_step);
    std::vector<double> scalar_log_scale(static_cast<std::size_t>(scalar_blocks), std::log(config_.initial_step));
    const double beta_target = q > 1 ? config_.target_accept_block : config_.target_accept_scalar;
    const int joint_repeats = config_.joint_repeats > 0 ? config_.joint_repeats : static_cast<int>(q);
    Eigen::MatrixXd beta_history(config_.burnin, q);
    bool covariance_adapted = false;

    for (int it = 0; it < config_.iterations; ++it) {
      const bool adapting = it < config_.burnin;
      const double gain = std::pow(static_cast<double>(it) + 1.0, -0.6);

      // beta block, proposed joint_repeats times per sweep
      for (int rep = 0; rep < joint_repeats; ++rep) {
        Eigen::VectorXd z(q);
        for (Eigen::Index j = 0; j < q; ++j) z(j) = rng_.normal();
        Eigen::VectorXd proposal = theta_;
        const Eigen::VectorXd step = std::exp(beta_log_scale) * (beta_chol_ * z);
        for (Eigen::Index j = 0; j < q; ++j) proposal(joint_[static_cast<std::size_t>(j)]) += step(j);
        const bool ok = propose_global(proposal);
        if (adapting) beta_log_scale += gain * ((ok ? 1.0 : 0.0) - beta_target);
        else if (ok) accepted(0) += 1.0 / joint_repeats;
      }

      // scalar blocks: shape, effects, phi
      for (int b = 0; b < scalar_blocks; ++b) {
        const Eigen::Index index = scalar_indices_[static_cast<std::size_t>(b)];
        Eigen::VectorXd proposal = theta_;
        proposal(index) += std::exp(scalar_log_scale[static_cast<std::size_t>(b)]) * rng_.normal();
        bool ok;
        if (index == layout_.shape_index())
          ok = propose_global(proposal);
        else if (index == layout_.phi_index())
          ok = propose_prior_only(proposal);
        else
          ok = propose_cluster(proposal, index - layout_.effect_offset());
        if (adapting) scalar_log_scale[static_cast<std::size_t>(b)] += gain * ((ok ? 1.0 : 0.0) - config_.target_accept_scalar);
        else if (ok) accepted(1 + b) += 1.0;
      }

      // intercept against the common level of the cluster effects
      if (shift_) {
        const double delta = std::exp(shift_log_scale) * rng_.normal();
        Eigen::VectorXd proposal = theta_;
        proposal(0) += delta;
        proposal.segment(layout_.effect_offset(), layout_.clusters()).array() -= delta;
        const bool ok = propose_global(proposal);
        if (adapting) shift_log_scale += gain * ((ok ? 1.0 : 0.0) - config_.target_accept_scalar);
        else if (ok) accepted(1 + scalar_blocks) += 1.0;
      }

      if (adapting) {
        for (Eigen::Index j = 0; j < q; ++j) beta_history(it, j) = theta_(joint_[static_cast<std::size_t>(j)]);
        const int seen = it + 1;
        if (seen % config_.adaptation_window == 0 && seen >= 2 * config_.adaptation_window) {
          const int start = seen / 2;
          const Eigen::MatrixXd recent = beta_history.middleRows(start, seen - start);
          if (recent.rows() > q + 1 && refresh_beta_covariance(recent) && !covariance_adapted) {
            beta_log_scale = std::log(2.38 / std::sqrt(static_cast<double>(q)));
            covariance_adapted = true;
          }
        }
      } else {
        result.draws.row(it - config_.burnin) = layout_.to_natural(theta_).transpose();
      }
    }
    result.acceptance = accepted / static_cast<double>(config_.iterations - config_.burnin);
    return result;
  }

  std::vector<std::string> block_names(const std::vector<std::string>& columns) const {
    std::vector<std::string> names{layout_.has_shape() ? "beta+shape" : "beta"};
    for (Eigen::Index index : scalar_indices_) names.push_back(columns[static_cast<std::size_t>(index)]);
    if (shift_) names.push_back("shift");
    return names;
  }

  void set_blocks() {
    joint_.clear();
    for (Eigen::Index j = 0; j < layout_.covariates(); ++j) joint_.push_back(j);
    if (layout_.has_shape()) joint_.push_back(layout_.shape_index());
    // The shift move leaves the likelihood unchanged when the design has an
    // intercept and the effect enters the linear predictor additively.
    const Family family = layout_.family();
    const bool additive = layout_.effect() == EffectType::Random ||
                          (layout_.effect() == EffectType::Frailty &&
                           (family == Family::Exponential || family == Family::Weibull));
    shift_ = layout_.has_effects() && additive && (model_.data().design.col(0).array() == 1.0).all();
    scalar_indices_.clear();
    if (layout_.has_shape()) scalar_indices_.push_back(layout_.shape_index());
    if (layout_.has_effects()) {
      for (Eigen::Index i = 0; i < layout_.clusters(); ++i) scalar_indices_.push_back(layout_.effect_offset() + i);
      scalar_indices_.push_back(layout_.phi_index());
    }
  }

 private:
  double safe_prior(const Eigen::VectorXd& theta) const {
    try {
      const double lp = model_.log_prior(theta);
      return std::isnan(lp) ? kNegInf : lp;
    } catch (const std::exception&) {
      return kNegInf;
    }
  }

  double safe_cluster_ll(const Eigen::VectorXd& theta, Eigen::Index cluster) const {
    try {
      const double ll = model_.cluster_log_likelihood(theta, cluster);
      return std::isfinite(ll) ? ll : kNegInf;
    } catch (const std::exception&) {
      return kNegInf;
    }
  }

  Eigen::VectorXd all_cluster_ll(const Eigen::VectorXd& theta) const {
    Eigen::VectorXd ll(layout_.clusters());
    for (Eigen::Index c = 0; c < ll.size(); ++c) {
      ll(c) = safe_cluster_ll(theta, c);
      if (ll(c) == kNegInf) return Eigen::VectorXd::Constant(ll.size(), kNegInf);
    }
    return ll;
  }

  bool accept(double log_ratio) {
    if (!(log_ratio > kNegInf)) return false;
    return log_ratio >= 0.0 || std::log(rng_.uniform_open()) < log_ratio;
  }

  bool propose_global(const Eigen::VectorXd& proposal) {
    const double lp = safe_prior(proposal);
    if (lp == kNegInf) {
      rng_.uniform();  // keep the stream aligned whether or not the prior rejects
      return false;
    }
    const Eigen::VectorXd ll = all_cluster_ll(proposal);
    if (ll(0) == kNegInf) {
      rng_.uniform();
      return false;
    }
    if (!accept(lp + ll.sum() - (log_prior_ + cluster_ll_.sum()))) return false;
    theta_ = proposal;
    log_prior_ = lp;
    cluster_ll_ = ll;
    return true;
  }

  bool propose_cluster(const Eigen::VectorXd& proposal, Eigen::Index cluster) {
    const double lp = safe_prior(proposal);
    const double ll = lp == kNegInf ? kNegInf : safe_cluster_ll(proposal, cluster);
    if (ll == kNegInf) {
      rng_.uniform();
      return false;
    }
    if (!accept(lp + ll - (log_prior_ + cluster_ll_(cluster)))) return false;
    theta_ = proposal;
    log_prior_ = lp;
    cluster_ll_(cluster) = ll;
    return true;
  }

  bool propose_prior_only(const Eigen::VectorXd& proposal) {
    const double lp = safe_prior(proposal);
    if (lp == kNegInf) {
      rng_.uniform();
      return false;
    }
    if (!accept(lp - log_prior_)) return false;
    theta_ = proposal;
    log_prior_ = lp;
    return true;
  }

  bool refresh_beta_covariance(const Eigen::MatrixXd& recent) {
    const Eigen::RowVectorXd mean = recent.colwise().mean();
    const Eigen::MatrixXd centered = recent.rowwise() - mean;
    Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(recent.rows() - 1);
    const double ridge = 1e-10 + 1e-8 * cov.diagonal().mean();
    cov.diagonal().array() += ridge;
    const Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success || !cov.allFinite() || cov.diagonal().maxCoeff() <= 0.0) return false;
    beta_chol_ = llt.matrixL();
    return true;
  }

  void initialize() {
    set_blocks();
    Eigen::VectorXd start = Eigen::VectorXd::Zero(layout_.dim());
    if (layout_.has_effects()) start(layout_.phi_index()) = std::log(0.5 * model_.spec().prior.phi_upper);
    for (int attempt = 0; attempt < config_.init_retries; ++attempt) {
      Eigen::VectorXd candidate = start;
      for (Eigen::Index j = 0; j < candidate.size(); ++j) candidate(j) += config_.init_jitter * rng_.normal();
      const double lp = safe_prior(candidate);
      if (lp == kNegInf) continue;
      const Eigen::VectorXd ll = all_cluster_ll(candidate);
      if (ll(0) == kNegInf) continue;
      theta_ = candidate;
      log_prior_ = lp;
      cluster_ll_ = ll;
      return;
    }
    throw SamplerError("sampler initialization failed: log posterior is -infinity at every jittered start");
  }

  const SurvivalModel& model_;
  const ParamLayout& layout_;
  const SamplerConfig& config_;
  Xoshiro256 rng_;
  Eigen::VectorXd theta_;
  double log_prior_ = 0.0;
  Eigen::VectorXd cluster_ll_;
  Eigen::MatrixXd beta_chol_;
  std::vector<Eigen::Index> joint_;
  std::vector<Eigen::Index> scalar_indices_;
  bool shift_ = false;
};

}  // namespace

void SamplerConfig::validate() const {
  if (chains < 1) throw std::invalid_argument("sampler needs at least one chain");
  if (iterations < 1) throw std::invalid_argument("sampler needs a positive number of iterations");
  if (burnin < 0 || burnin >= iterations) throw std::invalid_argument("burn-in must be in [0, iterations)");
  if (adaptation_window < 1) throw std::invalid_argument("adaptation window must be positive");
  if (!(target_accept_block > 0.0 && target_accept_block < 1.0) ||
      !(target_accept_scalar > 0.0 && target_accept_scalar < 1.0))
    throw std::invalid_argument("target acceptance rates must lie in (0, 1)");
  if (joint_repeats < 0) throw std::invalid_argument("joint_repeats must be non-negative");
  if (!(initial_step > 0.0) || !(init_jitter >= 0.0) || init_retries < 1)
    throw std::invalid_argument("invalid initial step, jitter or retry count");
}

PosteriorDraws run_chains(const SurvivalModel& model, const SamplerConfig& config) {
  config.validate();
  const auto chains = static_cast<std::size_t>(config.chains);
  std::vector<ChainResult> results(chains);
  std::vector<std::exception_ptr> errors(chains);

  auto work = [&](std::size_t c) {
    try {
      Chain chain(model, config, static_cast<int>(c));
      results[c] = chain.run();
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };
  if (config.parallel_chains && chains > 1) {
    std::vector<std::thread> threads;
    threads.reserve(chains);
    for (std::size_t c = 0; c < chains; ++c) threads.emplace_back(work, c);
    for (auto& t : threads) t.join();
  } else {
    for (std::size_t c = 0; c < chains; ++c) work(c);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  PosteriorDraws draws;
  draws.spec = model.spec();
  draws.layout = model.layout();
  draws.columns = model.layout().column_names(model.data().covariate_names, model.data().cluster_labels);
  Chain names(model, config, 0);
  names.set_blocks();
  draws.blocks = names.block_names(draws.columns);
  for (auto& r : results) {
    draws.chains.push_back(std::move(r.draws));
    draws.acceptance.push_back(std::move(r.acceptance));
  }
  return draws;
}

PosteriorDraws run_chains(const SurvivalDataset& data, const ModelSpec& spec, const SamplerConfig& config) {
  return run_chains(SurvivalModel(data, spec), config);
}

}  // namespace brmst
