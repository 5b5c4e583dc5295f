#include "dcsp/pursuit.hpp"

#include "dcsp/errors.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace dcsp {

namespace {

/// Payloads visible to node l this round, in ascending sender order,
/// with l's own payload slotted into place.
std::vector<const Payload*> ordered(NodeId l, const Payload& own, const Inbox& inbox) {
  std::vector<const Payload*> out;
  out.reserve(inbox.size() + 1);
  bool placed = false;
  for (const auto& msg : inbox) {
    if (!placed && msg.sender > l) {
      out.push_back(&own);
      placed = true;
    }
    out.push_back(msg.payload.get());
  }
  if (!placed) out.push_back(&own);
  return out;
}

Vector sum_dense(const std::vector<const Payload*>& payloads, Eigen::Index n) {
  Vector acc = Vector::Zero(n);
  for (const auto* p : payloads) acc += std::get<Vector>(*p);
  return acc;
}

Vector sum_scattered(const std::vector<const Payload*>& payloads, Eigen::Index n) {
  Vector acc = Vector::Zero(n);
  for (const auto* p : payloads) {
    const auto& c = std::get<SparseCoefficients>(*p);
    scatter_abs_add(acc, c.support, c.values);
  }
  return acc;
}

double sum_scalars(const std::vector<const Payload*>& payloads) {
  double acc = 0.0;
  for (const auto* p : payloads) acc += std::get<double>(*p);
  return acc;
}

IndexMultiset pool_supports(const std::vector<const Payload*>& payloads) {
  IndexMultiset pooled;
  for (const auto* p : payloads) {
    const auto& s = std::get<IndexSet>(*p);
    pooled.insert(pooled.end(), s.begin(), s.end());
  }
  return pooled;
}

/// Every node derives network-wide values on its own; they must agree.
template <typename T>
const T& consensus(const std::vector<T>& per_node, const char* what) {
  for (const auto& v : per_node) {
    if (!(v == per_node.front())) {
      throw std::logic_error(std::string("pursuit: nodes disagree on ") + what);
    }
  }
  return per_node.front();
}

class Run {
 public:
  Run(const ProblemInstance& instance, Topology topology, std::size_t max_iters)
      : inst_(instance),
        fabric_(std::move(topology)),
        n_(static_cast<Eigen::Index>(instance.config.n)),
        k_(instance.config.k),
        max_iters_(max_iters == 0 ? default_max_iters(instance.config.k) : max_iters) {
    if (fabric_.topology().node_count() != instance.node_count()) {
      throw std::invalid_argument("pursuit: topology has " +
                                  std::to_string(fabric_.topology().node_count()) +
                                  " nodes, instance has " +
                                  std::to_string(instance.node_count()));
    }
    nodes_.resize(instance.node_count());
    for (std::size_t l = 0; l < nodes_.size(); ++l) nodes_[l].id = l + 1;
  }

  RunResult ssp();
  RunResult dcsp();

 private:
  std::size_t count() const { return nodes_.size(); }
  const Matrix& dict(std::size_t i) const { return inst_.dictionaries[i]; }
  const Vector& meas(std::size_t i) const { return inst_.measurements[i]; }
  const IndexSet& hood(std::size_t i) const { return fabric_.topology().neighborhood(i + 1); }

  std::vector<const Payload*> visible(std::size_t i, const std::vector<Payload>& payloads,
                                      const std::vector<Inbox>& inboxes) const {
    return ordered(i + 1, payloads[i], inboxes[i]);
  }

  Vector residual_for(std::size_t i, const IndexSet& s) const {
    return resid(meas(i), column_submatrix(dict(i), s));
  }

  std::vector<Payload> correlations(bool from_residual) const {
    std::vector<Payload> out;
    out.reserve(count());
    for (std::size_t i = 0; i < count(); ++i) {
      out.emplace_back(correlate(dict(i), from_residual ? nodes_[i].residual : meas(i)));
    }
    return out;
  }

  /// Residual norms exchanged network-wide; returns the agreed sum.
  double residual_sum(const std::vector<Vector>& residuals, std::string step, Channel channel) {
    std::vector<Payload> payloads;
    payloads.reserve(count());
    for (const auto& r : residuals) payloads.emplace_back(r.squaredNorm());
    const auto inboxes = fabric_.broadcast_all(std::move(step), payloads, 1, channel);
    std::vector<double> sums(count());
    for (std::size_t i = 0; i < count(); ++i) sums[i] = sum_scalars(visible(i, payloads, inboxes));
    return consensus(sums, "residual sum");
  }

  /// Installs S^0 and r^0 on every node, records iteration 0.
  void initialize(const IndexSet& support, std::vector<IndexSet> local_supports) {
    std::vector<Vector> residuals(count());
    for (std::size_t i = 0; i < count(); ++i) {
      nodes_[i].support = support;
      residuals[i] = residual_for(i, support);
      nodes_[i].set_residual(residuals[i]);
      if (!local_supports.empty()) nodes_[i].local_support = local_supports[i];
    }
    // The first stop test compares against this sum; the closed-form costs
    // do not count the exchange, so it goes on the uncharged channel.
    prev_sum_ = residual_sum(residuals, "init.residual-norm", Channel::Uncharged);
    result_.residual_trace.push_back(prev_sum_);
    result_.log.push_back(
        IterationLog{0, support, prev_sum_, {}, std::move(local_supports), fabric_.wire().charged(), true});
  }

  /// Step 8 / Step 12. Returns true when the run should stop.
  bool finish_iteration(std::size_t t, const IndexSet& support, std::vector<Vector> residuals,
                        std::vector<std::size_t> candidate_sizes,
                        std::vector<IndexSet> local_supports, const char* norm_step) {
    const double sum = residual_sum(residuals, norm_step, Channel::Broadcast);
    const bool stop = sum >= prev_sum_;
    result_.residual_trace.push_back(sum);
    result_.log.push_back(IterationLog{t, support, sum, std::move(candidate_sizes),
                                       local_supports, fabric_.wire().charged(), !stop});
    result_.iterations = t;
    if (stop) return true;
    prev_sum_ = sum;
    for (std::size_t i = 0; i < count(); ++i) {
      nodes_[i].support = support;
      nodes_[i].set_residual(std::move(residuals[i]));
      if (!local_supports.empty()) nodes_[i].local_support = local_supports[i];
    }
    return false;
  }

  RunResult finish() {
    result_.support = nodes_.front().support;
    result_.hit_max_iters = result_.log.back().accepted && result_.iterations == max_iters_;
    result_.wire = fabric_.wire();
    return std::move(result_);
  }

  const ProblemInstance& inst_;
  Fabric fabric_;
  Eigen::Index n_;
  std::size_t k_;
  std::size_t max_iters_;
  std::vector<NodeState> nodes_;
  double prev_sum_ = std::numeric_limits<double>::infinity();
  RunResult result_;
};

RunResult Run::ssp() {
  const auto frame_n = static_cast<std::size_t>(n_);
  {
    // Steps 1-2.
    const auto payloads = correlations(false);
    const auto inboxes = fabric_.broadcast_all("ssp.1.correlation", payloads, frame_n);
    std::vector<IndexSet> s0(count());
    for (std::size_t i = 0; i < count(); ++i) {
      s0[i] = max_ind(sum_dense(visible(i, payloads, inboxes), n_), k_);
    }
    initialize(consensus(s0, "S^0"), {});
  }

  for (std::size_t t = 1; t <= max_iters_; ++t) {
    // Steps 3-4.
    const auto corr = correlations(true);
    const auto corr_in = fabric_.broadcast_all("ssp.3.correlation", corr, frame_n);
    std::vector<Payload> coeffs;
    coeffs.reserve(count());
    std::vector<std::size_t> candidate_sizes(count());
    for (std::size_t i = 0; i < count(); ++i) {
      auto& node = nodes_[i];
      node.candidate =
          node.support.unite(max_ind(sum_dense(visible(i, corr, corr_in), n_), k_));
      candidate_sizes[i] = node.candidate.size();
      // Step 5.
      coeffs.emplace_back(SparseCoefficients{
          node.candidate, lstsq(column_submatrix(dict(i), node.candidate), meas(i))});
    }
    consensus(candidate_sizes, "|S~^t|");
    const auto coeff_in = fabric_.broadcast_all("ssp.5.projection", coeffs, 2 * k_);

    // Step 6.
    std::vector<IndexSet> supports(count());
    for (std::size_t i = 0; i < count(); ++i) {
      supports[i] = max_ind(sum_scattered(visible(i, coeffs, coeff_in), n_), k_);
    }
    const IndexSet support = consensus(supports, "S^t");
    std::vector<Vector> residuals(count());
    for (std::size_t i = 0; i < count(); ++i) residuals[i] = residual_for(i, support);

    // Steps 7-8.
    if (finish_iteration(t, support, std::move(residuals), std::move(candidate_sizes), {},
                         "ssp.7.residual-norm")) {
      break;
    }
  }
  return finish();
}

RunResult Run::dcsp() {
  const auto frame_n = static_cast<std::size_t>(n_);

  // Local estimate from neighborhood-summed correlation payloads.
  auto local_estimates = [&](const std::vector<Payload>& payloads,
                             const std::vector<Inbox>& inboxes, bool scattered) {
    std::vector<Payload> gammas;
    gammas.reserve(count());
    for (std::size_t i = 0; i < count(); ++i) {
      const auto seen = visible(i, payloads, inboxes);
      gammas.emplace_back(max_ind(scattered ? sum_scattered(seen, n_) : sum_dense(seen, n_), k_));
    }
    return gammas;
  };

  // Majority vote over every node's local estimate.
  auto fuse = [&](const std::vector<Payload>& gammas, const std::vector<Inbox>& inboxes) {
    std::vector<IndexSet> fused(count());
    for (std::size_t i = 0; i < count(); ++i) {
      fused[i] = max_occ(pool_supports(visible(i, gammas, inboxes)), k_);
    }
    return consensus(fused, "fused support");
  };

  auto as_sets = [](const std::vector<Payload>& gammas) {
    std::vector<IndexSet> out;
    out.reserve(gammas.size());
    for (const auto& g : gammas) out.push_back(std::get<IndexSet>(g));
    return out;
  };

  {
    // Steps 1-4.
    const auto corr = correlations(false);
    const auto corr_in = fabric_.exchange_neighbors("dcsp.1.correlation", corr, frame_n);
    const auto gammas = local_estimates(corr, corr_in, false);
    const auto gamma_in = fabric_.broadcast_all("dcsp.3.local-support", gammas, k_);
    initialize(fuse(gammas, gamma_in), as_sets(gammas));
  }

  for (std::size_t t = 1; t <= max_iters_; ++t) {
    // Steps 5-6.
    const auto corr = correlations(true);
    const auto corr_in = fabric_.exchange_neighbors("dcsp.5.correlation", corr, frame_n);
    std::vector<Payload> coeffs;
    coeffs.reserve(count());
    std::vector<std::size_t> candidate_sizes(count());
    for (std::size_t i = 0; i < count(); ++i) {
      auto& node = nodes_[i];
      node.candidate =
          node.support.unite(max_ind(sum_dense(visible(i, corr, corr_in), n_), k_));
      candidate_sizes[i] = node.candidate.size();
      coeffs.emplace_back(SparseCoefficients{
          node.candidate, lstsq(column_submatrix(dict(i), node.candidate), meas(i))});
    }

    // Steps 7-8.
    const auto coeff_in = fabric_.exchange_neighbors("dcsp.7.projection", coeffs, 2 * k_);
    const auto gammas = local_estimates(coeffs, coeff_in, true);

    // Steps 9-10.
    const auto gamma_in = fabric_.broadcast_all("dcsp.9.local-support", gammas, k_);
    const IndexSet support = fuse(gammas, gamma_in);
    std::vector<Vector> residuals(count());
    for (std::size_t i = 0; i < count(); ++i) residuals[i] = residual_for(i, support);

    // Steps 11-12.
    if (finish_iteration(t, support, std::move(residuals), std::move(candidate_sizes),
                         as_sets(gammas), "dcsp.11.residual-norm")) {
      break;
    }
  }
  return finish();
}

}  // namespace

std::size_t default_max_iters(std::size_t k) noexcept { return 3 * k; }

RunResult ssp_run(const ProblemInstance& instance, std::size_t max_iters) {
  return Run(instance, Topology::full_mesh(instance.node_count()), max_iters).ssp();
}

RunResult dcsp_run(const ProblemInstance& instance, const Topology& topology,
                   std::size_t max_iters) {
  return Run(instance, topology, max_iters).dcsp();
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // result * (n - k + i) / i stays integral at every step.
    const std::uint64_t factor = n - k + i;
    if (result > std::numeric_limits<std::uint64_t>::max() / factor) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    result = result * factor / i;
  }
  return result;
}

IndexSet exhaustive_decoder(const ProblemInstance& instance, std::uint64_t cap) {
  const auto n = instance.config.n;
  const auto k = instance.config.k;
  const auto total = binomial(n, k);
  if (total > cap) {
    throw TooLarge("exhaustive_decoder: C(" + std::to_string(n) + ", " + std::to_string(k) +
                   ") exceeds cap " + std::to_string(cap));
  }
  std::vector<std::size_t> combo(k);
  for (std::size_t i = 0; i < k; ++i) combo[i] = i + 1;

  double best = std::numeric_limits<double>::infinity();
  IndexSet best_set;
  for (;;) {
    const IndexSet s(combo);
    double total_resid = 0.0;
    bool usable = true;
    for (std::size_t l = 0; l < instance.node_count() && usable; ++l) {
      try {
        total_resid += resid(instance.measurements[l],
                             column_submatrix(instance.dictionaries[l], s))
                           .squaredNorm();
      } catch (const RankDeficient&) {
        usable = false;
      }
    }
    if (usable && total_resid < best) {
      best = total_resid;
      best_set = s;
    }
    // Next combination in lexicographic order.
    std::size_t pos = k;
    while (pos > 0 && combo[pos - 1] == n - k + pos) --pos;
    if (pos == 0) break;
    ++combo[pos - 1];
    for (std::size_t j = pos; j < k; ++j) combo[j] = combo[j - 1] + 1;
  }
  if (best_set.empty()) {
    throw RankDeficient("exhaustive_decoder: every candidate support is rank deficient");
  }
  return best_set;
}

}  // namespace dcsp
