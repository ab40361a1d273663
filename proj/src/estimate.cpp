#include "mmph/estimate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <thread>

namespace mmph {

namespace {

constexpr double kLogFloor = -690.77552789821368;  // log(1e-300)

struct WeightedObs {
  double y;
  int n;
  double weight;
};

// Observations with identical (y, n) share one E-step computation.
std::vector<WeightedObs> group_observations(std::span<const JointSample> data) {
  std::vector<WeightedObs> obs;
  obs.reserve(data.size());
  for (const JointSample& s : data) {
    if (!(s.y >= 0.0) || s.n < 1) {
      throw ValidationError("observation (" + std::to_string(s.y) + ", " +
                            std::to_string(s.n) + ") is outside the support");
    }
    obs.push_back({s.y, s.n, 1.0});
  }
  std::sort(obs.begin(), obs.end(), [](const WeightedObs& a, const WeightedObs& b) {
    return a.n != b.n ? a.n < b.n : a.y < b.y;
  });
  std::vector<WeightedObs> grouped;
  for (const WeightedObs& o : obs) {
    if (!grouped.empty() && grouped.back().n == o.n && grouped.back().y == o.y) {
      grouped.back().weight += 1.0;
    } else {
      grouped.push_back(o);
    }
  }
  return grouped;
}

int resolve_threads(int requested, std::size_t work_items) {
  int t = requested > 0 ? requested
                        : static_cast<int>(std::thread::hardware_concurrency());
  if (t < 1) t = 1;
  return static_cast<int>(std::min<std::size_t>(t, std::max<std::size_t>(work_items, 1)));
}

// Splits work into a fixed number of contiguous chunks and merges the chunk
// results in index order, so totals do not depend on the thread count.
template <typename Acc, typename MakeAcc, typename Work>
Acc run_chunked(std::size_t count, int threads, const MakeAcc& make_acc, const Work& work) {
  const std::size_t chunk_count = std::min<std::size_t>(64, std::max<std::size_t>(count, 1));
  std::vector<Acc> partial;
  partial.reserve(chunk_count);
  for (std::size_t c = 0; c < chunk_count; ++c) partial.push_back(make_acc());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto runner = [&]() {
    while (true) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunk_count) return;
      const std::size_t lo = count * c / chunk_count;
      const std::size_t hi = count * (c + 1) / chunk_count;
      try {
        for (std::size_t i = lo; i < hi; ++i) work(i, partial[c]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  const int nthreads = resolve_threads(threads, chunk_count);
  if (nthreads <= 1) {
    runner();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(runner);
    for (std::thread& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  Acc total = make_acc();
  for (const Acc& part : partial) total.merge(part);
  return total;
}

// One EM iteration's shared state: the augmented generator for the largest
// observed count plus the diagonal shift keeping every exponential in range.
class EStepWorkspace {
 public:
  EStepWorkspace(const JointModel& model, int n_max)
      : model_(model),
        p_(model.dim()),
        eplus_(model.eplus_size()),
        aug_(model.augment(n_max)),
        shift_(model.ph().sub_intensity().diagonal().maxCoeff()) {}

  // log f(y, n) through the leading corner of the augmentation.
  double log_density(double y, int n) const {
    const int q = n * p_;
    const Matrix corner = shifted_corner(q);
    const Vector row = mat_exp(corner * y).transpose() * aug_.initial().head(q);
    const double scaled = row.segment((n - 1) * p_, p_).dot(exit_base());
    if (!(scaled > 0.0) || !std::isfinite(scaled)) {
      return -std::numeric_limits<double>::infinity();
    }
    return std::log(scaled) + shift_ * y;
  }

  struct ObsStats {
    SufficientStats stats;
    double loglik;
  };

  // Conditional expectations for a single (y, n); every ratio is invariant to
  // the diagonal shift, which cancels between numerators and denominator.
  ObsStats expectations(double y, int n) const {
    const int p = p_;
    const int q = n * p;
    const Vector alpha_head = aug_.initial().head(q);
    Vector exit_head = Vector::Zero(q);
    exit_head.segment((n - 1) * p, p) = exit_base();

    Matrix block = Matrix::Zero(2 * q, 2 * q);
    block.topLeftCorner(q, q) = shifted_corner(q);
    block.bottomRightCorner(q, q) = block.topLeftCorner(q, q);
    block.topRightCorner(q, q) = exit_head * alpha_head.transpose();
    const Matrix big = mat_exp(block * y);
    const auto expo = big.topLeftCorner(q, q);
    const auto integral = big.topRightCorner(q, q);

    const Vector to_exit = expo * exit_head;            // e^{Ty} t^(n)
    const Vector from_init = expo.transpose() * alpha_head;  // alpha e^{Ty}
    const double denom = alpha_head.dot(to_exit);
    if (!(denom > 0.0) || !std::isfinite(denom)) {
      throw NumericalError("e_step: observation (y=" + std::to_string(y) +
                           ", n=" + std::to_string(n) + ") has zero likelihood");
    }

    ObsStats out{SufficientStats::zero(p), std::log(denom) + shift_ * y};
    const Vector& alpha = model_.ph().initial();
    const Matrix& t = model_.ph().sub_intensity();
    for (int i = 0; i < p; ++i) {
      out.stats.b(i) = alpha(i) * to_exit(i) / denom;
      out.stats.n_exit(i) = from_init((n - 1) * p + i) * exit_base()(i) / denom;
      double zi = 0.0;
      for (int lev = 0; lev < n; ++lev) zi += integral(lev * p + i, lev * p + i);
      out.stats.z(i) = zi / denom;
    }
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j < p; ++j) {
        if (i == j || t(i, j) <= 0.0) continue;
        double acc = 0.0;
        if (j < eplus_) {
          // jumps into counted states move one level up
          for (int lev = 0; lev + 1 < n; ++lev) acc += integral((lev + 1) * p + j, lev * p + i);
        } else {
          for (int lev = 0; lev < n; ++lev) acc += integral(lev * p + j, lev * p + i);
        }
        out.stats.n_trans(i, j) = t(i, j) * acc / denom;
      }
    }
    return out;
  }

 private:
  const JointModel& model_;
  int p_;
  int eplus_;
  AugmentedRep aug_;
  double shift_;

  const Vector& exit_base() const { return model_.ph().exit_rates(); }

  Matrix shifted_corner(int q) const {
    Matrix corner = aug_.sub_intensity().topLeftCorner(q, q);
    corner.diagonal().array() -= shift_;
    return corner;
  }
};

struct StatsAccumulator {
  SufficientStats stats;
  double loglik = 0.0;
  void merge(const StatsAccumulator& other) {
    stats.merge(other.stats);
    loglik += other.loglik;
  }
};

struct LoglikAccumulator {
  double loglik = 0.0;
  int floored = 0;
  void merge(const LoglikAccumulator& other) {
    loglik += other.loglik;
    floored += other.floored;
  }
};

int max_count(std::span<const JointSample> data) {
  int n_max = 1;
  for (const JointSample& s : data) n_max = std::max(n_max, s.n);
  return n_max;
}

StatsAccumulator e_step_grouped(const JointModel& model,
                                const std::vector<WeightedObs>& grouped, int n_max,
                                int threads) {
  const EStepWorkspace ws(model, n_max);
  const int p = model.dim();
  return run_chunked<StatsAccumulator>(
      grouped.size(), threads,
      [p] {
        return StatsAccumulator{SufficientStats::zero(p), 0.0};
      },
      [&](std::size_t i, StatsAccumulator& acc) {
        const WeightedObs& o = grouped[i];
        EStepWorkspace::ObsStats obs = ws.expectations(o.y, o.n);
        acc.stats.b += o.weight * obs.stats.b;
        acc.stats.z += o.weight * obs.stats.z;
        acc.stats.n_trans += o.weight * obs.stats.n_trans;
        acc.stats.n_exit += o.weight * obs.stats.n_exit;
        acc.loglik += o.weight * obs.loglik;
      });
}

double loglik_grouped(const JointModel& model, const std::vector<WeightedObs>& grouped,
                      int n_max, int threads, int* floored) {
  const EStepWorkspace ws(model, n_max);
  LoglikAccumulator total = run_chunked<LoglikAccumulator>(
      grouped.size(), threads, [] { return LoglikAccumulator{}; },
      [&](std::size_t i, LoglikAccumulator& acc) {
        const WeightedObs& o = grouped[i];
        double lf = ws.log_density(o.y, o.n);
        if (!std::isfinite(lf)) {
          lf = kLogFloor;
          acc.floored += static_cast<int>(o.weight);
        }
        acc.loglik += o.weight * lf;
      });
  if (floored) *floored = total.floored;
  return total.loglik;
}

}  // namespace

double loglikelihood(const JointModel& model, std::span<const JointSample> data,
                     int* floored) {
  if (data.empty()) throw ValidationError("loglikelihood: empty dataset");
  const auto grouped = group_observations(data);
  return loglik_grouped(model, grouped, max_count(data), 0, floored);
}

SufficientStats e_step(const JointModel& model, std::span<const JointSample> data,
                       int threads, double* loglik) {
  if (data.empty()) throw ValidationError("e_step: empty dataset");
  const auto grouped = group_observations(data);
  StatsAccumulator acc = e_step_grouped(model, grouped, max_count(data), threads);
  if (loglik) *loglik = acc.loglik;
  return acc.stats;
}

namespace {

JointModel m_step_impl(const SufficientStats& stats, int dataset_size, int eplus_size,
                       const JointModel* previous, int* starved_events) {
  const auto p = stats.z.size();
  if (stats.b.size() != p || stats.n_exit.size() != p || stats.n_trans.rows() != p ||
      stats.n_trans.cols() != p) {
    throw ValidationError("m_step: inconsistent statistic dimensions");
  }
  if (dataset_size < 1) throw ValidationError("m_step: dataset size must be positive");

  Vector alpha = stats.b / static_cast<double>(dataset_size);
  for (Eigen::Index i = eplus_size; i < p; ++i) alpha(i) = 0.0;
  const double mass = alpha.sum();
  if (!(mass > 0.0)) throw NumericalError("m_step: no initial mass on counted states");
  alpha /= mass;

  Matrix t = Matrix::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    bool starved = !(stats.z(i) > 1e-250);
    double diag = 0.0;
    if (!starved) {
      for (Eigen::Index j = 0; j < p; ++j) {
        if (i == j) continue;
        t(i, j) = stats.n_trans(i, j) / stats.z(i);
        diag -= t(i, j);
      }
      diag -= stats.n_exit(i) / stats.z(i);
      starved = !(diag < 0.0) || !std::isfinite(diag);
    }
    if (starved) {
      if (!previous) throw StarvedStateError(static_cast<int>(i), stats.z(i));
      t.row(i) = previous->ph().sub_intensity().row(i);
      if (starved_events) ++*starved_events;
    } else {
      t(i, i) = diag;
    }
  }
  return JointModel(PhRep(std::move(alpha), std::move(t)), eplus_size);
}

}  // namespace

JointModel m_step(const SufficientStats& stats, int dataset_size, int eplus_size) {
  return m_step_impl(stats, dataset_size, eplus_size, nullptr, nullptr);
}

JointModel m_step_guarded(const SufficientStats& stats, int dataset_size, int eplus_size,
                          const JointModel& previous, int* starved_events) {
  return m_step_impl(stats, dataset_size, eplus_size, &previous, starved_events);
}

namespace {

double median_of(std::span<const JointSample> data) {
  std::vector<double> ys;
  ys.reserve(data.size());
  for (const JointSample& s : data) ys.push_back(s.y);
  const std::size_t mid = ys.size() / 2;
  std::nth_element(ys.begin(), ys.begin() + mid, ys.end());
  return std::max(ys[mid], 1e-12);
}

}  // namespace

FitResult em_fit(std::span<const JointSample> data, const FitConfig& config) {
  if (data.empty()) throw ValidationError("em_fit: empty dataset");
  if (config.p < 1 || config.eplus_size < 1 || config.eplus_size > config.p) {
    throw ValidationError("em_fit: invalid model dimensions");
  }
  if (config.max_iters < 1 || config.restarts < 1) {
    throw ValidationError("em_fit: iterations and restarts must be positive");
  }
  const auto grouped = group_observations(data);
  const int n_max = max_count(data);
  const double scale = median_of(data);
  const RngStream root(config.seed);

  std::optional<FitResult> best;
  std::string failures;
  for (int r = 0; r < config.restarts; ++r) {
    RngStream rng = root.substream(static_cast<std::uint64_t>(r));
    try {
      JointModel model = random_start(config.p, config.eplus_size, scale, rng);
      std::vector<double> trace;
      int iterations = 0;
      int starved = 0;
      double prev_ll = -std::numeric_limits<double>::infinity();
      int quiet = 0;
      for (int iter = 0; iter < config.max_iters; ++iter) {
        StatsAccumulator acc = e_step_grouped(model, grouped, n_max, config.threads);
        trace.push_back(acc.loglik);
        iterations = iter + 1;
        model = m_step_guarded(acc.stats, static_cast<int>(data.size()),
                               config.eplus_size, model, &starved);
        if (config.ll_rel_tol > 0.0 && std::isfinite(prev_ll)) {
          const double rel =
              std::abs(acc.loglik - prev_ll) / std::max(1.0, std::abs(acc.loglik));
          quiet = rel < config.ll_rel_tol ? quiet + 1 : 0;
          if (quiet >= 10) break;
        }
        prev_ll = acc.loglik;
      }
      const double final_ll =
          loglik_grouped(model, grouped, n_max, config.threads, nullptr);
      if (!best || final_ll > best->final_loglik) {
        best = FitResult{std::move(model), std::move(trace), final_ll, r, iterations,
                         starved};
      }
    } catch (const NumericalError& e) {
      failures += "restart " + std::to_string(r) + ": " + e.what() + "; ";
    }
  }
  if (!best) {
    throw NumericalError("em_fit: every restart failed numerically (" + failures + ")");
  }
  return *std::move(best);
}

// ---------------------------------------------------------------------------
// Independent baselines

namespace {

struct PhEmIteration {
  SufficientStats stats;
  double loglik = 0.0;
};

// Classical E-step for a plain continuous law: same conditional expectations,
// on the base representation with its single exit vector.
PhEmIteration ph_e_step(const PhRep& rep, const std::vector<WeightedObs>& grouped,
                        int threads) {
  const int p = rep.dim();
  const double shift = rep.sub_intensity().diagonal().maxCoeff();
  Matrix shifted = rep.sub_intensity();
  shifted.diagonal().array() -= shift;
  struct Acc {
    SufficientStats stats;
    double loglik = 0.0;
    void merge(const Acc& o) {
      stats.merge(o.stats);
      loglik += o.loglik;
    }
  };
  Acc total = run_chunked<Acc>(
      grouped.size(), threads, [p] { return Acc{SufficientStats::zero(p), 0.0}; },
      [&](std::size_t idx, Acc& acc) {
        const double y = grouped[idx].y;
        const double w = grouped[idx].weight;
        const auto [expo, integral] =
            van_loan_integral(shifted, rep.exit_rates(), rep.initial(), y);
        const Vector to_exit = expo * rep.exit_rates();
        const Vector from_init = expo.transpose() * rep.initial();
        const double denom = rep.initial().dot(to_exit);
        if (!(denom > 0.0) || !std::isfinite(denom)) {
          throw NumericalError("ph fit: observation y=" + std::to_string(y) +
                               " has zero likelihood");
        }
        acc.loglik += w * (std::log(denom) + shift * y);
        for (int i = 0; i < p; ++i) {
          acc.stats.b(i) += w * rep.initial()(i) * to_exit(i) / denom;
          acc.stats.n_exit(i) += w * from_init(i) * rep.exit_rates()(i) / denom;
          acc.stats.z(i) += w * integral(i, i) / denom;
          for (int j = 0; j < p; ++j) {
            if (i != j && rep.sub_intensity()(i, j) > 0.0) {
              acc.stats.n_trans(i, j) +=
                  w * rep.sub_intensity()(i, j) * integral(j, i) / denom;
            }
          }
        }
      });
  return {total.stats, total.loglik};
}

PhRep ph_m_step(const SufficientStats& stats, double dataset_size, const PhRep& previous) {
  const auto p = stats.z.size();
  Vector alpha = stats.b / dataset_size;
  alpha = alpha.cwiseMax(0.0);
  alpha /= alpha.sum();
  Matrix t = Matrix::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    bool starved = !(stats.z(i) > 1e-250);
    double diag = 0.0;
    if (!starved) {
      for (Eigen::Index j = 0; j < p; ++j) {
        if (i == j) continue;
        t(i, j) = stats.n_trans(i, j) / stats.z(i);
        diag -= t(i, j);
      }
      diag -= stats.n_exit(i) / stats.z(i);
      starved = !(diag < 0.0) || !std::isfinite(diag);
    }
    if (starved) {
      t.row(i) = previous.sub_intensity().row(i);
    } else {
      t(i, i) = diag;
    }
  }
  return PhRep(std::move(alpha), std::move(t));
}

struct DphEmIteration {
  Vector starts;
  Vector visits;
  Matrix trans;
  Vector absorb;
  double loglik = 0.0;
};

DphEmIteration dph_e_step(const DphRep& rep, const std::vector<WeightedObs>& grouped,
                          int n_max) {
  const int q = rep.dim();
  // powers of Q applied to the initial row and the exit column, shared by all
  // observations
  std::vector<Vector> rows(n_max), cols(n_max);
  rows[0] = rep.initial();
  cols[0] = rep.exit_probs();
  for (int s = 1; s < n_max; ++s) {
    rows[s] = rep.sub_transition().transpose() * rows[s - 1];
    cols[s] = rep.sub_transition() * cols[s - 1];
  }
  DphEmIteration it{Vector::Zero(q), Vector::Zero(q), Matrix::Zero(q, q), Vector::Zero(q),
                    0.0};
  for (const WeightedObs& o : grouped) {
    const int n = o.n;
    const double w = o.weight;
    const double denom = rows[n - 1].dot(rep.exit_probs());
    if (!(denom > 0.0)) {
      throw NumericalError("dph fit: count n=" + std::to_string(n) +
                           " has zero likelihood");
    }
    it.loglik += w * std::log(denom);
    for (int i = 0; i < q; ++i) {
      it.starts(i) += w * rep.initial()(i) * cols[n - 1](i) / denom;
      it.absorb(i) += w * rows[n - 1](i) * rep.exit_probs()(i) / denom;
      for (int s = 0; s < n; ++s) {
        it.visits(i) += w * rows[s](i) * cols[n - 1 - s](i) / denom;
      }
    }
    for (int s = 0; s + 1 < n; ++s) {
      for (int i = 0; i < q; ++i) {
        for (int j = 0; j < q; ++j) {
          if (rep.sub_transition()(i, j) > 0.0) {
            it.trans(i, j) += w * rows[s](i) * rep.sub_transition()(i, j) *
                              cols[n - 2 - s](j) / denom;
          }
        }
      }
    }
  }
  return it;
}

DphRep dph_m_step(const DphEmIteration& it, double dataset_size, const DphRep& previous) {
  const auto q = it.starts.size();
  Vector alpha = it.starts / dataset_size;
  alpha = alpha.cwiseMax(0.0);
  alpha /= alpha.sum();
  Matrix trans = Matrix::Zero(q, q);
  for (Eigen::Index i = 0; i < q; ++i) {
    if (!(it.visits(i) > 1e-250)) {
      trans.row(i) = previous.sub_transition().row(i);
      continue;
    }
    for (Eigen::Index j = 0; j < q; ++j) trans(i, j) = it.trans(i, j) / it.visits(i);
  }
  return DphRep(std::move(alpha), std::move(trans));
}

}  // namespace

IndependentFit fit_independent(std::span<const JointSample> data, int p, int q_dim,
                               const FitConfig& config) {
  if (data.empty()) throw ValidationError("fit_independent: empty dataset");
  if (p < 1 || q_dim < 1) throw ValidationError("fit_independent: invalid dimensions");
  const auto grouped_y = group_observations(data);
  // counts collapse to at most n_max distinct observations
  std::vector<WeightedObs> grouped_n;
  for (const JointSample& s : data) {
    auto at = std::find_if(grouped_n.begin(), grouped_n.end(),
                           [&](const WeightedObs& o) { return o.n == s.n; });
    if (at == grouped_n.end()) {
      grouped_n.push_back({0.0, s.n, 1.0});
    } else {
      at->weight += 1.0;
    }
  }
  std::sort(grouped_n.begin(), grouped_n.end(),
            [](const WeightedObs& a, const WeightedObs& b) { return a.n < b.n; });
  const int n_max = max_count(data);
  const double scale = median_of(data);
  const double m = static_cast<double>(data.size());
  const RngStream root(config.seed);

  std::optional<IndependentFit> best_y;
  std::optional<IndependentFit> best_n;
  std::string failures;
  for (int r = 0; r < config.restarts; ++r) {
    // continuous part
    try {
      RngStream rng = root.substream(2 * static_cast<std::uint64_t>(r));
      PhRep ph = random_start_ph(p, scale, rng);
      std::vector<double> trace;
      double prev = -std::numeric_limits<double>::infinity();
      int quiet = 0;
      for (int iter = 0; iter < config.max_iters; ++iter) {
        PhEmIteration it = ph_e_step(ph, grouped_y, config.threads);
        trace.push_back(it.loglik);
        ph = ph_m_step(it.stats, m, ph);
        if (config.ll_rel_tol > 0.0 && std::isfinite(prev)) {
          const double rel = std::abs(it.loglik - prev) / std::max(1.0, std::abs(it.loglik));
          quiet = rel < config.ll_rel_tol ? quiet + 1 : 0;
          if (quiet >= 10) break;
        }
        prev = it.loglik;
      }
      double ll = 0.0;
      for (const WeightedObs& o : grouped_y) ll += o.weight * std::log(ph.density(o.y));
      if (!best_y || ll > best_y->loglik_y) {
        best_y.emplace(IndependentFit{ph, DphRep(Vector::Ones(1), Matrix::Zero(1, 1)), ll,
                                      0.0, 0.0, std::move(trace), {}});
      }
    } catch (const NumericalError& e) {
      failures += "y restart " + std::to_string(r) + ": " + e.what() + "; ";
    }
    // discrete part
    try {
      RngStream rng = root.substream(2 * static_cast<std::uint64_t>(r) + 1);
      DphRep dph = random_start_dph(q_dim, rng);
      std::vector<double> trace;
      double prev = -std::numeric_limits<double>::infinity();
      int quiet = 0;
      for (int iter = 0; iter < config.max_iters; ++iter) {
        DphEmIteration it = dph_e_step(dph, grouped_n, n_max);
        trace.push_back(it.loglik);
        dph = dph_m_step(it, m, dph);
        if (config.ll_rel_tol > 0.0 && std::isfinite(prev)) {
          const double rel = std::abs(it.loglik - prev) / std::max(1.0, std::abs(it.loglik));
          quiet = rel < config.ll_rel_tol ? quiet + 1 : 0;
          if (quiet >= 10) break;
        }
        prev = it.loglik;
      }
      double ll = 0.0;
      for (const WeightedObs& o : grouped_n) ll += o.weight * std::log(dph.pmf(o.n));
      if (!best_n || ll > best_n->loglik_n) {
        best_n.emplace(IndependentFit{PhRep(Vector::Ones(1), -Matrix::Ones(1, 1)), dph, 0.0,
                                      ll, 0.0, {}, std::move(trace)});
      }
    } catch (const NumericalError& e) {
      failures += "n restart " + std::to_string(r) + ": " + e.what() + "; ";
    }
  }
  if (!best_y || !best_n) {
    throw NumericalError("fit_independent: every restart failed (" + failures + ")");
  }
  IndependentFit out{best_y->ph,       best_n->dph,
                     best_y->loglik_y, best_n->loglik_n,
                     best_y->loglik_y + best_n->loglik_n,
                     std::move(best_y->trace_y), std::move(best_n->trace_n)};
  return out;
}

JointModel random_start(int p, int eplus_size, double scale, RngStream& rng) {
  if (eplus_size < 1 || eplus_size > p) {
    throw ValidationError("random_start: invalid counted-state block");
  }
  Vector alpha = Vector::Zero(p);
  for (int i = 0; i < eplus_size; ++i) alpha(i) = 1.0 / eplus_size;
  Matrix t(p, p);
  for (int i = 0; i < p; ++i) {
    double out_rate = 0.0;
    for (int j = 0; j < p; ++j) {
      if (i == j) continue;
      t(i, j) = rng.uniform() / scale;
      out_rate += t(i, j);
    }
    const double exit = (0.1 + 0.9 * rng.uniform()) / scale;
    t(i, i) = -(out_rate + exit);
  }
  return JointModel(PhRep(std::move(alpha), std::move(t)), eplus_size);
}

PhRep random_start_ph(int p, double scale, RngStream& rng) {
  Vector alpha = Vector::Constant(p, 1.0 / p);
  Matrix t(p, p);
  for (int i = 0; i < p; ++i) {
    double out_rate = 0.0;
    for (int j = 0; j < p; ++j) {
      if (i == j) continue;
      t(i, j) = rng.uniform() / scale;
      out_rate += t(i, j);
    }
    const double exit = (0.1 + 0.9 * rng.uniform()) / scale;
    t(i, i) = -(out_rate + exit);
  }
  return PhRep(std::move(alpha), std::move(t));
}

DphRep random_start_dph(int q_dim, RngStream& rng) {
  Vector alpha = Vector::Constant(q_dim, 1.0 / q_dim);
  Matrix q(q_dim, q_dim);
  for (int i = 0; i < q_dim; ++i) {
    std::vector<double> weights(q_dim + 1);
    double total = 0.0;
    for (double& w : weights) {
      w = rng.uniform();
      total += w;
    }
    for (int j = 0; j < q_dim; ++j) q(i, j) = weights[j] / total;
  }
  return DphRep(std::move(alpha), std::move(q));
}

}  // namespace mmph
