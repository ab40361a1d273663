#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mmph/jointmodel.hpp"
#include "mmph/simulate.hpp"
#include "mmph/sufficient_stats.hpp"

namespace mmph {

class StarvedStateError : public NumericalError {
 public:
  StarvedStateError(int state, double z)
      : NumericalError("m_step: state " + std::to_string(state) +
                       " has vanishing occupation time " + std::to_string(z)),
        state_(state) {}
  int state() const { return state_; }

 private:
  int state_;
};

struct FitConfig {
  int p = 2;
  int eplus_size = 1;
  int max_iters = 15000;
  int restarts = 5;
  std::uint64_t seed = 0;
  double ll_rel_tol = 1e-9;  // <= 0 disables the early stop
  double tail_tol = 1e-12;
  int threads = 0;  // 0 = hardware concurrency
};

struct FitResult {
  JointModel model;
  std::vector<double> loglik_trace;  // loglik at the start of each iteration
  double final_loglik = 0.0;
  int restart_index = 0;
  int iterations_used = 0;
  int starved_events = 0;
};

// Sum of log joint densities. Zero-density observations contribute
// log(1e-300) and are counted in *floored when given.
double loglikelihood(const JointModel& model, std::span<const JointSample> data,
                     int* floored = nullptr);

// Conditional expectations of the sufficient statistics given the data,
// evaluated on the augmented representation. Throws NumericalError naming the
// first observation whose likelihood vanishes.
SufficientStats e_step(const JointModel& model, std::span<const JointSample> data,
                       int threads = 0, double* loglik = nullptr);

// Closed-form maximizer given (expected) sufficient statistics. Throws
// StarvedStateError when a state has no occupation time.
JointModel m_step(const SufficientStats& stats, int dataset_size, int eplus_size);

// Same, but rows of states starved below representability are frozen at the
// previous iterate instead of aborting; the number of frozen rows is
// accumulated into *starved_events.
JointModel m_step_guarded(const SufficientStats& stats, int dataset_size, int eplus_size,
                          const JointModel& previous, int* starved_events);

// Multi-restart EM; keeps the restart with the best final log-likelihood.
FitResult em_fit(std::span<const JointSample> data, const FitConfig& config);

struct IndependentFit {
  PhRep ph;
  DphRep dph;
  double loglik_y = 0.0;
  double loglik_n = 0.0;
  double loglik_total = 0.0;
  std::vector<double> trace_y;
  std::vector<double> trace_n;
};

// Baseline: classical EM fits of a continuous law to {y} and a discrete law
// to {n}, assuming independence.
IndependentFit fit_independent(std::span<const JointSample> data, int p, int q_dim,
                               const FitConfig& config);

// Random EM starting point: uniform initial mass on the counted states,
// off-diagonal rates ~ U(0,1)/scale, exit rates ~ U(0.1,1)/scale.
JointModel random_start(int p, int eplus_size, double scale, RngStream& rng);

PhRep random_start_ph(int p, double scale, RngStream& rng);
DphRep random_start_dph(int q_dim, RngStream& rng);

}  // namespace mmph
