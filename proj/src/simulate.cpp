#include "mmph/simulate.hpp"

#include <cmath>
#include <string>

namespace mmph {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream RngStream::substream(std::uint64_t index) const {
  std::uint64_t s = state_ ^ (0x9e3779b97f4a7c15ULL * (index + 1));
  std::uint64_t mixed = splitmix64(s);
  return RngStream(mixed);
}

std::uint64_t RngStream::next_u64() { return splitmix64(state_); }

double RngStream::uniform() {
  // 53-bit mantissa, strictly inside (0, 1)
  const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  return u == 0.0 ? 0x1.0p-53 : u;
}

double RngStream::exponential(double rate) { return -std::log(uniform()) / rate; }

int RngStream::categorical(const Vector& probs) {
  const double u = uniform() * probs.sum();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    acc += probs(i);
    if (u <= acc) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size() - 1);
}

SamplePath sample_path(const JointModel& model, RngStream& rng) {
  const PhRep& ph = model.ph();
  const EmbeddedChain chain = ph.embedded_chain();
  const int p = model.dim();
  SamplePath path;
  int state = rng.categorical(ph.initial());
  while (true) {
    path.states.push_back(state);
    path.sojourns.push_back(rng.exponential(-ph.sub_intensity()(state, state)));
    Vector next(p + 1);
    next.head(p) = chain.probs.row(state);
    next(p) = chain.exit_probs(state);
    const int nxt = rng.categorical(next);
    if (nxt == p) return path;
    state = nxt;
  }
}

JointSample path_to_sample(const SamplePath& path, const JointModel& model) {
  if (path.states.empty() || path.states.size() != path.sojourns.size()) {
    throw ValidationError("path_to_sample: malformed path");
  }
  double y = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < path.states.size(); ++i) {
    y += path.sojourns[i];
    if (path.states[i] < model.eplus_size()) ++n;
  }
  if (n == 0) {
    throw ValidationError("path_to_sample: path never enters a counted state");
  }
  return {y, n};
}

SufficientStats path_statistics(std::span<const SamplePath> paths, const JointModel& model) {
  if (paths.empty()) {
    throw ValidationError("path_statistics: need at least one path");
  }
  SufficientStats stats = SufficientStats::zero(model.dim());
  for (const SamplePath& path : paths) {
    if (path.states.empty() || path.states.size() != path.sojourns.size()) {
      throw ValidationError("path_statistics: malformed path");
    }
    stats.b(path.states.front()) += 1.0;
    stats.n_exit(path.states.back()) += 1.0;
    for (std::size_t i = 0; i < path.states.size(); ++i) {
      stats.z(path.states[i]) += path.sojourns[i];
      if (i + 1 < path.states.size()) {
        stats.n_trans(path.states[i], path.states[i + 1]) += 1.0;
      }
    }
  }
  return stats;
}

std::vector<JointSample> generate_dataset(const JointModel& model, int count,
                                          std::uint64_t seed) {
  if (count < 0) throw ValidationError("generate_dataset: count must be nonnegative");
  const RngStream root(seed);
  std::vector<JointSample> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    RngStream stream = root.substream(static_cast<std::uint64_t>(i));
    out.push_back(path_to_sample(sample_path(model, stream), model));
  }
  return out;
}

}  // namespace mmph
