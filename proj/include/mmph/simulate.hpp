#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mmph/jointmodel.hpp"
#include "mmph/sufficient_stats.hpp"

namespace mmph {

// Splittable counter-seeded stream (splitmix64). Substreams derived from the
// same seed are independent and reproducible, so generation can be sharded
// across workers without changing the output.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(seed) {}

  RngStream substream(std::uint64_t index) const;
  std::uint64_t next_u64();
  double uniform();                      // (0, 1)
  double exponential(double rate);       // inverse-cdf sampling
  int categorical(const Vector& probs);  // index proportional to probs

 private:
  std::uint64_t state_;
};

struct SamplePath {
  std::vector<int> states;        // visited transient states, in order
  std::vector<double> sojourns;   // holding time of each visit
};

struct JointSample {
  double y;
  int n;
};

SamplePath sample_path(const JointModel& model, RngStream& rng);
JointSample path_to_sample(const SamplePath& path, const JointModel& model);
SufficientStats path_statistics(std::span<const SamplePath> paths, const JointModel& model);
std::vector<JointSample> generate_dataset(const JointModel& model, int count,
                                          std::uint64_t seed);

}  // namespace mmph
