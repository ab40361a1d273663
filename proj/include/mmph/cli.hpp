#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mmph/dataset.hpp"
#include "mmph/model_io.hpp"

namespace mmph::cli {

struct PremiumReport {
  double joint_estimate = 0.0;        // E[Y N] on the raw scale
  double independent_estimate = 0.0;  // E[Y] E[N] on the raw scale
  double empirical_mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  bool independent_from_document = true;
};

// Raw-scale premium comparison; the shift lives here, not in the math modules.
PremiumReport premium_report(const ModelDocument& doc, const Dataset& data,
                             double tail_tol = 1e-12);

// Exit codes: 0 ok, 2 validation, 3 numerical, 4 I/O.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mmph::cli
