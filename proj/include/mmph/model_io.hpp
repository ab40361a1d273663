#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mmph/jointmodel.hpp"

namespace mmph {

struct FitMetadata {
  double loglik = 0.0;
  double aic = 0.0;
  int iterations = 0;
  int restarts = 0;
  std::uint64_t seed = 0;
};

// The separately fitted independence baseline, carried along so premium
// comparisons can be reproduced from the document alone.
struct IndependentParts {
  PhRep ph;
  DphRep dph;
  double loglik_y = 0.0;
  double loglik_n = 0.0;
  double aic = 0.0;
};

struct ModelDocument {
  JointModel model;
  double shift = 0.0;
  std::string label;
  std::optional<FitMetadata> fit;
  std::optional<IndependentParts> independent;
};

std::string to_json(const ModelDocument& doc);
ModelDocument model_document_from_json(const std::string& text);

// Atomic write: temp file in the target directory, then rename.
void save_model_document(const ModelDocument& doc, const std::string& path);
ModelDocument load_model_document(const std::string& path);

}  // namespace mmph
