#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "choquet/aggregate.hpp"

namespace choquet {

enum class Label { kClient, kImpostor };

std::string_view to_string(Label label);

struct ScoreRecord {
  std::string person_id;
  Label label = Label::kClient;
  ScoreVector scores;

  friend bool operator==(const ScoreRecord&, const ScoreRecord&) = default;
};

/// Client and impostor score vectors of equal length. Both classes are
/// non-empty and person ids are unique across the whole set.
class LabeledScoreSet {
 public:
  LabeledScoreSet(std::vector<ScoreRecord> clients, std::vector<ScoreRecord> impostors);

  const std::vector<ScoreRecord>& clients() const { return clients_; }
  const std::vector<ScoreRecord>& impostors() const { return impostors_; }
  std::size_t modality_count() const { return modalities_; }
  std::size_t size() const { return clients_.size() + impostors_.size(); }

  /// Scores of one modality for one class, in record order.
  std::vector<double> column(std::size_t modality, Label label) const;

  /// Looks a record up by person id; nullptr if absent.
  const ScoreRecord* find(std::string_view person_id) const;

  friend bool operator==(const LabeledScoreSet&, const LabeledScoreSet&) = default;

 private:
  std::vector<ScoreRecord> clients_;
  std::vector<ScoreRecord> impostors_;
  std::size_t modalities_ = 0;
};

/// The 60-person, three-modality synthetic benchmark: clients P1-P30 and
/// impostors P31-P60.
const LabeledScoreSet& synthetic_dataset();

/// Reads `person_id,label,m1,...,mk`. Labels are "client" or "impostor"
/// (any case). With `normalize`, each score column is min-max normalized
/// over all rows; otherwise every score must already lie in [0, 1].
/// Throws DataError with row/column diagnostics.
LabeledScoreSet read_csv(std::istream& in, bool normalize = false);
LabeledScoreSet load_csv(const std::filesystem::path& path, bool normalize = false);

/// Writes clients then impostors using the load_csv schema; numbers are
/// written in shortest round-trip form.
void write_csv(const LabeledScoreSet& set, std::ostream& out);
void write_csv(const LabeledScoreSet& set, const std::filesystem::path& path);

}  // namespace choquet
