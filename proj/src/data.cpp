#include "choquet/data.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "choquet/metrics.hpp"

namespace choquet {

namespace {

struct SyntheticRow {
  int person;
  std::array<double, 3> scores;
};

// Clients P1-P30.
constexpr std::array<SyntheticRow, 30> kSyntheticClients{{
    {1, {0.98, 0.98, 0.98}},  {2, {0.98, 0.98, 0.6}},   {3, {0.98, 0.6, 0.98}},
    {4, {0.98, 0.6, 0.6}},    {5, {0.98, 0.7, 0.6}},    {6, {0.9, 0.8, 0.7}},
    {7, {0.8, 0.8, 0.8}},     {8, {0.7, 0.9, 0.9}},     {9, {0.7, 0.7, 0.9}},
    {10, {0.7, 0.9, 0.7}},    {11, {0.6, 0.6, 0.6}},    {12, {0.6, 0.7, 0.95}},
    {13, {0.6, 0.95, 0.7}},   {14, {0.55, 0.55, 0.55}}, {15, {0.9, 0.8, 0.4}},
    {16, {0.9, 0.8, 0.1}},    {17, {0.8, 0.75, 0.15}},  {18, {0.7, 0.62, 0.35}},
    {19, {0.68, 0.68, 0.45}}, {20, {0.75, 0.75, 0.3}},  {21, {0.6, 0.9, 0.1}},
    {22, {0.65, 0.95, 0.15}}, {23, {0.85, 0.55, 0.3}},  {24, {0.8, 0.4, 0.6}},
    {25, {0.8, 0.1, 0.6}},    {26, {0.8, 0.3, 0.3}},    {27, {0.4, 0.7, 0.8}},
    {28, {0.3, 0.15, 0.63}},  {29, {0.4, 0.6, 0.35}},   {30, {0.45, 0.2, 0.25}},
}};

// Impostors P31-P60.
constexpr std::array<SyntheticRow, 30> kSyntheticImpostors{{
    {31, {0.1, 0.1, 0.1}},    {32, {0.1, 0.1, 0.3}},    {33, {0.1, 0.3, 0.3}},
    {34, {0.4, 0.1, 0.1}},    {35, {0.4, 0.4, 0.15}},   {36, {0.4, 0.15, 0.4}},
    {37, {0.4, 0.4, 0.4}},    {38, {0.25, 0.45, 0.45}}, {39, {0.25, 0.25, 0.25}},
    {40, {0.35, 0.35, 0.35}}, {41, {0.25, 0.45, 0.4}},  {42, {0.05, 0.3, 0.05}},
    {43, {0.05, 0.05, 0.3}},  {44, {0.4, 0.4, 0.6}},    {45, {0.4, 0.1, 0.6}},
    {46, {0.4, 0.2, 0.75}},   {47, {0.3, 0.1, 0.55}},   {48, {0.2, 0.05, 0.65}},
    {49, {0.15, 0.1, 0.55}},  {50, {0.15, 0.1, 0.7}},   {51, {0.15, 0.4, 0.8}},
    {52, {0.35, 0.7, 0.1}},   {53, {0.35, 0.55, 0.3}},  {54, {0.15, 0.65, 0.2}},
    {55, {0.15, 0.55, 0.4}},  {56, {0.15, 0.55, 0.6}},  {57, {0.6, 0.3, 0.15}},
    {58, {0.6, 0.55, 0.15}},  {59, {0.6, 0.15, 0.55}},  {60, {0.6, 0.55, 0.55}},
}};

template <std::size_t N>
std::vector<ScoreRecord> to_records(const std::array<SyntheticRow, N>& rows,
                                    Label label) {
  std::vector<ScoreRecord> out;
  out.reserve(N);
  for (const auto& row : rows) {
    out.push_back({"P" + std::to_string(row.person), label,
                   ScoreVector({row.scores.begin(), row.scores.end()})});
  }
  return out;
}

std::string trim(std::string_view s) {
  auto begin = s.begin();
  auto end = s.end();
  while (begin != end && std::isspace(static_cast<unsigned char>(*begin))) ++begin;
  while (end != begin && std::isspace(static_cast<unsigned char>(*(end - 1)))) --end;
  return std::string(begin, end);
}

std::string lowercase(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

[[noreturn]] void fail_at(std::size_t row, std::size_t column, const std::string& what) {
  std::ostringstream msg;
  msg << "row " << row << ", column " << column << ": " << what;
  throw DataError(msg.str());
}

std::string shortest(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

struct RawRow {
  std::size_t line;
  std::string person_id;
  Label label;
  std::vector<double> scores;
};

}  // namespace

std::string_view to_string(Label label) {
  return label == Label::kClient ? "client" : "impostor";
}

LabeledScoreSet::LabeledScoreSet(std::vector<ScoreRecord> clients,
                                 std::vector<ScoreRecord> impostors)
    : clients_(std::move(clients)), impostors_(std::move(impostors)) {
  if (clients_.empty()) throw DataError("score set has no client records");
  if (impostors_.empty()) throw DataError("score set has no impostor records");
  modalities_ = clients_.front().scores.size();
  if (modalities_ == 0) throw DataError("score vectors are empty");

  std::set<std::string, std::less<>> ids;
  auto check = [&](const ScoreRecord& r, Label expected) {
    if (r.label != expected) {
      throw DataError("record " + r.person_id + " is filed under the wrong class");
    }
    if (r.scores.size() != modalities_) {
      throw DataError("record " + r.person_id + " has " +
                      std::to_string(r.scores.size()) + " scores, expected " +
                      std::to_string(modalities_));
    }
    if (!ids.insert(r.person_id).second) {
      throw DataError("duplicate person id " + r.person_id);
    }
  };
  for (const auto& r : clients_) check(r, Label::kClient);
  for (const auto& r : impostors_) check(r, Label::kImpostor);
}

std::vector<double> LabeledScoreSet::column(std::size_t modality, Label label) const {
  if (modality >= modalities_) throw InvalidArgument("modality index out of range");
  const auto& records = label == Label::kClient ? clients_ : impostors_;
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.scores[modality]);
  return out;
}

const ScoreRecord* LabeledScoreSet::find(std::string_view person_id) const {
  for (const auto* records : {&clients_, &impostors_}) {
    auto it = std::find_if(records->begin(), records->end(),
                           [&](const ScoreRecord& r) { return r.person_id == person_id; });
    if (it != records->end()) return &*it;
  }
  return nullptr;
}

const LabeledScoreSet& synthetic_dataset() {
  static const LabeledScoreSet set(to_records(kSyntheticClients, Label::kClient),
                                   to_records(kSyntheticImpostors, Label::kImpostor));
  return set;
}

LabeledScoreSet read_csv(std::istream& in, bool normalize) {
  std::string line;
  std::size_t line_no = 0;

  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!trim(line).empty()) {
      header = split_fields(line);
      break;
    }
  }
  if (header.empty()) throw DataError("empty CSV input: missing header");
  if (header.size() < 3 || lowercase(header[0]) != "person_id" ||
      lowercase(header[1]) != "label") {
    throw DataError("malformed header on row " + std::to_string(line_no) +
                    ": expected person_id,label,m1,...");
  }
  for (std::size_t c = 2; c < header.size(); ++c) {
    if (header[c].empty()) fail_at(line_no, c + 1, "empty modality column name");
  }
  const std::size_t modalities = header.size() - 2;

  std::vector<RawRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      std::ostringstream msg;
      msg << "row " << line_no << ": expected " << header.size()
          << " columns, found " << fields.size();
      throw DataError(msg.str());
    }
    RawRow row{line_no, fields[0], Label::kClient, {}};
    if (row.person_id.empty()) fail_at(line_no, 1, "empty person_id");
    const auto label = lowercase(fields[1]);
    if (label == "client") {
      row.label = Label::kClient;
    } else if (label == "impostor") {
      row.label = Label::kImpostor;
    } else {
      fail_at(line_no, 2, "unknown label '" + fields[1] + "'");
    }
    for (std::size_t c = 2; c < fields.size(); ++c) {
      const auto& text = fields[c];
      double value = 0.0;
      const auto* first = text.data();
      const auto* last = text.data() + text.size();
      if (!text.empty() && *first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, last, value);
      if (text.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value)) {
        fail_at(line_no, c + 1, "not a number: '" + text + "'");
      }
      if (!normalize && !(value >= 0.0 && value <= 1.0)) {
        fail_at(line_no, c + 1, "score " + text + " is outside [0, 1]");
      }
      row.scores.push_back(value);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("CSV input has a header but no records");

  if (normalize) {
    for (std::size_t m = 0; m < modalities; ++m) {
      std::vector<double> column;
      column.reserve(rows.size());
      for (const auto& r : rows) column.push_back(r.scores[m]);
      const auto scaled = normalize_minmax(column);
      for (std::size_t k = 0; k < rows.size(); ++k) rows[k].scores[m] = scaled[k];
    }
  }

  std::vector<ScoreRecord> clients;
  std::vector<ScoreRecord> impostors;
  for (auto& r : rows) {
    auto& target = r.label == Label::kClient ? clients : impostors;
    target.push_back({std::move(r.person_id), r.label, ScoreVector(std::move(r.scores))});
  }
  return LabeledScoreSet(std::move(clients), std::move(impostors));
}

LabeledScoreSet load_csv(const std::filesystem::path& path, bool normalize) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return read_csv(in, normalize);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_csv(const LabeledScoreSet& set, std::ostream& out) {
  out << "person_id,label";
  for (std::size_t m = 0; m < set.modality_count(); ++m) out << ",m" << (m + 1);
  out << '\n';
  for (const auto* records : {&set.clients(), &set.impostors()}) {
    for (const auto& r : *records) {
      out << r.person_id << ',' << to_string(r.label);
      for (double s : r.scores.values()) out << ',' << shortest(s);
      out << '\n';
    }
  }
}

void write_csv(const LabeledScoreSet& set, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_csv(set, out);
}

}  // namespace choquet
