#include "csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace permwalk::cli {

namespace {

[[noreturn]] void fail(const std::string& message)
{
  throw input_error(message);
}

std::string at(const std::string& path, std::size_t line)
{
  return path + ":" + std::to_string(line);
}

/// Split one CSV record on commas, trimming spaces/tabs and a trailing CR.
std::vector<std::string> split_fields(const std::string& line)
{
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    std::string field = comma == std::string::npos ? line.substr(start)
                                                   : line.substr(start, comma - start);
    std::size_t b = field.find_first_not_of(" \t\r");
    std::size_t e = field.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::vector<std::string> read_lines(const std::string& path)
{
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "' for reading");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  if (lines.empty()) fail("'" + path + "' is empty");
  return lines;
}

double parse_double(const std::string& token, const std::string& path, std::size_t line,
                    std::size_t column, const std::string& subject)
{
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    fail(at(path, line) + ": column " + std::to_string(column + 1) + " (subject '" + subject +
         "'): not a number: '" + token + "'");
  if (!std::isfinite(value))
    fail(at(path, line) + ": column " + std::to_string(column + 1) + " (subject '" + subject +
         "'): value must be finite");
  return value;
}

std::unordered_map<std::string, std::uint32_t> subject_index(const DataMatrix& matrix)
{
  std::unordered_map<std::string, std::uint32_t> index;
  for (std::size_t s = 0; s < matrix.n_subjects(); ++s)
    index.emplace(matrix.subject_ids[s], static_cast<std::uint32_t>(s));
  return index;
}

}  // namespace

DataMatrix read_matrix(const std::string& path)
{
  const auto lines = read_lines(path);

  DataMatrix matrix;
  matrix.subject_ids = split_fields(lines[0]);
  const std::size_t n_subjects = matrix.subject_ids.size();
  std::unordered_set<std::string> seen;
  for (std::size_t s = 0; s < n_subjects; ++s) {
    const auto& id = matrix.subject_ids[s];
    if (id.empty())
      fail(at(path, 1) + ": column " + std::to_string(s + 1) + ": empty subject id");
    if (!seen.insert(id).second)
      fail(at(path, 1) + ": column " + std::to_string(s + 1) + ": duplicate subject id '" + id +
           "'");
  }
  if (lines.size() < 2) fail("'" + path + "' has a header but no data rows");

  matrix.n_vertices = lines.size() - 1;
  matrix.values.reserve(matrix.n_vertices * n_subjects);
  for (std::size_t row = 1; row < lines.size(); ++row) {
    const auto fields = split_fields(lines[row]);
    if (fields.size() != n_subjects)
      fail(at(path, row + 1) + ": expected " + std::to_string(n_subjects) + " columns, got " +
           std::to_string(fields.size()));
    for (std::size_t s = 0; s < n_subjects; ++s)
      matrix.values.push_back(
          parse_double(fields[s], path, row + 1, s, matrix.subject_ids[s]));
  }
  return matrix;
}

void write_matrix(const std::string& path, const DataMatrix& matrix)
{
  std::ofstream out(path);
  if (!out) fail("cannot open '" + path + "' for writing");
  for (std::size_t s = 0; s < matrix.n_subjects(); ++s) {
    if (s) out << ',';
    out << matrix.subject_ids[s];
  }
  out << '\n';
  for (std::size_t v = 0; v < matrix.n_vertices; ++v) {
    for (std::size_t s = 0; s < matrix.n_subjects(); ++s) {
      if (s) out << ',';
      out << format_double(matrix.values[v * matrix.n_subjects() + s]);
    }
    out << '\n';
  }
  if (!out) fail("failed writing '" + path + "'");
}

std::vector<std::uint8_t> read_group_labels(const std::string& path, const DataMatrix& matrix)
{
  const auto lines = read_lines(path);
  const auto index = subject_index(matrix);

  constexpr std::uint8_t kUnlabeled = 0xff;
  std::vector<std::uint8_t> labels(matrix.n_subjects(), kUnlabeled);
  for (std::size_t row = 0; row < lines.size(); ++row) {
    if (lines[row].find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_fields(lines[row]);
    if (fields.size() != 2)
      fail(at(path, row + 1) + ": expected two columns (subject,group), got " +
           std::to_string(fields.size()));
    const auto it = index.find(fields[0]);
    if (it == index.end())
      fail(at(path, row + 1) + ": subject '" + fields[0] + "' is not a matrix column");
    if (labels[it->second] != kUnlabeled)
      fail(at(path, row + 1) + ": subject '" + fields[0] + "' labeled twice");
    if (fields[1] == "x")
      labels[it->second] = 0;
    else if (fields[1] == "y")
      labels[it->second] = 1;
    else
      fail(at(path, row + 1) + ": group must be 'x' or 'y', got '" + fields[1] + "'");
  }

  std::size_t m = 0, n = 0;
  for (std::size_t s = 0; s < labels.size(); ++s) {
    if (labels[s] == kUnlabeled)
      fail("'" + path + "': subject '" + matrix.subject_ids[s] + "' is unlabeled");
    (labels[s] == 0 ? m : n)++;
  }
  if (m < 2 || n < 2)
    fail("'" + path + "': each group needs at least two subjects (got x=" + std::to_string(m) +
         ", y=" + std::to_string(n) + ")");
  return labels;
}

PairIndices read_pair_labels(const std::string& path, const DataMatrix& matrix)
{
  const auto lines = read_lines(path);
  const auto index = subject_index(matrix);

  PairIndices pairs;
  std::unordered_set<std::uint32_t> used;
  for (std::size_t row = 0; row < lines.size(); ++row) {
    if (lines[row].find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_fields(lines[row]);
    if (fields.size() != 2)
      fail(at(path, row + 1) + ": expected two columns (idA,idB), got " +
           std::to_string(fields.size()));
    std::uint32_t ab[2];
    for (int k = 0; k < 2; ++k) {
      const auto it = index.find(fields[k]);
      if (it == index.end())
        fail(at(path, row + 1) + ": subject '" + fields[k] + "' is not a matrix column");
      if (!used.insert(it->second).second)
        fail(at(path, row + 1) + ": subject '" + fields[k] + "' appears in more than one pair");
      ab[k] = it->second;
    }
    pairs.a.push_back(ab[0]);
    pairs.b.push_back(ab[1]);
  }
  if (pairs.a.size() < 2) fail("'" + path + "': need at least two twin pairs");
  return pairs;
}

std::string format_double(double value)
{
  if (std::isnan(value)) return "nan";
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  (void)ec;
  return std::string(buffer, ptr);
}

}  // namespace permwalk::cli
