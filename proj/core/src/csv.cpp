#include "fsgm/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "fsgm/error.hpp"

namespace fsgm {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) return std::nullopt;
  double value = 0.0;
  const char* first = t.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
  return value;
}

bool cell_matches(const std::string& cell, const std::string& expected) {
  const auto a = parse_number(cell);
  const auto b = parse_number(expected);
  if (a && b) return *a == *b;
  return trim(cell) == trim(expected);
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

void CsvSchema::check() const {
  if (features.empty()) throw Error("csv schema: no feature columns");
  if (label.empty()) throw Error("csv schema: no label column");
  if (group.empty()) throw Error("csv schema: no group column");
  std::set<std::string> seen;
  for (const auto& name : features) {
    if (!seen.insert(name).second) {
      throw Error("csv schema: column '" + name + "' listed twice");
    }
  }
  if (seen.count(label) || seen.count(group) || label == group) {
    throw Error("csv schema: feature, label and group columns must be disjoint");
  }
  if (cell_matches(label_positive, label_negative)) {
    throw Error("csv schema: label values must differ");
  }
  if (cell_matches(group_one, group_zero)) {
    throw Error("csv schema: group values must differ");
  }
}

std::vector<std::string> split_csv_record(const std::string& line,
                                          char delimiter) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delimiter) {
      out.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  out.push_back(std::move(field));
  return out;
}

Dataset read_csv(std::istream& in, const CsvSchema& schema) {
  schema.check();
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> names;

  auto next_record = [&](std::vector<std::string>& fields) {
    while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      fields = split_csv_record(line, schema.delimiter);
      return true;
    }
    return false;
  };

  std::vector<std::string> fields;
  bool pending = false;
  if (schema.header) {
    if (!next_record(fields)) return Dataset(schema.features.size(), {});
    for (auto& f : fields) names.push_back(trim(f));
  } else {
    pending = next_record(fields);
    if (!pending) return Dataset(schema.features.size(), {});
    for (std::size_t i = 0; i < fields.size(); ++i) {
      names.push_back("col" + std::to_string(i + 1));
    }
  }

  auto column = [&](const std::string& name) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return i;
    }
    throw Error("csv: missing column '" + name + "'");
  };
  std::vector<std::size_t> feature_cols;
  for (const auto& f : schema.features) feature_cols.push_back(column(f));
  const std::size_t label_col = column(schema.label);
  const std::size_t group_col = column(schema.group);

  std::vector<Sample> rows;
  std::vector<std::string> problems;
  auto reject = [&](const std::string& why) {
    if (problems.size() < 10) {
      problems.push_back("line " + std::to_string(line_no) + ": " + why);
    } else if (problems.size() == 10) {
      problems.push_back("...");
    }
  };

  while (pending || next_record(fields)) {
    pending = false;
    if (fields.size() != names.size()) {
      reject("expected " + std::to_string(names.size()) + " fields, found " +
             std::to_string(fields.size()));
      continue;
    }
    Sample s;
    s.x.reserve(feature_cols.size());
    bool ok = true;
    for (std::size_t k = 0; k < feature_cols.size(); ++k) {
      const auto v = parse_number(fields[feature_cols[k]]);
      if (!v || !std::isfinite(*v)) {
        reject("non-numeric feature '" + schema.features[k] + "' = \"" +
               fields[feature_cols[k]] + "\"");
        ok = false;
        break;
      }
      s.x.push_back(*v);
    }
    if (!ok) continue;
    const std::string& y = fields[label_col];
    if (cell_matches(y, schema.label_positive)) {
      s.y = 1;
    } else if (cell_matches(y, schema.label_negative)) {
      s.y = 0;
    } else {
      reject("unknown label value \"" + y + "\"");
      continue;
    }
    const std::string& z = fields[group_col];
    if (cell_matches(z, schema.group_one)) {
      s.z = 1;
    } else if (cell_matches(z, schema.group_zero)) {
      s.z = 0;
    } else {
      reject("unknown group value \"" + z + "\"");
      continue;
    }
    rows.push_back(std::move(s));
  }
  if (!problems.empty()) {
    std::ostringstream msg;
    msg << "csv: rejected rows:";
    for (const auto& p : problems) msg << "\n  " << p;
    throw Error(msg.str());
  }
  return Dataset(schema.features.size(), std::move(rows));
}

Dataset load_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  try {
    return read_csv(in, schema);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

void write_dataset_csv(std::ostream& out, const Dataset& rows,
                       std::span<const Origin> origins) {
  if (origins.size() != rows.size()) {
    throw Error("write_dataset_csv: origins do not match rows");
  }
  for (std::size_t j = 0; j < rows.dim(); ++j) out << 'x' << j + 1 << ',';
  out << "y,z,origin\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (double v : rows[i].x) out << format_double(v) << ',';
    out << rows[i].y << ',' << rows[i].z << ',' << to_string(origins[i])
        << '\n';
  }
}

void write_dataset_csv(const std::string& path, const Dataset& rows,
                       std::span<const Origin> origins) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_dataset_csv(out, rows, origins);
  if (!out) throw Error("failed writing '" + path + "'");
}

CsvSchema dump_schema(std::size_t dim) {
  CsvSchema schema;
  for (std::size_t j = 0; j < dim; ++j) {
    schema.features.push_back("x" + std::to_string(j + 1));
  }
  schema.label = "y";
  schema.group = "z";
  return schema;
}

}  // namespace fsgm
