#pragma once

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "fsgm/augment.hpp"
#include "fsgm/dataset.hpp"

namespace fsgm {

// Column layout of a tabular input file. Label and group cells must equal one
// of the two declared values (numerically, when both sides parse as numbers).
struct CsvSchema {
  std::vector<std::string> features;
  std::string label;
  std::string label_positive = "1";
  std::string label_negative = "0";
  std::string group;
  std::string group_one = "1";
  std::string group_zero = "0";
  // Without a header, columns are addressed as col1, col2, ...
  bool header = true;
  char delimiter = ',';

  void check() const;
};

// Splits one record, honoring double-quoted fields with "" escapes.
std::vector<std::string> split_csv_record(const std::string& line,
                                          char delimiter);

Dataset read_csv(std::istream& in, const CsvSchema& schema);
Dataset load_csv(const std::string& path, const CsvSchema& schema);

// Dump with header x1..xd,y,z,origin. `origins` is parallel to `rows`.
void write_dataset_csv(std::ostream& out, const Dataset& rows,
                       std::span<const Origin> origins);
void write_dataset_csv(const std::string& path, const Dataset& rows,
                       std::span<const Origin> origins);

// Schema that reads back a write_dataset_csv dump of dimension `dim`.
CsvSchema dump_schema(std::size_t dim);

}  // namespace fsgm
