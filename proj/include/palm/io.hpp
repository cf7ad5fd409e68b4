#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "palm/eval.hpp"
#include "palm/geometry.hpp"
#include "palm/synthdata.hpp"

namespace palm {

/// CSV parse failure; `line` is 1-based.
class CsvError : public std::runtime_error {
 public:
  CsvError(size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  size_t line() const { return line_; }

 private:
  size_t line_;
};

/// Reads a points file: header `x,y`, one decimal coordinate pair per row.
std::vector<std::pair<double, double>> read_points_csv(const std::string& path);
std::vector<std::pair<double, double>> parse_points_csv(const std::string& content);

std::string points_to_csv(const Dataset2D& data);
void write_points_csv(const std::string& path, const Dataset2D& data);

struct PartitionMeta {
  int64_t n = 0;
  double total_bits = 0.0;
  int k_max = 0;
  std::string direction = "vertical";
  uint64_t seed = 0;
};

/// A partition file: grid, regions (lattice-unit rects plus density and
/// count), and fit metadata. Coordinates are serialized as integer lattice
/// units plus epsilon, so files round-trip losslessly.
struct PartitionDoc {
  Partition partition;
  DensityVector densities;
  PartitionMeta meta;
};

std::string partition_to_json(const PartitionDoc& doc);
PartitionDoc partition_from_json(const std::string& text);
void write_partition_json(const std::string& path, const PartitionDoc& doc);
PartitionDoc read_partition_json(const std::string& path);

/// Ground-truth files: partition-backed truths serialize as a PartitionDoc
/// with a `truth` block; sine and gaussian truths as analytic descriptors.
std::string truth_to_json(const GroundTruth& truth, uint64_t seed);
GroundTruth truth_from_json(const std::string& text);
void write_truth_json(const std::string& path, const GroundTruth& truth, uint64_t seed);
GroundTruth read_truth_json(const std::string& path);

std::string eval_report_to_json(const EvalReport& report);
void write_eval_report(const std::string& path, const EvalReport& report);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace palm
