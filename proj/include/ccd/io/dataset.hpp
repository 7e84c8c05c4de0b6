#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ccd/io/config.hpp"
#include "ccd/sweep.hpp"

namespace ccd::io {

// Header metadata plus a table. Metadata keeps insertion order.
struct Dataset {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<Axis> axes;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void set(const std::string& key, const std::string& value);
  // Empty string when absent.
  std::string get(std::string_view key) const;
};

inline constexpr std::string_view kToolName = "ccdsim";
inline constexpr std::string_view kToolVersion = "0.1.0";

// SHA-1 of "blob <size>\0<text>", hex, as git computes object ids.
std::string git_blob_hash(std::string_view text);

// Tool, version, command, the full config and its hash. A timestamp is added
// only when given (non-empty), so equal inputs give equal bytes.
Dataset make_dataset(std::string_view command, const RunConfig& cfg, const std::string& timestamp = {});

// Grid cells as rows (x, y, value), x outermost.
void add_grid(Dataset& ds, const Axis& x, const Axis& y, const Eigen::MatrixXd& values,
              const std::string& value_name);

std::string emit_csv(const Dataset& ds);
std::string emit_json(const Dataset& ds);
std::string emit_dataset(const Dataset& ds, Format format);

// Inverse of emit_csv for the metadata, columns and rows; axes are not kept.
Dataset parse_csv(std::string_view text);

// Writes through a temporary file in the same directory and renames it into
// place. Throws IoError with the path.
void write_file_atomic(const std::string& path, std::string_view bytes);

std::string read_file(const std::string& path);

}  // namespace ccd::io
