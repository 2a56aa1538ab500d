#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "tbec/lattice.hpp"
#include "tbec/observables.hpp"

namespace tbec {

inline constexpr const char* kCodeVersion = "0.1.0";

class IoError : public Error {
 public:
  using Error::Error;
};

enum class TableFormat { Tsv, Csv };

/// Column-major description, row-major storage: one row per time sample (or site).
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Ordered key-value metadata written to the `<file>.meta` sidecar.
using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Shortest round-trip decimal representation.
std::string format_double(double x);

/// Writes `table` to `path` (header line "# col1<d>col2...", then one row per
/// line) and the sidecar `path.meta`. Output is byte-stable for equal inputs.
void write_table(const std::filesystem::path& path, const Table& table, TableFormat format,
                 const Metadata& metadata);
Table read_table(const std::filesystem::path& path);
std::map<std::string, std::string> read_metadata(const std::filesystem::path& path);

/// Scalar diagnostics: time, M, C, H, norm (+ ln|da|, lambda with a tangent).
Table scalar_table(const ObservableSeries& series, double time_unit = 1.0);
/// time + one column per site (l = -L/2 ... L/2-1).
Table population_table(const ObservableSeries& series, double time_unit = 1.0);
/// time + one column per mode in ascending quasimomentum order.
Table spectrum_table(const ObservableSeries& series, double time_unit = 1.0);
Table grid_table(const TimeGrid& grid, const std::string& column_prefix, int first_index);

struct ExportedFiles {
  std::vector<std::filesystem::path> files;
};

/// Writes the scalar table and, when recorded, population and spectrum grids
/// into `dir` as `<stem>_scalars`, `<stem>_populations`, `<stem>_spectra`.
ExportedFiles export_series(const ObservableSeries& series, TableFormat format,
                            const std::filesystem::path& dir, const std::string& stem,
                            const Metadata& metadata, double time_unit = 1.0,
                            const std::string& unit_name = "t");

}  // namespace tbec
