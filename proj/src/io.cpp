#include "tbec/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "tbec/analytics.hpp"

namespace tbec {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

char delimiter(TableFormat f) { return f == TableFormat::Tsv ? '\t' : ','; }

double parse_double(std::string_view s, const std::filesystem::path& path) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw IoError("malformed number '" + std::string(s) + "' in " + path.string());
  return v;
}

}  // namespace

void write_table(const std::filesystem::path& path, const Table& table, TableFormat format,
                 const Metadata& metadata) {
  const char d = delimiter(format);
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "# ";
    for (std::size_t c = 0; c < table.columns.size(); ++c)
      out << (c ? std::string(1, d) : "") << table.columns[c];
    out << '\n';
    for (const auto& row : table.rows) {
      if (row.size() != table.columns.size())
        throw IoError("row width does not match header in " + path.string());
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out << d;
        out << format_double(row[c]);
      }
      out << '\n';
    }
    if (!out) throw IoError("write failed for " + path.string());
  }
  std::ofstream meta(path.string() + ".meta", std::ios::binary);
  if (!meta) throw IoError("cannot open " + path.string() + ".meta for writing");
  meta << "format = " << (format == TableFormat::Tsv ? "tsv" : "csv") << '\n';
  meta << "rows = " << table.rows.size() << '\n';
  meta << "columns = " << table.columns.size() << '\n';
  meta << "code_version = " << kCodeVersion << '\n';
  for (const auto& [k, v] : metadata) meta << k << " = " << v << '\n';
  if (!meta) throw IoError("write failed for " + path.string() + ".meta");
}

Table read_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
    throw IoError("missing header line in " + path.string());
  const char d = line.find('\t') != std::string::npos ? '\t' : ',';
  Table t;
  {
    std::stringstream hs(line.substr(2));
    std::string col;
    while (std::getline(hs, col, d)) t.columns.push_back(col);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    for (;;) {
      const std::size_t end = line.find(d, start);
      row.push_back(parse_double(std::string_view(line).substr(start, end - start), path));
      if (end == std::string::npos) break;
      start = end + 1;
    }
    if (row.size() != t.columns.size())
      throw IoError("row width does not match header in " + path.string());
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::map<std::string, std::string> read_metadata(const std::filesystem::path& path) {
  std::ifstream in(path.string() + ".meta");
  if (!in) throw IoError("cannot open " + path.string() + ".meta");
  std::map<std::string, std::string> m;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    m[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return m;
}

Table scalar_table(const ObservableSeries& series, double time_unit) {
  Table t;
  t.columns = {"time", "M", "C", "H", "norm"};
  const bool tangent = series.log_tangent.size() == series.size() && !series.empty();
  if (tangent) {
    t.columns.push_back("log_tangent");
    t.columns.push_back("lambda");
  }
  for (std::size_t r = 0; r < series.size(); ++r) {
    std::vector<double> row{series.times[r] / time_unit, series.dispersion[r],
                            series.fluctuation[r], series.energy[r], series.norm[r]};
    if (tangent) {
      row.push_back(series.log_tangent[r]);
      // lambda is undefined at t = 0; written as 0.
      row.push_back(series.times[r] > 0.0 ? series.log_tangent[r] / series.times[r] : 0.0);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table grid_table(const TimeGrid& grid, const std::string& column_prefix, int first_index) {
  Table t;
  t.columns.push_back("time");
  for (std::size_t c = 0; c < grid.cols; ++c)
    t.columns.push_back(column_prefix + std::to_string(first_index + static_cast<int>(c)));
  for (std::size_t r = 0; r < grid.rows(); ++r) {
    std::vector<double> row{grid.times[r]};
    const auto vals = grid.row(r);
    row.insert(row.end(), vals.begin(), vals.end());
    t.rows.push_back(std::move(row));
  }
  return t;
}

namespace {

// Grids without the uniform-time requirement of carpet_grid.
Table rows_table(const ObservableSeries& series, const std::vector<std::vector<double>>& rows,
                 const std::string& prefix, double time_unit) {
  Table t;
  t.columns.push_back("time");
  for (int c = 0; c < series.L; ++c) t.columns.push_back(prefix + std::to_string(c - series.L / 2));
  for (std::size_t r = 0; r < series.size(); ++r) {
    if (static_cast<int>(rows[r].size()) != series.L) throw IoError("series record lacks column data");
    std::vector<double> row{series.times[r] / time_unit};
    row.insert(row.end(), rows[r].begin(), rows[r].end());
    t.rows.push_back(std::move(row));
  }
  return t;
}

bool has_rows(const ObservableSeries& s, const std::vector<std::vector<double>>& rows) {
  return !s.empty() && static_cast<int>(rows.front().size()) == s.L;
}

}  // namespace

Table population_table(const ObservableSeries& series, double time_unit) {
  return rows_table(series, series.populations, "l=", time_unit);
}

Table spectrum_table(const ObservableSeries& series, double time_unit) {
  return rows_table(series, series.spectra, "k=", time_unit);
}

ExportedFiles export_series(const ObservableSeries& series, TableFormat format,
                            const std::filesystem::path& dir, const std::string& stem,
                            const Metadata& metadata, double time_unit,
                            const std::string& unit_name) {
  if (series.empty()) throw IoError("cannot export an empty series");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
  const std::string ext = format == TableFormat::Tsv ? ".tsv" : ".csv";
  Metadata meta = metadata;
  meta.emplace_back("time_unit", unit_name);
  meta.emplace_back("time_unit_value", format_double(time_unit));
  meta.emplace_back("samples", std::to_string(series.size()));
  meta.emplace_back("t_first", format_double(series.times.front() / time_unit));
  meta.emplace_back("t_last", format_double(series.times.back() / time_unit));
  ExportedFiles out;
  auto emit = [&](const std::string& name, const Table& table, const std::string& layout) {
    auto m = meta;
    m.emplace_back("layout", layout);
    const auto path = dir / (stem + "_" + name + ext);
    write_table(path, table, format, m);
    out.files.push_back(path);
  };
  emit("scalars", scalar_table(series, time_unit), "time, M, C, H, norm[, log_tangent, lambda]");
  if (has_rows(series, series.populations))
    emit("populations", population_table(series, time_unit),
         "time, then P_l for l = -L/2 .. L/2-1");
  if (has_rows(series, series.spectra))
    emit("spectra", spectrum_table(series, time_unit),
         "time, then |b_k|^2 for k = -L/2 .. L/2-1 (ascending quasimomentum)");
  return out;
}

}  // namespace tbec
