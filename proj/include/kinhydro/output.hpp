#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace spdlog {
class logger;
}

namespace kinhydro {

/// One CSV cell: numbers are written with 17 significant digits, strings RFC 4180 quoted when needed.
using CsvCell = std::variant<double, long, std::string>;

/**
 * @brief In-memory CSV table with a header row.
 */
class CsvTable
{
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<CsvCell> row);
  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& header() const { return header_; }
  std::string str() const;
  /// Writes through a temporary file and renames it into place.
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<CsvCell>> rows_;
};

/// RFC 4180 field quoting.
std::string csv_escape(const std::string& field);

/// "<experiment>_<d>_<K>_<grid>.csv"
std::string experiment_filename(const std::string& experiment, int dim, int max_degree, int grid,
                                const std::string& extension = ".csv");

/// Pretty-printed JSON, written atomically.
void write_json(const std::filesystem::path& path, const nlohmann::json& value);

/// Plain-text run log in `dir`/run.log, also echoed to stderr.
std::shared_ptr<spdlog::logger> open_run_log(const std::filesystem::path& dir);

/// Logs the wall-clock duration of a phase when it goes out of scope.
class PhaseTimer
{
 public:
  PhaseTimer(std::shared_ptr<spdlog::logger> log, std::string phase);
  ~PhaseTimer();
  PhaseTimer(const PhaseTimer&) = delete;
  PhaseTimer& operator=(const PhaseTimer&) = delete;
  double seconds() const;

 private:
  std::shared_ptr<spdlog::logger> log_;
  std::string phase_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace kinhydro
