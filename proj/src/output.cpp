#include "kinhydro/output.hpp"

#include <fstream>
#include <sstream>

#include <spdlog/sinks/basic_file_sink.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "kinhydro/config.hpp"
#include "kinhydro/errors.hpp"

namespace kinhydro {

namespace {

void write_atomic(const std::filesystem::path& path, const std::string& text)
{
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw ValidationError("cannot write " + tmp.string());
    out << text;
    if (!out)
      throw ValidationError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<CsvCell> row)
{
  if (row.size() != header_.size())
    throw ValidationError("CSV row has " + std::to_string(row.size()) + " cells, header has " +
                          std::to_string(header_.size()));
  rows_.push_back(std::move(row));
}

std::string csv_escape(const std::string& field)
{
  if (field.find_first_of(",\"\r\n") == std::string::npos)
    return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"')
      out += '"';
    out += c;
  }
  return out + "\"";
}

std::string CsvTable::str() const
{
  std::ostringstream out;
  for (std::size_t i = 0; i < header_.size(); ++i)
    out << (i ? "," : "") << csv_escape(header_[i]);
  out << "\r\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i)
        out << ',';
      if (const auto* d = std::get_if<double>(&row[i]))
        out << format_double(*d);
      else if (const auto* l = std::get_if<long>(&row[i]))
        out << *l;
      else
        out << csv_escape(std::get<std::string>(row[i]));
    }
    out << "\r\n";
  }
  return out.str();
}

void CsvTable::write(const std::filesystem::path& path) const { write_atomic(path, str()); }

std::string experiment_filename(const std::string& experiment, int dim, int max_degree, int grid,
                                const std::string& extension)
{
  return experiment + "_" + std::to_string(dim) + "_" + std::to_string(max_degree) + "_" + std::to_string(grid) +
         extension;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& value)
{
  write_atomic(path, value.dump(2) + "\n");
}

std::shared_ptr<spdlog::logger> open_run_log(const std::filesystem::path& dir)
{
  std::filesystem::create_directories(dir);
  auto file = std::make_shared<spdlog::sinks::basic_file_sink_mt>((dir / "run.log").string(), false);
  auto err = std::make_shared<spdlog::sinks::stderr_color_sink_mt>();
  auto log = std::make_shared<spdlog::logger>("kinhydro", spdlog::sinks_init_list{file, err});
  log->set_pattern("[%Y-%m-%d %H:%M:%S.%e] [%l] %v");
  log->flush_on(spdlog::level::info);
  return log;
}

PhaseTimer::PhaseTimer(std::shared_ptr<spdlog::logger> log, std::string phase)
    : log_(std::move(log)), phase_(std::move(phase)), start_(std::chrono::steady_clock::now())
{
  if (log_)
    log_->info("phase {} started", phase_);
}

PhaseTimer::~PhaseTimer()
{
  if (log_)
    log_->info("phase {} finished in {:.3f} s", phase_, seconds());
}

double PhaseTimer::seconds() const
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
}

}  // namespace kinhydro
