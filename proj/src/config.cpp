#include "kinhydro/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "kinhydro/errors.hpp"

namespace kinhydro {

namespace {

std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value)
{
  try {
    std::size_t pos = 0;
    const double x = std::stod(value, &pos);
    if (trim(value.substr(pos)).empty())
      return x;
  } catch (const std::exception&) {
  }
  throw ValidationError("invalid number for " + key + ": '" + value + "'");
}

int to_int(const std::string& key, const std::string& value)
{
  const double x = to_double(key, value);
  if (x != static_cast<double>(static_cast<long>(x)))
    throw ValidationError("integer expected for " + key + ": '" + value + "'");
  return static_cast<int>(x);
}

std::vector<double> to_list(const std::string& key, const std::string& value)
{
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(to_double(key, trim(item)));
  if (out.empty())
    throw ValidationError("empty list for " + key);
  return out;
}

void check_key(const std::string& key)
{
  const auto& keys = config_keys();
  if (std::find(keys.begin(), keys.end(), key) != keys.end())
    return;
  std::string msg = "unknown config key '" + key + "'; valid keys:";
  for (const auto& k : keys)
    msg += " " + k;
  throw ValidationError(msg);
}

}  // namespace

std::string format_double(double x)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::uint64_t fnv1a(const std::string& text)
{
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

const std::vector<std::string>& config_keys()
{
  static const std::vector<std::string> keys{"amplitude", "box-length", "cache-dir", "d",    "dt",
                                             "eps",       "grid",       "K",         "k",    "ell",
                                             "model",     "output-dir", "rate",      "seed", "T"};
  return keys;
}

std::string RunConfig::canonical() const
{
  std::ostringstream out;
  std::string eps_list;
  for (std::size_t i = 0; i < eps.size(); ++i)
    eps_list += (i ? "," : "") + format_double(eps[i]);
  out << "K = " << max_degree << "\n"
      << "T = " << format_double(T) << "\n"
      << "amplitude = " << format_double(amplitude) << "\n"
      << "box-length = " << format_double(box_length) << "\n"
      << "d = " << dim << "\n"
      << "dt = " << format_double(dt) << "\n"
      << "ell = " << format_double(ell) << "\n"
      << "eps = " << eps_list << "\n"
      << "grid = " << grid << "\n"
      << "k = " << format_double(k) << "\n"
      << "model = " << to_string(model) << "\n"
      << "rate = " << format_double(relaxation_rate) << "\n"
      << "seed = " << seed << "\n";
  return out.str();
}

std::string RunConfig::fingerprint() const
{
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical())));
  return buf;
}

std::map<std::string, std::string> parse_key_values(const std::string& text)
{
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    check_key(key);
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

RunConfig make_config(const std::map<std::string, std::string>& values)
{
  RunConfig c;
  for (const auto& [key, value] : values) {
    check_key(key);
    if (key == "d")
      c.dim = to_int(key, value);
    else if (key == "K")
      c.max_degree = to_int(key, value);
    else if (key == "grid")
      c.grid = to_int(key, value);
    else if (key == "box-length")
      c.box_length = to_double(key, value);
    else if (key == "eps")
      c.eps = to_list(key, value);
    else if (key == "dt")
      c.dt = to_double(key, value);
    else if (key == "T")
      c.T = to_double(key, value);
    else if (key == "ell")
      c.ell = to_double(key, value);
    else if (key == "k")
      c.k = to_double(key, value);
    else if (key == "model")
      c.model = parse_model_kind(value);
    else if (key == "rate")
      c.relaxation_rate = to_double(key, value);
    else if (key == "amplitude")
      c.amplitude = to_double(key, value);
    else if (key == "seed") {
      const int s = to_int(key, value);
      if (s < 0)
        throw ValidationError("seed must be non-negative");
      c.seed = static_cast<unsigned>(s);
    } else if (key == "output-dir")
      c.output_dir = value;
    else if (key == "cache-dir")
      c.cache_dir = value;
  }
  validate(c);
  return c;
}

void validate(const RunConfig& c)
{
  if (c.dim != 2 && c.dim != 3)
    throw ValidationError("d must be 2 or 3");
  if (c.max_degree < 2)
    throw ValidationError("K >= 2 required");
  if (c.grid < 4 || (c.grid & (c.grid - 1)) != 0)
    throw ValidationError("grid must be a power of two >= 4");
  if (!(c.box_length > 0.0))
    throw ValidationError("box-length > 0 required");
  for (double e : c.eps)
    if (!(e > 0.0))
      throw ValidationError("eps values must be positive");
  if (!(c.dt > 0.0) || !(c.T > 0.0))
    throw ValidationError("dt > 0 and T > 0 required");
  if (!(c.relaxation_rate > 0.0) || !(c.amplitude > 0.0))
    throw ValidationError("rate > 0 and amplitude > 0 required");
  if (!(c.ell > c.dim / 2.0))
    throw ValidationError("l > d/2 required");
  if (!(c.k > c.dim / 2.0 + 1.0))
    throw ValidationError("k > d/2+1 required");
}

RunConfig parse_config(const std::filesystem::path& path, const std::map<std::string, std::string>& overrides)
{
  std::map<std::string, std::string> values;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in)
      throw ValidationError("cannot read config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    values = parse_key_values(buf.str());
  }
  for (const auto& [key, value] : overrides)
    values[key] = value;
  return make_config(values);
}

}  // namespace kinhydro
