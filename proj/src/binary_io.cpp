#include "kinhydro/binary_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "kinhydro/errors.hpp"

namespace kinhydro {

namespace {

std::uint64_t swap64(std::uint64_t x)
{
  x = ((x & 0x00000000FFFFFFFFull) << 32) | ((x & 0xFFFFFFFF00000000ull) >> 32);
  x = ((x & 0x0000FFFF0000FFFFull) << 16) | ((x & 0xFFFF0000FFFF0000ull) >> 16);
  x = ((x & 0x00FF00FF00FF00FFull) << 8) | ((x & 0xFF00FF00FF00FF00ull) >> 8);
  return x;
}

void put(std::ostream& os, double v)
{
  auto u = std::bit_cast<std::uint64_t>(v);
  if constexpr (std::endian::native == std::endian::big)
    u = swap64(u);
  char buf[8];
  std::memcpy(buf, &u, 8);
  os.write(buf, 8);
}

bool get(std::istream& is, double& v)
{
  char buf[8];
  if (!is.read(buf, 8))
    return false;
  std::uint64_t u;
  std::memcpy(&u, buf, 8);
  if constexpr (std::endian::native == std::endian::big)
    u = swap64(u);
  v = std::bit_cast<double>(u);
  return true;
}

}  // namespace

double blob_checksum(std::span<const double> payload)
{
  double s = 0.0;
  for (double x : payload)
    s += x;
  return s;
}

void write_blob(const std::filesystem::path& path, const std::string& header, std::span<const double> payload)
{
  if (header.find('\n') != std::string::npos)
    throw ValidationError("blob header must be a single line");
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os)
      throw ValidationError("cannot write " + tmp);
    os << header << '\n';
    for (double x : payload)
      put(os, x);
    put(os, blob_checksum(payload));
    if (!os)
      throw ValidationError("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

BlobStatus read_blob(const std::filesystem::path& path, BinaryBlob& out, long expected_count)
{
  std::ifstream is(path, std::ios::binary);
  if (!is)
    return BlobStatus::Missing;
  if (!std::getline(is, out.header))
    return BlobStatus::Truncated;
  const auto data_start = is.tellg();
  is.seekg(0, std::ios::end);
  const auto bytes = static_cast<long>(is.tellg() - data_start);
  is.seekg(data_start);
  if (bytes < 8 || bytes % 8 != 0)
    return BlobStatus::Truncated;
  const long count = bytes / 8 - 1;
  if (expected_count >= 0 && count != expected_count)
    return BlobStatus::Truncated;
  out.payload.resize(static_cast<std::size_t>(count));
  for (double& x : out.payload)
    if (!get(is, x))
      return BlobStatus::Truncated;
  double stored = 0.0;
  if (!get(is, stored))
    return BlobStatus::Truncated;
  const double actual = blob_checksum(out.payload);
  if (std::bit_cast<std::uint64_t>(stored) != std::bit_cast<std::uint64_t>(actual))
    return BlobStatus::ChecksumMismatch;
  return BlobStatus::Ok;
}

}  // namespace kinhydro
