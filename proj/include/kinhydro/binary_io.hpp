#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace kinhydro {

/**
 * Binary container shared by the collision cache and the snapshot files:
 * one ASCII header line terminated by '\n', the payload as little-endian
 * IEEE-754 doubles, then one trailing double equal to the sum of the payload.
 */
struct BinaryBlob
{
  std::string header;
  std::vector<double> payload;
};

void write_blob(const std::filesystem::path& path, const std::string& header, std::span<const double> payload);

enum class BlobStatus
{
  Ok,
  Missing,
  Truncated,
  ChecksumMismatch
};

/// Reads a blob; `expected_count` < 0 accepts any payload length.
BlobStatus read_blob(const std::filesystem::path& path, BinaryBlob& out, long expected_count = -1);

/// Checksum used by the container: plain left-to-right sum.
double blob_checksum(std::span<const double> payload);

}  // namespace kinhydro
