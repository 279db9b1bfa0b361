#pragma once

#include <filesystem>
#include <string>

#include "kinhydro/collision_models.hpp"

namespace kinhydro {

inline constexpr int kCacheFormatVersion = 1;

/// Header line: format version, d, K, model kind and quadrature orders.
std::string collision_cache_header(int dim, int max_degree, ModelKind kind, const CollisionQuadrature& q);

/// Default file name inside a cache directory.
std::filesystem::path collision_cache_path(const std::filesystem::path& dir, int dim, int max_degree);

/// Gamma (N^3) followed by nu (N^2).
void write_collision_cache(const std::filesystem::path& path, const RawCollisionTensors& raw);

enum class CacheStatus
{
  Hit,
  Missing,
  KeyMismatch,
  Corrupted
};

std::string to_string(CacheStatus status);

struct CacheRead
{
  CacheStatus status = CacheStatus::Missing;
  RawCollisionTensors tensors;
};

CacheRead read_collision_cache(const std::filesystem::path& path, int dim, int max_degree,
                               const CollisionQuadrature& quadrature);

/// Loads hard-sphere tensors from the cache, assembling and rewriting the file on any miss.
struct CachedAssembly
{
  RawCollisionTensors tensors;
  CacheStatus status = CacheStatus::Missing;
  std::filesystem::path path;
};

CachedAssembly load_or_assemble(const VelocityBasis& basis, const std::filesystem::path& cache_dir);

}  // namespace kinhydro
