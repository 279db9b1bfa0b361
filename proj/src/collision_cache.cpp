#include "kinhydro/collision_cache.hpp"

#include <sstream>

#include "kinhydro/binary_io.hpp"

namespace kinhydro {

std::string collision_cache_header(int dim, int max_degree, ModelKind kind, const CollisionQuadrature& q)
{
  std::ostringstream h;
  h << "kinhydro-collision-cache version=" << kCacheFormatVersion << " d=" << dim << " K=" << max_degree
    << " model=" << to_string(kind) << " center=" << q.center_nodes << " radial=" << q.radial_nodes
    << " omega=" << q.relative_degree << " sigma=" << q.scattering_degree;
  return h.str();
}

std::filesystem::path collision_cache_path(const std::filesystem::path& dir, int dim, int max_degree)
{
  std::ostringstream name;
  name << "collision_hard-sphere_d" << dim << "_K" << max_degree << ".bin";
  return dir / name.str();
}

void write_collision_cache(const std::filesystem::path& path, const RawCollisionTensors& raw)
{
  std::vector<double> payload;
  payload.reserve(raw.gamma.size() + raw.nu.size());
  payload.insert(payload.end(), raw.gamma.begin(), raw.gamma.end());
  payload.insert(payload.end(), raw.nu.begin(), raw.nu.end());
  write_blob(path, collision_cache_header(raw.dim, raw.max_degree, ModelKind::HardSphere, raw.quadrature), payload);
}

std::string to_string(CacheStatus status)
{
  switch (status) {
    case CacheStatus::Hit:
      return "hit";
    case CacheStatus::Missing:
      return "missing";
    case CacheStatus::KeyMismatch:
      return "key-mismatch";
    case CacheStatus::Corrupted:
      return "corrupted";
  }
  return "unknown";
}

CacheRead read_collision_cache(const std::filesystem::path& path, int dim, int max_degree,
                               const CollisionQuadrature& quadrature)
{
  CacheRead out;
  const long n = basis_size(dim, max_degree);
  BinaryBlob blob;
  switch (read_blob(path, blob, n * n * n + n * n)) {
    case BlobStatus::Missing:
      out.status = CacheStatus::Missing;
      return out;
    case BlobStatus::Truncated:
    case BlobStatus::ChecksumMismatch:
      out.status = blob.header == collision_cache_header(dim, max_degree, ModelKind::HardSphere, quadrature)
                       ? CacheStatus::Corrupted
                       : CacheStatus::KeyMismatch;
      return out;
    case BlobStatus::Ok:
      break;
  }
  if (blob.header != collision_cache_header(dim, max_degree, ModelKind::HardSphere, quadrature)) {
    out.status = CacheStatus::KeyMismatch;
    return out;
  }
  auto& t = out.tensors;
  t.dim = dim;
  t.max_degree = max_degree;
  t.quadrature = quadrature;
  t.gamma.assign(blob.payload.begin(), blob.payload.begin() + n * n * n);
  t.nu.assign(blob.payload.begin() + n * n * n, blob.payload.end());
  out.status = CacheStatus::Hit;
  return out;
}

CachedAssembly load_or_assemble(const VelocityBasis& basis, const std::filesystem::path& cache_dir)
{
  CachedAssembly out;
  const auto q = CollisionQuadrature::exact_for(basis.max_degree());
  out.path = collision_cache_path(cache_dir, basis.dim(), basis.max_degree());
  auto read = read_collision_cache(out.path, basis.dim(), basis.max_degree(), q);
  out.status = read.status;
  if (read.status == CacheStatus::Hit) {
    out.tensors = std::move(read.tensors);
    return out;
  }
  out.tensors = assemble_hard_sphere_tensors(basis, q);
  write_collision_cache(out.path, out.tensors);
  return out;
}

}  // namespace kinhydro
