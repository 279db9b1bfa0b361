#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "kinhydro/binary_io.hpp"
#include "kinhydro/collision_cache.hpp"
#include "support.hpp"

using namespace kinhydro;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name)
{
  const fs::path dir = fs::temp_directory_path() / ("kinhydro_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b)
{
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

void flip_byte(const fs::path& path, std::streamoff offset_from_end)
{
  std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
  f.seekg(-offset_from_end, std::ios::end);
  char c = 0;
  f.read(&c, 1);
  c = static_cast<char>(c ^ 0x5a);
  f.seekp(-offset_from_end, std::ios::end);
  f.write(&c, 1);
}

}  // namespace

TEST(BinaryBlob, RoundTripAndStatuses)
{
  const fs::path dir = scratch_dir("blob");
  const std::vector<double> payload{1.0, -2.5, 3.25e-300, 0.1};
  write_blob(dir / "a.bin", "header line", payload);
  BinaryBlob blob;
  ASSERT_EQ(read_blob(dir / "a.bin", blob, 4), BlobStatus::Ok);
  EXPECT_EQ(blob.header, "header line");
  EXPECT_TRUE(bit_equal(blob.payload, payload));
  EXPECT_EQ(read_blob(dir / "missing.bin", blob), BlobStatus::Missing);
  EXPECT_EQ(read_blob(dir / "a.bin", blob, 5), BlobStatus::Truncated);
  fs::resize_file(dir / "a.bin", fs::file_size(dir / "a.bin") - 3);
  EXPECT_EQ(read_blob(dir / "a.bin", blob), BlobStatus::Truncated);
  write_blob(dir / "b.bin", "h", payload);
  flip_byte(dir / "b.bin", 12);
  EXPECT_EQ(read_blob(dir / "b.bin", blob), BlobStatus::ChecksumMismatch);
  fs::remove_all(dir);
}

TEST(CollisionCache, RoundTripIsBitExact)
{
  const fs::path dir = scratch_dir("cache");
  auto basis = build_basis(2, 4);
  const RawCollisionTensors raw = assemble_hard_sphere_tensors(*basis, CollisionQuadrature::exact_for(4));
  const fs::path path = collision_cache_path(dir, 2, 4);
  write_collision_cache(path, raw);
  const CacheRead back = read_collision_cache(path, 2, 4, raw.quadrature);
  ASSERT_EQ(back.status, CacheStatus::Hit);
  EXPECT_TRUE(bit_equal(back.tensors.gamma, raw.gamma));
  EXPECT_TRUE(bit_equal(back.tensors.nu, raw.nu));
  fs::remove_all(dir);
}

TEST(CollisionCache, KeyMismatchAndCorruptionForceReassembly)
{
  const fs::path dir = scratch_dir("cache_key");
  auto basis = build_basis(2, 4);
  const CachedAssembly first = load_or_assemble(*basis, dir);
  EXPECT_EQ(first.status, CacheStatus::Missing);
  EXPECT_TRUE(fs::exists(first.path));
  const CachedAssembly second = load_or_assemble(*basis, dir);
  EXPECT_EQ(second.status, CacheStatus::Hit);
  EXPECT_TRUE(bit_equal(first.tensors.gamma, second.tensors.gamma));

  CollisionQuadrature other = CollisionQuadrature::exact_for(4);
  other.radial_nodes += 1;
  EXPECT_EQ(read_collision_cache(first.path, 2, 4, other).status, CacheStatus::KeyMismatch);

  flip_byte(first.path, 100);
  EXPECT_EQ(read_collision_cache(first.path, 2, 4, CollisionQuadrature::exact_for(4)).status,
            CacheStatus::Corrupted);
  const CachedAssembly third = load_or_assemble(*basis, dir);
  EXPECT_EQ(third.status, CacheStatus::Corrupted);
  EXPECT_TRUE(bit_equal(third.tensors.gamma, first.tensors.gamma));
  EXPECT_EQ(load_or_assemble(*basis, dir).status, CacheStatus::Hit);
  fs::remove_all(dir);
}

TEST(CollisionCache, ModelFromCachedTensorsMatchesDirectAssembly)
{
  auto basis = build_basis(2, 4);
  const RawCollisionTensors raw = assemble_hard_sphere_tensors(*basis, CollisionQuadrature::exact_for(4));
  const CollisionModel a = hard_sphere_from_tensors(basis, raw);
  const CollisionModel b = assemble_hard_sphere(basis);
  EXPECT_EQ((a.L - b.L).cwiseAbs().maxCoeff(), 0.0);
}
