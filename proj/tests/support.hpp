#pragma once

#include <map>
#include <memory>

#include "kinhydro/collision_models.hpp"
#include "kinhydro/velocity_basis.hpp"

namespace kinhydro::testing {

/// Hard-sphere model for (d, K), assembled once per process.
inline const CollisionModel& hard_sphere(int dim, int max_degree)
{
  static std::map<std::pair<int, int>, std::unique_ptr<CollisionModel>> cache;
  auto& slot = cache[{dim, max_degree}];
  if (!slot)
    slot = std::make_unique<CollisionModel>(assemble_hard_sphere(build_basis(dim, max_degree)));
  return *slot;
}

inline const CollisionModel& bgk(int dim, int max_degree)
{
  static std::map<std::pair<int, int>, std::unique_ptr<CollisionModel>> cache;
  auto& slot = cache[{dim, max_degree}];
  if (!slot)
    slot = std::make_unique<CollisionModel>(assemble_bgk(build_basis(dim, max_degree), 1.0));
  return *slot;
}

}  // namespace kinhydro::testing
