#pragma once

#include "valign/world.hpp"

namespace valign {

/// Execution policy for the data-parallel kernels. `serial` is the reference
/// implementation; `parallel` uses OpenMP and must produce identical output.
enum class Exec { serial, parallel };

/// Enumerates every maximal bounded path of the world: a path is maximal when
/// it has exactly `horizon` transitions or ends in a state without outgoing
/// transitions. Paths start at each initial state and are returned in
/// lexicographic order of their transition sequences (initial states sorted,
/// branches explored in canonical transition order).
///
/// Throws NoPaths when no initial state has an outgoing transition.
PathSet enumerate_paths(const World& world, int horizon, Exec exec = Exec::parallel);

} // namespace valign
