#pragma once

namespace glgeo {

/// Selects between the OpenMP kernels and their serial reference versions.
/// Both paths produce bit-identical results: parallel loops only fill
/// per-item slots and every reduction runs serially in index order.
enum class Execution { serial, parallel };

}  // namespace glgeo
