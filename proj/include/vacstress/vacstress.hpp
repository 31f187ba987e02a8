#pragma once

// Cylinder kernels and renormalized vacuum stress of a massless scalar field
// on cones, Dowker space, wedges and flat space.

#include "vacstress/errors.hpp"
#include "vacstress/geometry.hpp"
#include "vacstress/jet.hpp"
#include "vacstress/kernels.hpp"
#include "vacstress/modesum.hpp"
#include "vacstress/oracles.hpp"
#include "vacstress/quadrature.hpp"
#include "vacstress/scan.hpp"
#include "vacstress/special.hpp"
#include "vacstress/stress.hpp"

namespace vacstress {

inline constexpr const char* version = "1.0.0";

}  // namespace vacstress
