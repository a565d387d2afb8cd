// Umbrella header for the lawclust library: clustering sets of functional
// data by their generating probability law.
#pragma once

#include "lawclust/bounds.hpp"
#include "lawclust/dendrogram.hpp"
#include "lawclust/directions.hpp"
#include "lawclust/distance.hpp"
#include "lawclust/errors.hpp"
#include "lawclust/io.hpp"
#include "lawclust/parallel.hpp"
#include "lawclust/projection.hpp"
#include "lawclust/rng.hpp"
#include "lawclust/simulate.hpp"
#include "lawclust/types.hpp"

namespace lawclust {
inline constexpr const char* kVersion = "0.1.0";
}
