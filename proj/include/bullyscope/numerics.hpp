#ifndef BULLYSCOPE_NUMERICS_HPP
#define BULLYSCOPE_NUMERICS_HPP

#include "numerics/matrix.hpp"
#include "numerics/rng.hpp"
#include "numerics/sparse.hpp"
#include "numerics/stats.hpp"
#include "numerics/svd.hpp"

#endif  // BULLYSCOPE_NUMERICS_HPP
