#ifndef LUTT_LUTT_HPP
#define LUTT_LUTT_HPP

#include "boson_algebra.hpp"
#include "errors.hpp"
#include "finite_volume.hpp"
#include "grid.hpp"
#include "infinite_volume.hpp"
#include "model.hpp"
#include "numerics.hpp"
#include "oracles.hpp"
#include "parallel.hpp"

#endif
