#pragma once

#include "gds/core.hpp"
#include "gds/errors.hpp"
#include "gds/io.hpp"
#include "gds/lip_families.hpp"
#include "gds/obs_diam.hpp"
#include "gds/scalar_stats.hpp"
#include "gds/set_distances.hpp"
#include "gds/staircase.hpp"
#include "gds/transforms.hpp"
