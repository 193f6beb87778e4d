#pragma once

// Umbrella header for the Harrod growth-model toolkit.

#include "harrod/calibration.hpp"
#include "harrod/continuous.hpp"
#include "harrod/csv.hpp"
#include "harrod/discrete.hpp"
#include "harrod/domain.hpp"
#include "harrod/extensions.hpp"
#include "harrod/format.hpp"
#include "harrod/numerics.hpp"
#include "harrod/run.hpp"
#include "harrod/scenario.hpp"
#include "harrod/svg.hpp"
