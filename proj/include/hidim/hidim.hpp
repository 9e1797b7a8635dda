// Umbrella header.
#pragma once

#include "hidim/analytic.hpp"
#include "hidim/classifiers.hpp"
#include "hidim/cli.hpp"
#include "hidim/config.hpp"
#include "hidim/csv.hpp"
#include "hidim/datagen.hpp"
#include "hidim/estimate.hpp"
#include "hidim/paramsets.hpp"
#include "hidim/parallel.hpp"
#include "hidim/rng.hpp"
#include "hidim/svg.hpp"
#include "hidim/sweep.hpp"
