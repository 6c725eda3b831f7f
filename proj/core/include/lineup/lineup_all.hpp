#pragma once

#include "lineup/binsweep.hpp"
#include "lineup/dataset.hpp"
#include "lineup/error.hpp"
#include "lineup/export.hpp"
#include "lineup/inference.hpp"
#include "lineup/lineup.hpp"
#include "lineup/metrics.hpp"
#include "lineup/nullgen.hpp"
#include "lineup/quantile.hpp"
#include "lineup/random.hpp"
#include "lineup/render.hpp"
