#pragma once

#include "scalelaw/collection.hpp"
#include "scalelaw/curve_data.hpp"
#include "scalelaw/errors.hpp"
#include "scalelaw/fitting.hpp"
#include "scalelaw/metamodel.hpp"
#include "scalelaw/metrics.hpp"
#include "scalelaw/predictors.hpp"
#include "scalelaw/rng.hpp"
#include "scalelaw/synth.hpp"
#include "scalelaw/uncertainty.hpp"
