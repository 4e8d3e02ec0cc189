// otto.hpp
// Umbrella header for the collective three-level engine toolkit.

#pragma once

#include "otto/error.hpp"
#include "otto/qutrit.hpp"
#include "otto/thermal.hpp"
#include "otto/engine.hpp"
#include "otto/collective.hpp"
#include "otto/sweep_table.hpp"
#include "otto/analysis.hpp"
#include "otto/config.hpp"
#include "otto/experiments.hpp"
