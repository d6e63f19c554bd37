#pragma once

// Umbrella header for the bubble-cluster laboratory.

#include "bubbles/analyze.hpp"
#include "bubbles/constraint.hpp"
#include "bubbles/core.hpp"
#include "bubbles/density.hpp"
#include "bubbles/evolve.hpp"
#include "bubbles/mesh.hpp"
#include "bubbles/scenario.hpp"
#include "bubbles/shapes.hpp"
