#pragma once

/// @file hflow.hpp
/// @brief Umbrella header.

#define HFLOW_VERSION "0.1.0"

#include "hflow/criteria.hpp"
#include "hflow/curvature.hpp"
#include "hflow/flow.hpp"
#include "hflow/grid.hpp"
#include "hflow/io.hpp"
#include "hflow/metric.hpp"
#include "hflow/registry.hpp"
#include "hflow/sectional.hpp"
#include "hflow/tensor.hpp"
