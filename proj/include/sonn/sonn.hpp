#pragma once

// Umbrella header: everything needed to train, evaluate and plan.

#include "sonn/dataset.hpp"
#include "sonn/errors.hpp"
#include "sonn/experiment.hpp"
#include "sonn/io.hpp"
#include "sonn/kinematics.hpp"
#include "sonn/metric.hpp"
#include "sonn/metrics.hpp"
#include "sonn/models.hpp"
#include "sonn/network.hpp"
#include "sonn/planner.hpp"
#include "sonn/random.hpp"
#include "sonn/reduction.hpp"
