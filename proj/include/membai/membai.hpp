#pragma once

// Umbrella header.

#include "membai/errors.hpp"
#include "membai/bandit/environment.hpp"
#include "membai/bandit/policies.hpp"
#include "membai/bandit/schedule.hpp"
#include "membai/bandit/stats.hpp"
#include "membai/design_space.hpp"
#include "membai/memory/cost.hpp"
#include "membai/memory/device.hpp"
#include "membai/memory/model.hpp"
#include "membai/memory/tech.hpp"
#include "membai/mc/memory_env.hpp"
#include "membai/mc/synthetic_env.hpp"
#include "membai/mc/variation.hpp"
#include "membai/harness/config.hpp"
#include "membai/harness/experiment.hpp"
#include "membai/harness/report.hpp"
#include "membai/harness/seed.hpp"
