// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tripdiag/harness/agents.hpp"
#include "tripdiag/harness/protocol.hpp"
#include "tripdiag/harness/run.hpp"
#include "tripdiag/harness/task.hpp"
