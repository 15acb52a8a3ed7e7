// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tripdiag/diagnostics/report.hpp"
#include "tripdiag/diagnostics/score.hpp"
