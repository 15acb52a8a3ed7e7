// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tripdiag/sandbox/call_text.hpp"
#include "tripdiag/sandbox/filter.hpp"
#include "tripdiag/sandbox/invoke.hpp"
#include "tripdiag/sandbox/normalize.hpp"
#include "tripdiag/sandbox/registry.hpp"
#include "tripdiag/sandbox/validate.hpp"
