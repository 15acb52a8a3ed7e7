// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tripdiag/solver/enumerate.hpp"
#include "tripdiag/solver/partial.hpp"
#include "tripdiag/solver/slots.hpp"
#include "tripdiag/solver/solve.hpp"
#include "tripdiag/solver/verify.hpp"
