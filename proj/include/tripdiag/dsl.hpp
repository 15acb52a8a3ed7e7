// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tripdiag/dsl/ast.hpp"
#include "tripdiag/dsl/canonicalize.hpp"
#include "tripdiag/dsl/evaluate.hpp"
#include "tripdiag/dsl/match.hpp"
#include "tripdiag/dsl/negate.hpp"
#include "tripdiag/dsl/parser.hpp"
#include "tripdiag/dsl/render.hpp"
