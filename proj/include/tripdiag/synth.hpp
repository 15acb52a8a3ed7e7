// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tripdiag/synth/generator.hpp"
#include "tripdiag/synth/ingest.hpp"
