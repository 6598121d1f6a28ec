// Copyright 2026 The NSSP Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include "nssp/commands.hpp"
#include "nssp/config.hpp"
#include "nssp/error.hpp"
#include "nssp/evaluation.hpp"
#include "nssp/noise_estimation.hpp"
#include "nssp/phase_compensation.hpp"
#include "nssp/signal_core.hpp"
#include "nssp/spectral_subtraction.hpp"
#include "nssp/wav.hpp"
