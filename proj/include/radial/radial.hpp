// radial: projection-free first-order methods for nonnegative maximization.
// Licensed under the Apache License, Version 2.0.
#pragma once

#include "radial/algorithms.hpp"
#include "radial/bench.hpp"
#include "radial/conditioning.hpp"
#include "radial/core.hpp"
#include "radial/errors.hpp"
#include "radial/ext_real.hpp"
#include "radial/problems.hpp"
#include "radial/rng.hpp"
