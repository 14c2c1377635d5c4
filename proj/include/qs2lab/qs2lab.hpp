#pragma once

#include "qs2lab/attacks/registry.hpp"
#include "qs2lab/classify/classify.hpp"
#include "qs2lab/games/records.hpp"
#include "qs2lab/operators/verify.hpp"
#include "qs2lab/qsim/ops.hpp"
#include "qs2lab/schemes/descriptor.hpp"
