#pragma once

#include "iflow/core.hpp"
#include "iflow/flowsim.hpp"
#include "iflow/fuzzy.hpp"
#include "iflow/io.hpp"
#include "iflow/propagate.hpp"
#include "iflow/regular.hpp"
#include "iflow/slope.hpp"
#include "iflow/watersheds.hpp"
