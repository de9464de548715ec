#pragma once

#include "xychain/analysis.hpp"
#include "xychain/asymptotics.hpp"
#include "xychain/brute_force.hpp"
#include "xychain/error.hpp"
#include "xychain/exact.hpp"
#include "xychain/model.hpp"
#include "xychain/numeric.hpp"
#include "xychain/specfun.hpp"
#include "xychain/trace.hpp"
#include "xychain/version.hpp"
#include "xychain/winding.hpp"
