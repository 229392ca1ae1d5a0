#pragma once

#include "error.hpp"
#include "estimators.hpp"
#include "inference.hpp"
#include "montecarlo.hpp"
#include "noise.hpp"
#include "paths.hpp"
#include "quadrature.hpp"
#include "rng.hpp"
#include "sampling.hpp"
#include "weights.hpp"
