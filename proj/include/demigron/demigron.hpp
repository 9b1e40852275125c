#pragma once

#include "config.hpp"
#include "demi_check.hpp"
#include "error.hpp"
#include "fractional.hpp"
#include "generators.hpp"
#include "gronwall.hpp"
#include "harness.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "sde_bem.hpp"
#include "special.hpp"
#include "stats.hpp"
#include "trajectory.hpp"
