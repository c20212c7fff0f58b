// Umbrella header: best uniform approximation on discrete data, optimality
// certification through convex geometry, and the necessary-condition checks.
#pragma once

#include "cheb/core.hpp"
#include "cheb/lp.hpp"
#include "cheb/basis.hpp"
#include "cheb/approx.hpp"
#include "cheb/optimality.hpp"
#include "cheb/reduction.hpp"
#include "cheb/io.hpp"
#include "cheb/driver.hpp"
