#pragma once

// Umbrella header for the whole toolkit.

#include "errors.hpp"
#include "linalg.hpp"
#include "finite_diff.hpp"
#include "paracomplex.hpp"
#include "polynomial.hpp"
#include "statmanifold.hpp"
#include "geometry.hpp"
#include "frobenius.hpp"
#include "phase_space.hpp"
#include "symplectic.hpp"
#include "poisson.hpp"
#include "cli/spec.hpp"
#include "cli/registry.hpp"
#include "cli/payload.hpp"
#include "cli/checks.hpp"
#include "cli/load.hpp"
#include "cli/battery.hpp"
#include "cli/report.hpp"
#include "cli/catalog.hpp"
