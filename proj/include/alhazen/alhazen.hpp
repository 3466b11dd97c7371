#pragma once

// Umbrella header for the whole library.

#include "alhazen/caustic.hpp"
#include "alhazen/conic.hpp"
#include "alhazen/disk.hpp"
#include "alhazen/poly.hpp"
#include "alhazen/smetric.hpp"
