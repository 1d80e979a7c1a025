#pragma once

// Umbrella header for the library modules.  JSON configuration support lives
// in dhs/json_io.hpp and needs the vendored json.hpp on the include path.

#include "dhs/linalg.hpp"
#include "dhs/system.hpp"
#include "dhs/dynamics.hpp"
#include "dhs/gram.hpp"
#include "dhs/random.hpp"
#include "dhs/quotient.hpp"
#include "dhs/relation.hpp"
#include "dhs/extension.hpp"
#include "dhs/halfline.hpp"
#include "dhs/suites.hpp"
