#pragma once

#include "wsndct/clustering.hpp"
#include "wsndct/config.hpp"
#include "wsndct/csv.hpp"
#include "wsndct/deployment.hpp"
#include "wsndct/energy.hpp"
#include "wsndct/error.hpp"
#include "wsndct/geometry.hpp"
#include "wsndct/harness.hpp"
#include "wsndct/manifest.hpp"
#include "wsndct/rng.hpp"
#include "wsndct/routing.hpp"
#include "wsndct/signals.hpp"
#include "wsndct/transform.hpp"
#include "wsndct/version.hpp"
