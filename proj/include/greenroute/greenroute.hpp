#pragma once

#include "greenroute/errors.hpp"
#include "greenroute/physics.hpp"
#include "greenroute/network.hpp"
#include "greenroute/network_io.hpp"
#include "greenroute/generator.hpp"
#include "greenroute/speed.hpp"
#include "greenroute/routing.hpp"
#include "greenroute/analysis.hpp"
#include "greenroute/report.hpp"
