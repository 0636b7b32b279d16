#pragma once

#include "heatadapt/error.hpp"
#include "heatadapt/domain.hpp"
#include "heatadapt/fdm.hpp"
#include "heatadapt/control.hpp"
#include "heatadapt/analysis.hpp"
#include "heatadapt/scenarios.hpp"
#include "heatadapt/io.hpp"
