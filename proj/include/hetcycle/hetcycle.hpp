#pragma once

#include "hetcycle/errors.hpp"
#include "hetcycle/linalg.hpp"
#include "hetcycle/model.hpp"
#include "hetcycle/presets.hpp"
#include "hetcycle/spectrum.hpp"
#include "hetcycle/stability.hpp"
#include "hetcycle/integrate.hpp"
#include "hetcycle/io.hpp"
#include "hetcycle/analysis.hpp"
