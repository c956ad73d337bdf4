#pragma once

// Umbrella header for the panelfx library.

#include "csv.hpp"
#include "errors.hpp"
#include "estimators.hpp"
#include "modelsel.hpp"
#include "numstats.hpp"
#include "panel.hpp"
#include "report.hpp"
#include "simulate.hpp"
