#pragma once

#include <backcast/analysis.hpp>
#include <backcast/errors.hpp>
#include <backcast/heat_model.hpp>
#include <backcast/kernel.hpp>
#include <backcast/noise.hpp>
#include <backcast/regularizer.hpp>
#include <backcast/spectral.hpp>
