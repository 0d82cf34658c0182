#pragma once

#include "whlab/errors.hpp"
#include "whlab/fourier.hpp"
#include "whlab/fredholm.hpp"
#include "whlab/grid.hpp"
#include "whlab/operator.hpp"
#include "whlab/singular_values.hpp"
#include "whlab/spaces.hpp"
#include "whlab/symbol.hpp"
#include "whlab/symbol_analysis.hpp"
