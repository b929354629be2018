#pragma once

#include "seriesjj/circuit.hpp"
#include "seriesjj/coherence.hpp"
#include "seriesjj/constants.hpp"
#include "seriesjj/errors.hpp"
#include "seriesjj/field.hpp"
#include "seriesjj/fits.hpp"
#include "seriesjj/optim.hpp"
#include "seriesjj/traces.hpp"
