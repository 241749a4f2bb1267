#pragma once

#include "dicke/errors.hpp"
#include "dicke/model.hpp"
#include "dicke/hilbert.hpp"
#include "dicke/nelder_mead.hpp"
#include "dicke/variational.hpp"
#include "dicke/spectrum.hpp"
#include "dicke/analysis.hpp"
#include "dicke/sweep_csv.hpp"
#include "dicke/selfcheck.hpp"
