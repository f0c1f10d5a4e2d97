// Umbrella header.

#pragma once

#include "jointmeas/bloch.hpp"
#include "jointmeas/errors.hpp"
#include "jointmeas/estimator.hpp"
#include "jointmeas/experiment.hpp"
#include "jointmeas/io.hpp"
#include "jointmeas/montecarlo.hpp"
#include "jointmeas/povm.hpp"
