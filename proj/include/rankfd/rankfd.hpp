#pragma once

// Umbrella header: rank-based WTS/ATS/MATS tests with wild-bootstrap
// calibration for factorial repeated-measures data with missing values,
// plus the synthetic data generators and the Monte Carlo harness.

#include "rankfd/bootstrap.hpp"
#include "rankfd/contrasts.hpp"
#include "rankfd/covariance.hpp"
#include "rankfd/datagen.hpp"
#include "rankfd/dataset.hpp"
#include "rankfd/distributions.hpp"
#include "rankfd/error.hpp"
#include "rankfd/io.hpp"
#include "rankfd/numerics.hpp"
#include "rankfd/parallel.hpp"
#include "rankfd/ranking.hpp"
#include "rankfd/rng.hpp"
#include "rankfd/simulation.hpp"
#include "rankfd/statistics.hpp"
