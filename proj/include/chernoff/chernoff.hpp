#pragma once

#include "chernoff/approximants.hpp"
#include "chernoff/bounds.hpp"
#include "chernoff/constants.hpp"
#include "chernoff/contour.hpp"
#include "chernoff/ensembles.hpp"
#include "chernoff/errors.hpp"
#include "chernoff/harness/experiments.hpp"
#include "chernoff/harness/records.hpp"
#include "chernoff/harness/report.hpp"
#include "chernoff/linalg.hpp"
#include "chernoff/numrange.hpp"
#include "chernoff/poisson.hpp"
