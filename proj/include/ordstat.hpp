#pragma once

#include "ordstat/errors.hpp"
#include "ordstat/special.hpp"
#include "ordstat/distributions.hpp"
#include "ordstat/rng.hpp"
#include "ordstat/parallel.hpp"
#include "ordstat/renyi.hpp"
#include "ordstat/estimate.hpp"
#include "ordstat/bounds.hpp"
#include "ordstat/estimators.hpp"
#include "ordstat/report.hpp"
#include "ordstat/harness.hpp"
#include "ordstat/config.hpp"
