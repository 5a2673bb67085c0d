#pragma once

#include "fairmo/config.hpp"
#include "fairmo/csv.hpp"
#include "fairmo/dataset.hpp"
#include "fairmo/error.hpp"
#include "fairmo/experiments.hpp"
#include "fairmo/hypervolume.hpp"
#include "fairmo/linear_model.hpp"
#include "fairmo/logistic.hpp"
#include "fairmo/metrics.hpp"
#include "fairmo/mo_cmaes.hpp"
#include "fairmo/pareto.hpp"
#include "fairmo/plot_data.hpp"
#include "fairmo/report.hpp"
#include "fairmo/rng.hpp"
