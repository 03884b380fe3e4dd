#pragma once

#include "chebfolio/capm.hpp"
#include "chebfolio/chebyshev.hpp"
#include "chebfolio/error.hpp"
#include "chebfolio/fitting.hpp"
#include "chebfolio/heatmap.hpp"
#include "chebfolio/ingestion.hpp"
#include "chebfolio/pipeline.hpp"
#include "chebfolio/report.hpp"
#include "chebfolio/similarity.hpp"
