#pragma once

// Umbrella header: the full evaluation pipeline in one include.

#include "rpts/dataset.hpp"
#include "rpts/errors.hpp"
#include "rpts/graph.hpp"
#include "rpts/judge.hpp"
#include "rpts/metrics.hpp"
#include "rpts/model.hpp"
#include "rpts/report.hpp"
#include "rpts/scoring.hpp"
#include "rpts/similarity.hpp"
#include "rpts/trace_parser.hpp"
