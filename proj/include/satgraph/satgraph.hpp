#pragma once

#include "satgraph/corpus_io.hpp"
#include "satgraph/deterministic.hpp"
#include "satgraph/diff.hpp"
#include "satgraph/discovery.hpp"
#include "satgraph/executor.hpp"
#include "satgraph/openapi.hpp"
#include "satgraph/plan.hpp"
#include "satgraph/registry.hpp"
#include "satgraph/store.hpp"
#include "satgraph/validate.hpp"
