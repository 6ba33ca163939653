#pragma once

#include "ifsgraph/rational.hpp"
#include "ifsgraph/field.hpp"
#include "ifsgraph/affine.hpp"
#include "ifsgraph/ifs.hpp"
#include "ifsgraph/neighbor_graph.hpp"
#include "ifsgraph/topology.hpp"
#include "ifsgraph/dimension.hpp"
#include "ifsgraph/spec_json.hpp"
#include "ifsgraph/record.hpp"
#include "ifsgraph/graph_export.hpp"
#include "ifsgraph/search.hpp"
#include "ifsgraph/render.hpp"
#include "ifsgraph/collection.hpp"
#include "ifsgraph/service.hpp"
