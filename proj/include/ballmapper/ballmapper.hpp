// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ballmapper/altman.hpp"
#include "ballmapper/bmgraph.hpp"
#include "ballmapper/coloration.hpp"
#include "ballmapper/cover.hpp"
#include "ballmapper/csv.hpp"
#include "ballmapper/error.hpp"
#include "ballmapper/graph_json.hpp"
#include "ballmapper/layout.hpp"
#include "ballmapper/parallel.hpp"
#include "ballmapper/pipeline.hpp"
#include "ballmapper/pointcloud.hpp"
#include "ballmapper/render.hpp"
#include "ballmapper/synth.hpp"
