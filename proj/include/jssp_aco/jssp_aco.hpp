#pragma once

#include "instance.hpp"
#include "manifest.hpp"
#include "search_graph.hpp"
#include "schedule.hpp"
#include "colony.hpp"
#include "oracle.hpp"
#include "harness.hpp"
