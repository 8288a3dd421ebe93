#pragma once

#include "greedex/analysis.hpp"
#include "greedex/config.hpp"
#include "greedex/core.hpp"
#include "greedex/counterexample.hpp"
#include "greedex/dictionary.hpp"
#include "greedex/error.hpp"
#include "greedex/greedy.hpp"
#include "greedex/io.hpp"
#include "greedex/sequences.hpp"
