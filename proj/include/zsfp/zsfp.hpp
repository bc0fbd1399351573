// Copyright 2026 The zsfp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ZSFP_ZSFP_HPP
#define ZSFP_ZSFP_HPP

#include "zsfp/common.hpp"
#include "zsfp/diagnostics.hpp"
#include "zsfp/evaluation.hpp"
#include "zsfp/game.hpp"
#include "zsfp/game_io.hpp"
#include "zsfp/learning.hpp"
#include "zsfp/matrix_game.hpp"
#include "zsfp/planning.hpp"
#include "zsfp/plot.hpp"
#include "zsfp/run.hpp"
#include "zsfp/trace_io.hpp"

#endif  // ZSFP_ZSFP_HPP
