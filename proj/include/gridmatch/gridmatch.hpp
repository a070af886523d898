/*
 * Copyright 2026 The gridmatch Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "bench.hpp"
#include "circle_growing.hpp"
#include "core.hpp"
#include "distance_sorting.hpp"
#include "hybrid.hpp"
#include "io.hpp"
#include "kmeans.hpp"
#include "match_state.hpp"
#include "nn_backend.hpp"
#include "nn_chain.hpp"
#include "offsets.hpp"
#include "random.hpp"
#include "render.hpp"
#include "verify.hpp"
