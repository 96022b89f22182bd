// Copyright 2026 The gaiauction Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GAIAUCTION_GAIAUCTION_HPP
#define GAIAUCTION_GAIAUCTION_HPP

/// \file gaiauction.hpp
/// Umbrella header.

#include <gaiauction/additive_approx.hpp>
#include <gaiauction/auction_engine.hpp>
#include <gaiauction/bidders.hpp>
#include <gaiauction/core_model.hpp>
#include <gaiauction/decomposition.hpp>
#include <gaiauction/experiments.hpp>
#include <gaiauction/gai_optim.hpp>
#include <gaiauction/golden.hpp>
#include <gaiauction/json_io.hpp>
#include <gaiauction/price_state.hpp>
#include <gaiauction/random.hpp>
#include <gaiauction/utility_gen.hpp>

#endif  // GAIAUCTION_GAIAUCTION_HPP
