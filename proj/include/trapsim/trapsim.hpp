// Copyright 2026 The trapsim Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "trapsim/constants.hpp"
#include "trapsim/errors.hpp"
#include "trapsim/evolution.hpp"
#include "trapsim/mode_space.hpp"
#include "trapsim/oscillator.hpp"
#include "trapsim/pulses.hpp"
#include "trapsim/quadrature.hpp"
#include "trapsim/rates.hpp"
#include "trapsim/state.hpp"
#include "trapsim/trap.hpp"
