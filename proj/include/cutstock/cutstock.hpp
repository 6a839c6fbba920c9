// Copyright 2026 The cutstock-ising Authors
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

#pragma once

#include "cutstock/annealer.hpp"
#include "cutstock/bench.hpp"
#include "cutstock/errors.hpp"
#include "cutstock/instance.hpp"
#include "cutstock/ising.hpp"
#include "cutstock/layout.hpp"
#include "cutstock/oracle.hpp"
#include "cutstock/params_io.hpp"
#include "cutstock/qubo_io.hpp"
#include "cutstock/qubo_model.hpp"
#include "cutstock/rng.hpp"
