// Copyright 2026 The sqbench Authors
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

#pragma once

#include "sqbench/analytic.hpp"
#include "sqbench/bench.hpp"
#include "sqbench/conic.hpp"
#include "sqbench/ensemble.hpp"
#include "sqbench/errors.hpp"
#include "sqbench/fock.hpp"
#include "sqbench/io.hpp"
#include "sqbench/linalg.hpp"
#include "sqbench/phase_space.hpp"
#include "sqbench/sdp.hpp"
