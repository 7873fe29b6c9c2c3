// Copyright 2026 The frs authors
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

#ifndef FRS_FRS_HPP
#define FRS_FRS_HPP

#include "frs/bures.hpp"
#include "frs/check.hpp"
#include "frs/cli.hpp"
#include "frs/common.hpp"
#include "frs/functionals.hpp"
#include "frs/grid.hpp"
#include "frs/heat_flow.hpp"
#include "frs/io.hpp"
#include "frs/measure.hpp"
#include "frs/path.hpp"
#include "frs/random.hpp"
#include "frs/solver.hpp"
#include "frs/symmat.hpp"

#endif  // FRS_FRS_HPP
