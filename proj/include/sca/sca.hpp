// Copyright 2026 The SCA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "sca/ambiguation.hpp"
#include "sca/codec.hpp"
#include "sca/core.hpp"
#include "sca/datagen.hpp"
#include "sca/io.hpp"
#include "sca/search.hpp"
#include "sca/sparse_code.hpp"
#include "sca/stats.hpp"
#include "sca/threat.hpp"
#include "sca/transform.hpp"
