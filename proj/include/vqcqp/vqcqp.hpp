// Copyright 2026 The vqcqp Authors.
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

#include "vqcqp/errors.hpp"
#include "vqcqp/model.hpp"
#include "vqcqp/circuit.hpp"
#include "vqcqp/estimator.hpp"
#include "vqcqp/report.hpp"
#include "vqcqp/ipm.hpp"
#include "vqcqp/hybrid.hpp"
#include "vqcqp/baseline.hpp"
#include "vqcqp/bench.hpp"
#include "vqcqp/problem_io.hpp"
#include "vqcqp/campaign.hpp"
