// Copyright 2026 The entpow Authors
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

#include "entpow/channels.hpp"
#include "entpow/entangling.hpp"
#include "entpow/errors.hpp"
#include "entpow/gate_io.hpp"
#include "entpow/gatezoo.hpp"
#include "entpow/parallel.hpp"
#include "entpow/random.hpp"
#include "entpow/search.hpp"
#include "entpow/spectrum.hpp"
#include "entpow/tensor.hpp"
#include "entpow/verify.hpp"
