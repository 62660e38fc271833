// Copyright 2026 The hxz Authors
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


#ifndef HXZ_HXZ_HPP
#define HXZ_HXZ_HPP

#include "hxz/builder.hpp"
#include "hxz/circuit.hpp"
#include "hxz/compiler.hpp"
#include "hxz/engine.hpp"
#include "hxz/errors.hpp"
#include "hxz/frame.hpp"
#include "hxz/hypergraph.hpp"
#include "hxz/rng.hpp"
#include "hxz/statevec.hpp"
#include "hxz/vbqc.hpp"
#include "hxz/verifier.hpp"

#endif
