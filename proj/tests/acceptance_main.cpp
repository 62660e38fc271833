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


#include <iostream>
#include <thread>

#include "hxz/acceptance.hpp"

int main() {
    hxz::AcceptanceOptions opt;
    opt.jobs = std::max(1u, std::thread::hardware_concurrency());
    return hxz::run_acceptance(std::cout, opt) ? 0 : 1;
}
