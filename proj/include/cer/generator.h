// Copyright 2026 The CER Authors
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
//

#ifndef CER_GENERATOR_H_
#define CER_GENERATOR_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cer/event.h"

namespace cer {

// Stock-like synthetic stream: events of the given types with attributes
// name (one of symbols), price, volume and stock_time. Deterministic under
// seed.
struct GeneratorConfig {
  uint64_t seed = 1;
  std::size_t events = 1000;
  std::vector<std::string> types = {"SELL", "BUY"};
  std::vector<std::string> symbols = {"INTC", "RIMM", "QQQ",  "IPIX", "AMAT",
                                      "CSCO", "YHOO", "DELL", "ORCL", "MSFT"};
  int64_t price_min = 1;
  int64_t price_max = 2500;
  // stock_time advances by a uniform step in [0, max_time_step].
  int64_t max_time_step = 2;
  // Chance per position of writing one occurrence of the planted pattern
  // (consecutive events) starting there.
  double plant_rate = 0.0;
  std::size_t plant_length = 3;
};

Stream Generate(const GeneratorConfig& config);

// Type and symbol of the k-th step (0-based) of the benchmark sequence
// pattern: types cycle SELL, BUY, BUY and symbols cycle through the
// configured list.
std::pair<std::string, std::string> SequenceStep(const GeneratorConfig& config,
                                                 std::size_t k);

// Sequence query of n steps over the generator's vocabulary. never_matching
// appends a step whose name never occurs. The window is in stock_time units
// when window_unit is "[stock_time]", else a WITHIN unit such as "events".
std::string SequenceQuery(const GeneratorConfig& config, std::size_t n,
                          bool never_matching, int64_t window,
                          const std::string& window_unit = "events");

}  // namespace cer

#endif  // CER_GENERATOR_H_
