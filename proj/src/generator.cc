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

#include "cer/generator.h"

#include <random>

namespace cer {

std::pair<std::string, std::string> SequenceStep(const GeneratorConfig& config,
                                                 std::size_t k) {
  static const char* kPattern[] = {"SELL", "BUY", "BUY"};
  std::string type = kPattern[k % 3];
  std::string symbol =
      config.symbols.empty() ? "X" : config.symbols[k % config.symbols.size()];
  return {type, symbol};
}

Stream Generate(const GeneratorConfig& config) {
  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<std::size_t> type_dist(0, config.types.size() - 1);
  std::uniform_int_distribution<std::size_t> sym_dist(
      0, config.symbols.empty() ? 0 : config.symbols.size() - 1);
  std::uniform_int_distribution<int64_t> price_dist(config.price_min, config.price_max);
  std::uniform_int_distribution<int64_t> volume_dist(1, 1000);
  std::uniform_int_distribution<int64_t> step_dist(0, config.max_time_step);
  std::bernoulli_distribution plant(config.plant_rate);

  Stream s;
  s.reserve(config.events);
  int64_t stock_time = 0;
  std::size_t planting = 0;
  std::size_t step = 0;
  for (std::size_t i = 0; i < config.events; ++i) {
    if (planting == 0 && config.plant_rate > 0 && plant(rng)) {
      planting = config.plant_length;
      step = 0;
    }
    DataTuple t;
    std::string symbol;
    if (planting > 0) {
      auto [type, sym] = SequenceStep(config, step++);
      t.type = type;
      symbol = sym;
      --planting;
    } else {
      t.type = config.types[type_dist(rng)];
      symbol = config.symbols.empty() ? "X" : config.symbols[sym_dist(rng)];
    }
    stock_time += step_dist(rng);
    t.position = static_cast<int64_t>(i);
    t.time = t.position;
    t.SetAttr("name", Value(symbol));
    t.SetAttr("price", Value(price_dist(rng)));
    t.SetAttr("volume", Value(volume_dist(rng)));
    t.SetAttr("stock_time", Value(stock_time));
    s.push_back(std::move(t));
  }
  return s;
}

std::string SequenceQuery(const GeneratorConfig& config, std::size_t n,
                          bool never_matching, int64_t window,
                          const std::string& window_unit) {
  std::string where, filter;
  std::size_t steps = n + (never_matching ? 1 : 0);
  for (std::size_t k = 0; k < steps; ++k) {
    bool ne = never_matching && k == n;
    auto [type, symbol] = SequenceStep(config, k);
    std::string var = ne ? "NE" : "T" + std::to_string(k + 1);
    if (ne) {
      type = "BUY";
      symbol = "NotExists";
    }
    if (k > 0) {
      where += "; ";
      filter += " AND ";
    }
    where += type + " AS " + var;
    filter += var + "[name = '" + symbol + "']";
  }
  return "SELECT * FROM S WHERE (" + where + ") FILTER " + filter + " WITHIN " +
         std::to_string(window) + " " + window_unit;
}

}  // namespace cer
