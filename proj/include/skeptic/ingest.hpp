// Copyright 2026 The Skeptic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace skeptic {

// One forecast/outcome record.  The announced value is kept pre-clamp so
// calibration bins reproduce the raw data; `p` is the playable probability.
// Dates are carried through for reporting but never affect computation.
struct Record {
  std::string date;
  double announced = 0.0;     // integer percent, or probability for decimal input
  bool percent_form = true;
  double p = 0.0;             // after boundary clamping
  int x = 0;
  std::map<std::string, double> extras;
};

class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Per-forecast-bin outcome counts, keyed by announced percent (nearest
// decile when the input was decimal probabilities).
struct CalibrationTable {
  struct Bin {
    long n1 = 0;
    long n0 = 0;
  };
  std::map<int, Bin> bins;
  bool binned_from_decimal = false;

  long total() const;
  bool operator==(const CalibrationTable& other) const {
    return bins == other.bins;
  }
};

inline bool operator==(const CalibrationTable::Bin& a, const CalibrationTable::Bin& b) {
  return a.n1 == b.n1 && a.n0 == b.n0;
}

// Percent ratio n1/total displayed to one decimal: rounded to integer
// hundredths first (half away from zero), then to tenths with ties to
// even.
double ratio_percent_1dp(long n1, long total);

// CSV schema: header `date,p,x[,extra...]`; `p` is an integer percent or
// a decimal probability, auto-detected by the presence of a decimal point
// anywhere in the column.  Boundary forecasts are substituted: 0% ->
// clamp_eps, 100% -> 1 - clamp_eps.  Malformed rows are reported with
// their line number.
std::vector<Record> load_csv(const std::string& path, double clamp_eps = 0.01);
std::vector<Record> parse_csv(std::istream& in, double clamp_eps, const std::string& source_name);

void write_csv(std::span<const Record> series, std::ostream& out);
void write_csv(std::span<const Record> series, const std::string& path);

CalibrationTable calibration_table(std::span<const Record> series);

// Emits exactly the table's per-bin counts in a seeded random day order;
// calibration of the output reproduces the input table bit-exactly.
std::vector<Record> synth_from_table(const CalibrationTable& table, std::uint64_t seed,
                                     double clamp_eps = 0.01);

}  // namespace skeptic
