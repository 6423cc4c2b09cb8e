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

#include "skeptic/ingest.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "skeptic/rng.hpp"

namespace skeptic {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string::npos ? comma : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& source, std::size_t line_no, const std::string& msg) {
  throw IngestError(source + ":" + std::to_string(line_no) + ": " + msg);
}

double parse_double(const std::string& token, const std::string& source, std::size_t line_no,
                    const std::string& what) {
  double v = 0.0;
  const auto* begin = token.data();
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end || token.empty()) {
    fail(source, line_no, "cannot parse " + what + " '" + token + "'");
  }
  return v;
}

// Days since 1970-01-01 -> y/m/d and back (proleptic Gregorian).
long days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long>(doe) - 719468;
}

std::string civil_from_days(long z) {
  z += 719468;
  const long era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const long y = static_cast<long>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04ld-%02u-%02u", y + (m <= 2), m, d);
  return buf;
}

}  // namespace

long CalibrationTable::total() const {
  long t = 0;
  for (const auto& [key, bin] : bins) t += bin.n1 + bin.n0;
  return t;
}

double ratio_percent_1dp(long n1, long total) {
  const long hundredths = std::llround(100.0 * 100.0 * static_cast<double>(n1) /
                                       static_cast<double>(total));
  long tenths = hundredths / 10;
  const long rem = hundredths % 10;
  if (rem > 5 || (rem == 5 && tenths % 2 == 1)) ++tenths;
  return static_cast<double>(tenths) / 10.0;
}

std::vector<Record> parse_csv(std::istream& in, double clamp_eps,
                              const std::string& source_name) {
  if (!(clamp_eps > 0.0 && clamp_eps < 0.5)) {
    throw std::invalid_argument("ingest: clamp_eps must lie in (0, 0.5)");
  }

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw IngestError(source_name + ": empty file");
  ++line_no;
  const auto header = split_csv_line(line);
  if (header.size() < 3 || trimmed(header[0]) != "date" || trimmed(header[1]) != "p" ||
      trimmed(header[2]) != "x") {
    fail(source_name, line_no, "expected header 'date,p,x[,extra...]'");
  }
  std::vector<std::string> extra_names;
  for (std::size_t j = 3; j < header.size(); ++j) extra_names.push_back(trimmed(header[j]));

  struct RawRow {
    std::size_t line_no;
    std::string date, p_token, x_token;
    std::vector<std::string> extras;
  };
  std::vector<RawRow> raw;
  bool decimal_form = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trimmed(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      fail(source_name, line_no, "expected " + std::to_string(header.size()) + " fields, got " +
                                     std::to_string(fields.size()));
    }
    RawRow row{line_no, trimmed(fields[0]), trimmed(fields[1]), trimmed(fields[2]), {}};
    for (std::size_t j = 3; j < fields.size(); ++j) row.extras.push_back(trimmed(fields[j]));
    if (row.p_token.find('.') != std::string::npos) decimal_form = true;
    raw.push_back(std::move(row));
  }
  if (raw.empty()) throw IngestError(source_name + ": no data rows");

  std::vector<Record> out;
  out.reserve(raw.size());
  for (const auto& row : raw) {
    Record rec;
    rec.date = row.date;
    if (rec.date.empty()) fail(source_name, row.line_no, "empty date");
    if (row.x_token == "0") {
      rec.x = 0;
    } else if (row.x_token == "1") {
      rec.x = 1;
    } else {
      fail(source_name, row.line_no, "outcome must be 0 or 1, got '" + row.x_token + "'");
    }
    if (decimal_form) {
      const double v = parse_double(row.p_token, source_name, row.line_no, "probability");
      if (!(v >= 0.0 && v <= 1.0)) fail(source_name, row.line_no, "probability out of [0, 1]");
      rec.percent_form = false;
      rec.announced = v;
      rec.p = v == 0.0 ? clamp_eps : (v == 1.0 ? 1.0 - clamp_eps : v);
    } else {
      long percent = 0;
      const auto* begin = row.p_token.data();
      const auto* end = begin + row.p_token.size();
      const auto [ptr, ec] = std::from_chars(begin, end, percent);
      if (ec != std::errc{} || ptr != end || row.p_token.empty()) {
        fail(source_name, row.line_no, "cannot parse percent '" + row.p_token + "'");
      }
      if (percent < 0 || percent > 100) fail(source_name, row.line_no, "percent out of [0, 100]");
      rec.percent_form = true;
      rec.announced = static_cast<double>(percent);
      rec.p = percent == 0 ? clamp_eps
                           : (percent == 100 ? 1.0 - clamp_eps
                                             : static_cast<double>(percent) / 100.0);
    }
    for (std::size_t j = 0; j < extra_names.size(); ++j) {
      rec.extras[extra_names[j]] =
          parse_double(row.extras[j], source_name, row.line_no, "extra column");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<Record> load_csv(const std::string& path, double clamp_eps) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open '" + path + "'");
  return parse_csv(in, clamp_eps, path);
}

void write_csv(std::span<const Record> series, std::ostream& out) {
  std::vector<std::string> extra_names;
  if (!series.empty()) {
    for (const auto& [name, value] : series.front().extras) extra_names.push_back(name);
  }
  out << "date,p,x";
  for (const auto& name : extra_names) out << ',' << name;
  out << '\n';
  char buf[40];
  for (const Record& rec : series) {
    out << rec.date << ',';
    if (rec.percent_form) {
      out << static_cast<long>(rec.announced);
    } else {
      std::snprintf(buf, sizeof(buf), "%.17g", rec.announced);
      out << buf;
    }
    out << ',' << rec.x;
    for (const auto& name : extra_names) {
      std::snprintf(buf, sizeof(buf), "%.17g", rec.extras.at(name));
      out << ',' << buf;
    }
    out << '\n';
  }
}

void write_csv(std::span<const Record> series, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IngestError("cannot open '" + path + "' for writing");
  write_csv(series, out);
}

CalibrationTable calibration_table(std::span<const Record> series) {
  if (series.empty()) throw IngestError("calibration: empty series");
  CalibrationTable table;
  for (const Record& rec : series) {
    int key;
    if (rec.percent_form) {
      key = static_cast<int>(rec.announced);
    } else {
      key = static_cast<int>(std::llround(rec.announced * 10.0)) * 10;
      table.binned_from_decimal = true;
    }
    auto& bin = table.bins[key];
    (rec.x == 1 ? bin.n1 : bin.n0) += 1;
  }
  return table;
}

std::vector<Record> synth_from_table(const CalibrationTable& table, std::uint64_t seed,
                                     double clamp_eps) {
  if (!(clamp_eps > 0.0 && clamp_eps < 0.5)) {
    throw std::invalid_argument("ingest: clamp_eps must lie in (0, 0.5)");
  }
  std::vector<std::pair<int, int>> days;  // (percent, outcome)
  for (const auto& [percent, bin] : table.bins) {
    days.insert(days.end(), static_cast<std::size_t>(bin.n1), {percent, 1});
    days.insert(days.end(), static_cast<std::size_t>(bin.n0), {percent, 0});
  }
  Rng rng(seed);
  rng.shuffle(days);

  const long epoch = days_from_civil(2009, 1, 1);
  std::vector<Record> out;
  out.reserve(days.size());
  for (std::size_t i = 0; i < days.size(); ++i) {
    const auto [percent, x] = days[i];
    Record rec;
    rec.date = civil_from_days(epoch + static_cast<long>(i));
    rec.percent_form = true;
    rec.announced = static_cast<double>(percent);
    rec.p = percent == 0 ? clamp_eps
                         : (percent == 100 ? 1.0 - clamp_eps
                                           : static_cast<double>(percent) / 100.0);
    rec.x = x;
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace skeptic
