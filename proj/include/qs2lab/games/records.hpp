#pragma once

#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "qs2lab/games/estimator.hpp"

namespace qs2lab::games {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

inline json to_json(const ExperimentRecord& r) {
  return json{{"schema_version", kSchemaVersion},
              {"record_type", "trial"},
              {"trial", r.trial},
              {"secret_bit", r.secret_bit},
              {"guess", r.guess},
              {"win", r.win},
              {"seed", r.seed},
              {"oracle_calls", r.oracle_calls},
              {"resampled", r.resampled}};
}

inline json to_json(const AdvantageEstimate& e) {
  return json{{"schema_version", kSchemaVersion},
              {"record_type", "estimate"},
              {"trials", e.trials},
              {"wins", e.wins},
              {"win_rate", e.win_rate},
              {"advantage", e.advantage},
              {"stderr", e.std_error}};
}

inline void write_jsonl(std::ostream& out, const std::vector<ExperimentRecord>& records, const AdvantageEstimate& e) {
  for (const auto& r : records) out << to_json(r).dump() << '\n';
  out << to_json(e).dump() << '\n';
}

inline const char* csv_header() {
  return "schema_version,record_type,trial,secret_bit,guess,win,seed,oracle_calls,resampled,trials,wins,win_rate,"
         "advantage,stderr";
}

inline std::string format_real(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

// Flat projection of the JSONL fields; cells that do not apply to a row are empty.
inline void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& records, const AdvantageEstimate& e) {
  out << csv_header() << '\n';
  for (const auto& r : records) {
    out << kSchemaVersion << ",trial," << r.trial << ',' << r.secret_bit << ',' << r.guess << ',' << (r.win ? 1 : 0)
        << ',' << r.seed << ',' << r.oracle_calls << ',' << r.resampled << ",,,,,\n";
  }
  out << kSchemaVersion << ",estimate,,,,,,,," << e.trials << ',' << e.wins << ',' << format_real(e.win_rate) << ','
      << format_real(e.advantage) << ',' << format_real(e.std_error) << '\n';
}

}  // namespace qs2lab::games
