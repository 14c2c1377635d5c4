#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "qs2lab/games/games.hpp"

namespace qs2lab::games {

struct AdvantageEstimate {
  std::uint64_t trials = 0;
  std::uint64_t wins = 0;
  double win_rate = 0.0;
  double advantage = 0.0;
  double std_error = 0.0;
};

using TrialFn = std::function<ExperimentRecord(std::uint64_t trial, std::uint64_t seed)>;

inline AdvantageEstimate summarize(const std::vector<ExperimentRecord>& records) {
  AdvantageEstimate e;
  e.trials = records.size();
  for (const auto& r : records) e.wins += r.win;
  if (e.trials == 0) return e;
  e.win_rate = static_cast<double>(e.wins) / static_cast<double>(e.trials);
  e.advantage = std::abs(e.win_rate - 0.5);
  e.std_error = std::sqrt(e.win_rate * (1.0 - e.win_rate) / static_cast<double>(e.trials));
  return e;
}

// QS2LAB_THREADS caps parallelism; unset means one thread per hardware core.
inline unsigned thread_count() {
  unsigned hw = std::max(1U, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QS2LAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) {
      fail(Errc::ConfigError, std::string("QS2LAB_THREADS must be a positive integer, got '") + env + "'");
    }
    return static_cast<unsigned>(v);
  }
  return hw;
}

inline std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial) { return derive_seed(base_seed, trial); }

// Runs `trials` independent trials with seeds derived from (base_seed, index).
// Records come back in trial order whatever the thread interleaving, so the
// aggregate and any written stream are reproducible.
inline AdvantageEstimate estimate_advantage(const TrialFn& game, std::uint64_t trials, std::uint64_t base_seed,
                                            std::vector<ExperimentRecord>* records_out = nullptr,
                                            unsigned threads = 0) {
  if (trials == 0) fail(Errc::InvalidArgument, "estimate needs at least one trial");
  if (threads == 0) threads = thread_count();
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, trials));
  std::vector<ExperimentRecord> records(trials);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::uint64_t i = next.fetch_add(1); i < trials; i = next.fetch_add(1)) {
      try {
        records[i] = game(i, trial_seed(base_seed, i));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(trials);
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  AdvantageEstimate e = summarize(records);
  if (records_out) *records_out = std::move(records);
  return e;
}

template <class Game>
AdvantageEstimate estimate_advantage(const Game& game, std::uint64_t trials, std::uint64_t base_seed,
                                     std::vector<ExperimentRecord>* records_out = nullptr, unsigned threads = 0) {
  return estimate_advantage(TrialFn([&game](std::uint64_t i, std::uint64_t s) { return game.run(i, s); }), trials,
                            base_seed, records_out, threads);
}

}  // namespace qs2lab::games
