#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace secsim {

/// Malformed or out-of-range configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The model cannot produce a meaningful number for these inputs
/// (e.g. a closed form that goes negative or divides by zero).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Warning {
  std::string code;
  std::string message;
};

/// Collects model-validity warnings while a computation runs. Warnings are
/// keyed by code; repeated codes are counted, not duplicated.
class Diagnostics {
 public:
  void warn(const std::string& code, const std::string& message) {
    auto it = std::find_if(warnings_.begin(), warnings_.end(),
                           [&](const Entry& e) { return e.warning.code == code; });
    if (it == warnings_.end()) {
      warnings_.push_back({{code, message}, 1});
    } else {
      ++it->count;
    }
  }

  void count_clamp() {
    ++clamp_events_;
    warn("probability-clamped", "a probability left [0,1] and was clamped");
  }

  void merge(const Diagnostics& other) {
    for (const auto& e : other.warnings_) {
      for (int i = 0; i < e.count; ++i) warn(e.warning.code, e.warning.message);
    }
    clamp_events_ += other.clamp_events_;
  }

  [[nodiscard]] bool has(const std::string& code) const {
    return std::any_of(warnings_.begin(), warnings_.end(),
                       [&](const Entry& e) { return e.warning.code == code; });
  }

  [[nodiscard]] int count(const std::string& code) const {
    for (const auto& e : warnings_) {
      if (e.warning.code == code) return e.count;
    }
    return 0;
  }

  [[nodiscard]] int clamp_events() const { return clamp_events_; }
  [[nodiscard]] bool empty() const { return warnings_.empty(); }

  [[nodiscard]] std::vector<Warning> warnings() const {
    std::vector<Warning> out;
    out.reserve(warnings_.size());
    for (const auto& e : warnings_) out.push_back(e.warning);
    return out;
  }

  /// Semicolon-separated codes, in first-seen order.
  [[nodiscard]] std::string codes() const {
    std::string out;
    for (const auto& e : warnings_) {
      if (!out.empty()) out += ';';
      out += e.warning.code;
    }
    return out;
  }

 private:
  struct Entry {
    Warning warning;
    int count;
  };
  std::vector<Entry> warnings_;
  int clamp_events_ = 0;
};

}  // namespace secsim
