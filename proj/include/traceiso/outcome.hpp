#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace traceiso {

/// A "No" answer together with the gate that produced it.
struct Rejection {
  std::string gate;
  std::string detail;
};

template <class T>
class Outcome {
 public:
  Outcome(T value) : v_(std::move(value)) {}
  Outcome(Rejection r) : v_(std::move(r)) {}

  bool ok() const { return v_.index() == 0; }
  explicit operator bool() const { return ok(); }

  const T& value() const {
    if (!ok()) throw std::logic_error("Outcome holds a rejection at gate '" + rejection().gate + "'");
    return std::get<0>(v_);
  }
  T& value() {
    if (!ok()) throw std::logic_error("Outcome holds a rejection at gate '" + rejection().gate + "'");
    return std::get<0>(v_);
  }
  const T& operator*() const { return value(); }
  T& operator*() { return value(); }
  const T* operator->() const { return &value(); }
  T* operator->() { return &value(); }

  const Rejection& rejection() const { return std::get<1>(v_); }

 private:
  std::variant<T, Rejection> v_;
};

/// Gates passed and PIT trials spent during one pipeline run.
struct RunLog {
  std::vector<std::string> gates;
  long pit_trials = 0;

  void pass(std::string gate) { gates.push_back(std::move(gate)); }
};

inline void log_pass(RunLog* log, std::string gate) {
  if (log) log->pass(std::move(gate));
}
inline void log_pit(RunLog* log, long trials) {
  if (log) log->pit_trials += trials;
}

}  // namespace traceiso
