#pragma once

#include <optional>
#include <vector>

#include "swing/market.hpp"

namespace swing {

// Stop/continue decision per node. Along a path the stopping level is the first
// level >= start whose node says stop; level N always stops.
class StoppingTime {
 public:
  StoppingTime() = default;
  StoppingTime(int horizon, int start, bool stop_everywhere = false);

  int horizon() const { return horizon_; }
  int start() const { return start_; }
  bool flag(NodeId v) const { return stop_[static_cast<std::size_t>(v)] != 0; }
  void set(NodeId v, bool stop) { stop_[static_cast<std::size_t>(v)] = stop ? 1 : 0; }
  // True when the time stops at v, given that it has not stopped earlier.
  bool stops_at(NodeId v) const;
  int stop_level(const ScenarioTree& tree, LeafId leaf) const;

  friend bool operator==(const StoppingTime&, const StoppingTime&) = default;

 private:
  int horizon_ = 0;
  int start_ = 0;
  std::vector<std::uint8_t> stop_;
};

struct DynkinSolution {
  AdaptedProcess value;
  StoppingTime seller_stop;  // first level >= start with X <= V
  StoppingTime buyer_stop;   // first level >= start with Y = V
};

// Backward induction V_N = Y_N, V_n = Y_n if Y_n > X_n, else
// min(X_n, max(Y_n, E[V_{n+1} | F_n])).
AdaptedProcess dynkin_value(const ScenarioTree& tree, const AdaptedProcess& cancel, const AdaptedProcess& exercise,
                            Measure measure, Execution exec = Execution::parallel);

DynkinSolution solve_dynkin(const ScenarioTree& tree, const AdaptedProcess& cancel, const AdaptedProcess& exercise,
                            Measure measure, int start_level = 0, Execution exec = Execution::parallel);

// E[ X_sigma 1{sigma < tau} + Y_tau 1{tau <= sigma} ].
Rational evaluate_game(const ScenarioTree& tree, const AdaptedProcess& cancel, const AdaptedProcess& exercise,
                       const StoppingTime& sigma, const StoppingTime& tau, Measure measure);

// Exact one-step checks at every node from `start`: V stopped at the seller
// time is a supermartingale, at the buyer time a submartingale, at their
// minimum a martingale.
struct StoppedProcessReport {
  bool supermartingale = true;
  bool submartingale = true;
  bool martingale = true;
  std::optional<NodeId> first_violation;
  bool holds() const { return supermartingale && submartingale && martingale; }
};

StoppedProcessReport check_stopped_processes(const ScenarioTree& tree, const DynkinSolution& solution, Measure measure);

}  // namespace swing
