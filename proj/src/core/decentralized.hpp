#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/dual.hpp"
#include "core/model.hpp"

namespace ratagg {

enum class MessageKind { kLoadBroadcast, kSelectionReport, kLambdaUpdate };

/// Agent ids: RATs are 0..B-1, UE u is B+u, the flow scheduler is -1 and the
/// broadcast address is -2.
constexpr int kScheduler = -1;
constexpr int kBroadcast = -2;

struct Message {
  MessageKind kind;
  int round = 0;
  int from = 0;
  int to = 0;
  double value = 0.0;    // lambda, or the reported c^(rho-1) term
  double extra = 0.0;    // local subgradient on LambdaUpdate
  int selection = -1;    // chosen RAT on SelectionReport
};

struct ProtocolTrace {
  std::vector<Message> messages;  // in exchange order, when recorded
  int rounds = 0;
  std::vector<double> final_lambdas;
  std::int64_t message_count = 0;
  std::int64_t payload_bytes = 0;
  bool recorded = false;
};

struct DecentralizedResult {
  DualState state;
  ProtocolTrace trace;
};

/// Lock-step rounds of the message-exchange realization of the subgradient
/// solver: every RAT broadcasts its load indicator, every UE reports its
/// selection (and rate term) to the chosen RAT, every RAT updates its own
/// indicator with the shared step size. The load-indicator trajectory is
/// bit-identical to solve_dual under the same configuration.
///
/// When assume_csi_at_rat is set the rate term is dropped from the payload
/// byte accounting only; the exchange itself is unchanged.
DecentralizedResult run_decentralized(const Scenario& s, const SolverConfig& cfg,
                                      bool assume_csi_at_rat = false,
                                      bool record_messages = false);

std::string agent_name(int id, int num_rats);

}  // namespace ratagg
