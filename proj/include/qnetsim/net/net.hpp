// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// Component framework: ports and messages, fibre channels with delay, loss
// and noise, quantum memories with retroactive decoherence, entangled-pair
// sources, nodes and networks.

#pragma once

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qnetsim/noise/noise.hpp"
#include "qnetsim/quant/api.hpp"
#include "qnetsim/sim/engine.hpp"

namespace qnet::net {

// One engine plus one quantum context: everything a run touches.
struct Runtime {
  explicit Runtime(std::uint64_t seed) : quantum(seed) {}
  sim::Engine engine;
  quant::Context quantum;
};

// Event tags used by the framework; scenario code allocates from kUserBase.
inline constexpr sim::EventTag kPortMessage = 1;
inline constexpr sim::EventTag kProgramDone = 2;
inline constexpr sim::EventTag kTimer = 3;
inline constexpr sim::EventTag kSignal = 4;
inline constexpr sim::EventTag kSourceEmit = 5;
inline constexpr sim::EventTag kUserBase = 100;

struct NetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AlreadyConnected : NetError {
  AlreadyConnected() : NetError("port already connected") {}
};
struct EmptyPosition : NetError {
  EmptyPosition() : NetError("memory position is empty") {}
};
struct OccupiedPosition : NetError {
  OccupiedPosition() : NetError("memory position is occupied") {}
};
struct UnmappedInstruction : NetError {
  using NetError::NetError;
};
struct TopologyViolation : NetError {
  using NetError::NetError;
};
struct ConfigError : NetError {
  using NetError::NetError;
};
struct ScopeViolation : NetError {
  using NetError::NetError;
};

// Message payload item: classical values or a qubit handle.
using Item = std::variant<std::int64_t, double, std::string, quant::QubitPtr>;

struct Message {
  std::string header;
  std::vector<Item> items;
};

// A port delivers messages through engine events (tag kPortMessage, source =
// the port's entity), keeping per-port FIFO order. A forwarded port passes
// each delivery on exactly once.
class Port {
 public:
  Port(Runtime& rt, std::string name);
  Port(const Port&) = delete;
  ~Port();

  const std::string& name() const { return name_; }
  sim::EntityId entity() const { return entity_; }

  // Bidirectional peering: tx() on one side delivers to the other.
  void connect(Port& other);
  bool connected() const { return peer_ != nullptr; }
  // Deliveries to this port are re-posted to `outer` instead.
  void forward_to(Port& outer);

  // Sends through the peer (zero delay).
  void tx(Message m);
  // Schedules a delivery to this port after `delay` ns.
  void post(Message m, sim::SimTime delay = 0);

  // Consumer callback; if set, each delivered message is handed to it
  // instead of accumulating in the queue.
  void on_rx(std::function<void(Message)> cb) { rx_ = std::move(cb); }

  bool has_input() const { return !queue_.empty(); }
  Message rx();  // pops the oldest queued message

  // Await expression for "a message arrives on this port".
  sim::EventExpression input_expression() const;

 private:
  Runtime* rt_;
  std::string name_;
  sim::EntityId entity_;
  sim::HandlerId handler_;
  Port* peer_ = nullptr;
  Port* forward_ = nullptr;
  std::map<std::uint64_t, Message> pending_;  // keyed by event id
  std::deque<Message> queue_;                 // delivered, not yet consumed
  std::function<void(Message)> rx_;
};

using Property = std::variant<std::int64_t, double, std::string>;

class Node;

// Named component with typed properties and named ports. A property's type
// is fixed by its first assignment; freeze() makes the map immutable for the
// run.
class Component {
 public:
  Component(Runtime& rt, std::string name);
  virtual ~Component() = default;

  const std::string& name() const { return name_; }
  Runtime& rt() const { return *rt_; }

  Port& add_port(const std::string& port_name);
  Port& port(const std::string& port_name) const;

  // The node this component belongs to; protocols bound to another node may
  // not touch it.
  void set_scope(const Node* n) { scope_ = n; }
  const Node* scope() const { return scope_; }

  void set_property(const std::string& key, Property v);
  const Property& property(const std::string& key) const;
  bool has_property(const std::string& key) const { return props_.count(key) > 0; }
  void freeze_properties() { frozen_ = true; }

 protected:
  Runtime* rt_;
  std::string name_;
  std::map<std::string, std::unique_ptr<Port>> ports_;
  std::map<std::string, Property> props_;
  const Node* scope_ = nullptr;
  bool frozen_ = false;
};

// Fibre channel: delay = L * n_ri / c, optional loss probability and
// per-qubit noise. Loss is silent.
class FibreChannel {
 public:
  FibreChannel(Runtime& rt, double length_km);

  double delay_ns() const;
  void set_refractive_index(double n) { refractive_ = n; }
  void set_loss_probability(double p) { loss_prob_ = p; }
  void set_qubit_noise(quant::Channel ch) { qnoise_ = std::move(ch); }
  double length_km() const { return length_km_; }

  // Samples loss, applies qubit noise and schedules delivery at `to`.
  void transmit(Port& to, Message m);

 private:
  Runtime* rt_;
  double length_km_;
  double refractive_ = 1.44;
  double loss_prob_ = 0;
  std::optional<quant::Channel> qnoise_;
};

// Storage positions with lazily applied T1/T2 noise: every access ages the
// position by the elapsed time since its last update.
class QuantumMemory {
 public:
  QuantumMemory(Runtime& rt, int positions, noise::T1T2 default_noise = {});

  int size() const { return static_cast<int>(slots_.size()); }
  void set_noise(int pos, noise::T1T2 n);
  bool occupied(int pos) const { return slots_.at(pos).q != nullptr; }

  // Put applies no noise; the decoherence clock starts now.
  void put(int pos, quant::QubitPtr q);
  // Ages the position to the current time, then hands the qubit out.
  quant::QubitPtr pop(int pos);
  // Ages and returns the occupant without removing it.
  const quant::QubitPtr& access(int pos);
  // Time the current occupant has been stored.
  sim::SimTime stored_since(int pos) const;

  // Applies noise for an interval that is still in the simulated future
  // (e.g. a gate sequence of known duration): ages to now, applies dt more
  // noise and moves the position's clock to now + dt.
  void advance(int pos, double dt);

 private:
  struct Slot {
    quant::QubitPtr q;
    noise::T1T2 noise;
    sim::SimTime last_update = 0;
    sim::SimTime put_time = 0;
  };
  void age(Slot& s);
  Runtime* rt_;
  std::vector<Slot> slots_;
};

// Source of fresh bipartite entangled pairs. Triggered directly or on an
// exponential clock; emitted halves go out on the two ports if connected,
// otherwise the callback receives them.
class QSource {
 public:
  QSource(Runtime& rt, quant::Formalism f);

  // Emitted pure state; default (|00> + |11>)/sqrt(2).
  void set_state(const Eigen::Vector4cd& psi) { state_ = psi; }

  std::pair<quant::QubitPtr, quant::QubitPtr> trigger();

  // Clocked mode: emit at exponential intervals with the given rate (Hz).
  void start_clock(double rate_hz,
                   std::function<void(quant::QubitPtr, quant::QubitPtr)> on_emit);
  void stop_clock();

 private:
  void schedule_next();
  Runtime* rt_;
  quant::Formalism formalism_;
  Eigen::Vector4cd state_;
  sim::EntityId entity_{};
  sim::HandlerId handler_{};
  bool clocked_ = false;
  double rate_hz_ = 0;
  std::function<void(quant::QubitPtr, quant::QubitPtr)> on_emit_;
};

// A network node: a component that may own a memory and a processor (see
// processor.hpp) and is indexable in chain topologies.
class QuantumProcessor;
class Node : public Component {
 public:
  Node(Runtime& rt, std::string name, int index = 0);
  int index() const { return index_; }

  QuantumMemory* memory = nullptr;        // non-owning
  QuantumProcessor* processor = nullptr;  // non-owning

 private:
  int index_;
};

}  // namespace qnet::net
