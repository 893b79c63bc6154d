// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// Coroutine protocol runtime: protocols suspend on event expressions, timers,
// port input and signals from other protocols; signals are latched per
// (waiter, label) so a send before the wait is not lost.

#pragma once

#include <coroutine>
#include <cstdint>
#include <exception>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qnetsim/net/net.hpp"

namespace qnet::proto {

struct AwaitWhileStopped : net::NetError {
  AwaitWhileStopped() : NetError("await from a protocol that is not running") {}
};
struct UnknownSignal : net::NetError {
  using NetError::NetError;
};

enum class ProtoState { Idle, Running, Suspended, Finished };

class Protocol;

// Coroutine wrapper returned by Protocol::run().
struct Task {
  struct promise_type;
  using Handle = std::coroutine_handle<promise_type>;

  struct promise_type {
    Protocol* proto = nullptr;
    std::exception_ptr error;

    Task get_return_object() { return Task{Handle::from_promise(*this)}; }
    std::suspend_always initial_suspend() noexcept { return {}; }
    struct Final {
      bool await_ready() const noexcept { return false; }
      void await_suspend(Handle h) const noexcept;
      void await_resume() const noexcept {}
    };
    Final final_suspend() noexcept { return {}; }
    void return_void() {}
    void unhandled_exception() { error = std::current_exception(); }
  };

  Handle handle;
};

// Built-in signal emitted when a protocol's coroutine completes.
inline const std::string kFinishedSignal = "FINISHED";

class Protocol {
 public:
  Protocol(net::Runtime& rt, std::string name);
  Protocol(const Protocol&) = delete;
  virtual ~Protocol();

  const std::string& name() const { return name_; }
  net::Runtime& rt() const { return *rt_; }
  ProtoState state() const { return state_; }
  bool is_running() const {
    return state_ == ProtoState::Running || state_ == ProtoState::Suspended;
  }

  // Idle or Finished -> Running; also starts registered subprotocols.
  void start();
  // Cancels the pending await, discards the coroutine and cascades to
  // subprotocols; latched signals survive a stop.
  void stop();
  // stop() plus clearing all latched signal state.
  void reset();

  void add_subprotocol(Protocol& p);
  const std::vector<Protocol*>& subprotocols() const { return subs_; }

  // Signals must be declared before use.
  void add_signal(const std::string& label);
  void send_signal(const std::string& label, std::int64_t value = 0);

  sim::EntityId entity() const { return entity_; }

  // --- awaitables; only valid inside run() of a running protocol ---

  struct [[nodiscard]] Awaiter {
    Protocol* proto;
    // Exactly one of the wait kinds below is active.
    enum class Kind { Expression, Signal } kind;
    sim::EventExpression expr;        // Expression
    Protocol* sender = nullptr;       // Signal
    std::string label;                // Signal
    bool ready = false;
    std::int64_t value = 0;

    bool await_ready() const { return ready; }
    void await_suspend(std::coroutine_handle<> h);
    std::int64_t await_resume() const { return value; }
  };

  Awaiter wait(sim::EventExpression expr);
  Awaiter wait_timer(sim::SimTime delay);
  Awaiter wait_port(net::Port& port);
  Awaiter wait_signal(Protocol& sender, const std::string& label);
  Awaiter wait_finished(Protocol& sub);

 protected:
  virtual Task run() = 0;

  net::Runtime* rt_;
  std::string name_;

 private:
  friend struct Task::promise_type::Final;
  void resume(std::coroutine_handle<> h);
  void on_finished();
  void arm_expression(Awaiter& a, std::coroutine_handle<> h);
  void arm_signal(Awaiter& a, std::coroutine_handle<> h);
  bool consume_signal(Protocol& sender, const std::string& label, std::int64_t& value);

  sim::EntityId entity_{};
  ProtoState state_ = ProtoState::Idle;
  Task::Handle handle_{};
  std::uint64_t pending_token_ = 0;  // engine await token, 0 = none

  std::map<std::string, std::pair<std::uint64_t, std::int64_t>> sent_;  // label -> (version, value)
  std::map<std::pair<const Protocol*, std::string>, std::uint64_t> seen_;
  std::vector<Protocol*> subs_;
};

// A protocol bound to one node; local() admits only components of that node.
class NodeProtocol : public Protocol {
 public:
  NodeProtocol(net::Runtime& rt, std::string name, net::Node& node)
      : Protocol(rt, std::move(name)), node_(&node) {}

  net::Node& node() const { return *node_; }

  template <class C>
  C& local(C& component) const {
    if (component.scope() != node_)
      throw net::ScopeViolation(name_ + " touched a component outside " + node_->name());
    return component;
  }

 private:
  net::Node* node_;
};

}  // namespace qnet::proto
