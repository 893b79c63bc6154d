// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// Discrete-event engine: entities, typed events, handlers and composable
// event expressions. One engine instance is strictly single-threaded.

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace qnet::sim {

// Simulation time in nanoseconds. Never negative; non-decreasing while the
// engine runs.
using SimTime = double;

// Symbolic event type tag. Modules allocate their own tag values.
using EventTag = std::uint32_t;

struct EntityId {
  std::uint64_t value = 0;
  bool operator==(const EntityId&) const = default;
};

struct EventId {
  std::uint64_t value = 0;
  bool operator==(const EventId&) const = default;
};

struct HandlerId {
  std::uint64_t value = 0;
  bool operator==(const HandlerId&) const = default;
};

struct Event {
  SimTime time = 0;
  EventTag type = 0;
  EntityId source;
  EventId id;
  std::uint64_t seq = 0;  // insertion counter; tie-break key at equal time
};

// ---------------------------------------------------------------------------
// Errors

struct SimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NegativeDelay : SimError {
  NegativeDelay() : SimError("negative delay") {}
};
struct DeadEntity : SimError {
  DeadEntity() : SimError("entity is not alive") {}
};
struct AlreadyRemoved : SimError {
  AlreadyRemoved() : SimError("entity already removed") {}
};
struct UnknownHandlerId : SimError {
  UnknownHandlerId() : SimError("unknown handler id") {}
};
struct TimeReversal : SimError {
  TimeReversal() : SimError("run_until target is in the past") {}
};
// A callback threw; the offending event is carried in the message.
struct HandlerPanic : SimError {
  using SimError::SimError;
};

// ---------------------------------------------------------------------------
// Match specs and event expressions

// Wildcard match over (type, source, id); unset fields match anything.
struct MatchSpec {
  std::optional<EventTag> type;
  std::optional<EntityId> source;
  std::optional<EventId> id;

  bool matches(const Event& ev) const {
    if (type && *type != ev.type) return false;
    if (source && !(*source == ev.source)) return false;
    if (id && !(*id == ev.id)) return false;
    return true;
  }
};

// Logical combination of awaited events. Atomics latch from arming until the
// whole expression fires: And fires once both children have fired since
// arming, Or fires on the first.
class EventExpression {
 public:
  enum class Kind { Atomic, And, Or };

  struct Node {
    Kind kind;
    MatchSpec spec;  // Atomic only
    std::shared_ptr<const Node> left, right;
  };

  static EventExpression atomic(MatchSpec spec) {
    EventExpression e;
    e.root_ = std::make_shared<Node>(Node{Kind::Atomic, std::move(spec), nullptr, nullptr});
    return e;
  }
  friend EventExpression operator&(const EventExpression& a, const EventExpression& b) {
    return combine(Kind::And, a, b);
  }
  friend EventExpression operator|(const EventExpression& a, const EventExpression& b) {
    return combine(Kind::Or, a, b);
  }

  const std::shared_ptr<const Node>& root() const { return root_; }

 private:
  static EventExpression combine(Kind k, const EventExpression& a, const EventExpression& b) {
    EventExpression e;
    e.root_ = std::make_shared<Node>(Node{k, {}, a.root_, b.root_});
    return e;
  }
  std::shared_ptr<const Node> root_;
};

// ---------------------------------------------------------------------------
// Engine

struct Statistics {
  std::uint64_t events_scheduled = 0;
  std::uint64_t events_delivered = 0;
  std::uint64_t events_suppressed = 0;
  std::uint64_t callbacks_run = 0;

  // Events taken off the timeline, delivered or not.
  std::uint64_t events_processed() const { return events_delivered + events_suppressed; }
};

class Engine {
 public:
  using Callback = std::function<void(const Event&)>;

  Engine() = default;
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  SimTime now() const { return now_; }
  const Statistics& stats() const { return stats_; }

  EntityId create_entity();
  // Marks the entity dead: its pending events are suppressed and handlers it
  // owns never fire again.
  void remove_entity(EntityId entity);
  bool alive(EntityId entity) const;

  EventId schedule(EntityId source, SimTime delay, EventTag type);

  // Ordinary handlers run in registration order; data collectors run before
  // all ordinary handlers of the same event. An owned handler dies with its
  // owner entity.
  HandlerId register_handler(MatchSpec spec, Callback cb, bool collector = false,
                             std::optional<EntityId> owner = std::nullopt);
  void unregister(HandlerId handler);

  // Invokes `done` exactly once, at the SimTime the expression first becomes
  // satisfied. Returns a token that can be passed to cancel_await.
  std::uint64_t await(const EventExpression& expr, std::function<void()> done);
  void cancel_await(std::uint64_t token);

  // Processes all events with time <= t in (time, seq) order, then sets
  // now = t.
  Statistics run_until(SimTime t);

  // Runs until the timeline is empty (or `max_time` reached).
  Statistics run(SimTime max_time = std::numeric_limits<SimTime>::infinity());

 private:
  struct Handler {
    HandlerId id;
    MatchSpec spec;
    Callback cb;
    bool collector = false;
    std::optional<EntityId> owner;
  };
  struct AwaitRecord {
    std::shared_ptr<const EventExpression::Node> root;
    std::function<void()> done;
    std::unordered_map<const EventExpression::Node*, bool> latched;
    std::vector<HandlerId> leaf_handlers;
    bool fired = false;
  };
  struct QueueEntry {
    Event ev;
    bool operator>(const QueueEntry& o) const {
      if (ev.time != o.ev.time) return ev.time > o.ev.time;
      return ev.seq > o.ev.seq;
    }
  };

  void deliver(const Event& ev);
  void expression_event(std::uint64_t token, const EventExpression::Node* leaf);
  static bool satisfied(const EventExpression::Node* n,
                        const std::unordered_map<const EventExpression::Node*, bool>& latched);

  SimTime now_ = 0;
  std::uint64_t next_entity_ = 1;
  std::uint64_t next_event_ = 1;
  std::uint64_t next_handler_ = 1;
  std::uint64_t next_seq_ = 1;
  std::uint64_t next_await_ = 1;
  std::unordered_set<std::uint64_t> dead_entities_;
  std::unordered_set<std::uint64_t> live_entities_;
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<QueueEntry>> queue_;
  std::unordered_map<std::uint64_t, Handler> handlers_;
  // Fast path: handlers fully keyed by (type, source).
  std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> exact_;
  std::vector<std::uint64_t> general_;
  std::unordered_map<std::uint64_t, AwaitRecord> awaits_;
  Statistics stats_;

  static std::uint64_t exact_key(EventTag t, EntityId s) {
    return (static_cast<std::uint64_t>(t) << 40) ^ s.value;
  }
};

}  // namespace qnet::sim
