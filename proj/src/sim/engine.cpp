// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnetsim/sim/engine.hpp"

#include <algorithm>

namespace qnet::sim {

EntityId Engine::create_entity() {
  EntityId id{next_entity_++};
  live_entities_.insert(id.value);
  return id;
}

bool Engine::alive(EntityId entity) const {
  return live_entities_.count(entity.value) != 0;
}

void Engine::remove_entity(EntityId entity) {
  if (dead_entities_.count(entity.value)) throw AlreadyRemoved();
  if (!live_entities_.erase(entity.value)) throw DeadEntity();
  dead_entities_.insert(entity.value);
}

EventId Engine::schedule(EntityId source, SimTime delay, EventTag type) {
  if (delay < 0) throw NegativeDelay();
  if (!alive(source)) throw DeadEntity();
  Event ev;
  ev.time = now_ + delay;
  ev.type = type;
  ev.source = source;
  ev.id = EventId{next_event_++};
  ev.seq = next_seq_++;
  queue_.push(QueueEntry{ev});
  ++stats_.events_scheduled;
  return ev.id;
}

HandlerId Engine::register_handler(MatchSpec spec, Callback cb, bool collector,
                                   std::optional<EntityId> owner) {
  HandlerId id{next_handler_++};
  bool exact = spec.type.has_value() && spec.source.has_value() && !spec.id.has_value();
  handlers_.emplace(id.value, Handler{id, spec, std::move(cb), collector, owner});
  if (exact) {
    exact_[exact_key(*handlers_.at(id.value).spec.type, *handlers_.at(id.value).spec.source)]
        .push_back(id.value);
  } else {
    general_.push_back(id.value);
  }
  return id;
}

void Engine::unregister(HandlerId handler) {
  auto it = handlers_.find(handler.value);
  if (it == handlers_.end()) throw UnknownHandlerId();
  const Handler& h = it->second;
  bool exact = h.spec.type.has_value() && h.spec.source.has_value() && !h.spec.id.has_value();
  if (exact) {
    auto& v = exact_[exact_key(*h.spec.type, *h.spec.source)];
    v.erase(std::remove(v.begin(), v.end(), handler.value), v.end());
  } else {
    general_.erase(std::remove(general_.begin(), general_.end(), handler.value), general_.end());
  }
  handlers_.erase(it);
}

std::uint64_t Engine::await(const EventExpression& expr, std::function<void()> done) {
  std::uint64_t token = next_await_++;
  AwaitRecord rec;
  rec.root = expr.root();
  rec.done = std::move(done);
  awaits_.emplace(token, std::move(rec));
  AwaitRecord& r = awaits_.at(token);
  // One internal handler per atomic leaf; each latches its node.
  std::vector<const EventExpression::Node*> stack{r.root.get()};
  while (!stack.empty()) {
    const auto* n = stack.back();
    stack.pop_back();
    if (n->kind == EventExpression::Kind::Atomic) {
      r.latched[n] = false;
      HandlerId h = register_handler(
          n->spec, [this, token, n](const Event&) { expression_event(token, n); });
      r.leaf_handlers.push_back(h);
    } else {
      stack.push_back(n->left.get());
      stack.push_back(n->right.get());
    }
  }
  return token;
}

void Engine::cancel_await(std::uint64_t token) {
  auto it = awaits_.find(token);
  if (it == awaits_.end()) return;
  for (HandlerId h : it->second.leaf_handlers) {
    if (handlers_.count(h.value)) unregister(h);
  }
  awaits_.erase(it);
}

bool Engine::satisfied(const EventExpression::Node* n,
                       const std::unordered_map<const EventExpression::Node*, bool>& latched) {
  switch (n->kind) {
    case EventExpression::Kind::Atomic:
      return latched.at(n);
    case EventExpression::Kind::And:
      return satisfied(n->left.get(), latched) && satisfied(n->right.get(), latched);
    case EventExpression::Kind::Or:
      return satisfied(n->left.get(), latched) || satisfied(n->right.get(), latched);
  }
  return false;
}

void Engine::expression_event(std::uint64_t token, const EventExpression::Node* leaf) {
  auto it = awaits_.find(token);
  if (it == awaits_.end()) return;
  AwaitRecord& r = it->second;
  if (r.fired) return;
  r.latched[leaf] = true;
  if (!satisfied(r.root.get(), r.latched)) return;
  r.fired = true;
  auto done = std::move(r.done);
  cancel_await(token);
  done();
}

void Engine::deliver(const Event& ev) {
  if (dead_entities_.count(ev.source.value)) {
    ++stats_.events_suppressed;
    return;
  }
  ++stats_.events_delivered;
  // Snapshot matching handler ids, then run data collectors before ordinary
  // handlers, each group in registration order. Handlers registered or
  // unregistered by a callback take effect for later events; a handler
  // unregistered mid-delivery is skipped.
  std::vector<std::uint64_t> match;
  if (auto it = exact_.find(exact_key(ev.type, ev.source)); it != exact_.end()) {
    match.insert(match.end(), it->second.begin(), it->second.end());
  }
  match.insert(match.end(), general_.begin(), general_.end());
  std::sort(match.begin(), match.end());
  for (int collectors = 1; collectors >= 0; --collectors) {
    for (std::uint64_t hid : match) {
      auto hit = handlers_.find(hid);
      if (hit == handlers_.end()) continue;
      const Handler& h = hit->second;
      if (h.collector != (collectors == 1)) continue;
      if (!h.spec.matches(ev)) continue;
      if (h.owner && dead_entities_.count(h.owner->value)) continue;
      ++stats_.callbacks_run;
      try {
        h.cb(ev);
      } catch (const SimError&) {
        throw;
      } catch (const std::exception& e) {
        throw HandlerPanic("handler threw at t=" + std::to_string(ev.time) +
                           " for event type=" + std::to_string(ev.type) +
                           " id=" + std::to_string(ev.id.value) + ": " + e.what());
      }
    }
  }
}

Statistics Engine::run_until(SimTime t) {
  if (t < now_) throw TimeReversal();
  while (!queue_.empty() && queue_.top().ev.time <= t) {
    Event ev = queue_.top().ev;
    queue_.pop();
    now_ = ev.time;
    deliver(ev);
  }
  now_ = t;
  return stats_;
}

Statistics Engine::run(SimTime max_time) {
  while (!queue_.empty() && queue_.top().ev.time <= max_time) {
    Event ev = queue_.top().ev;
    queue_.pop();
    now_ = ev.time;
    deliver(ev);
  }
  if (max_time != std::numeric_limits<SimTime>::infinity()) now_ = max_time;
  return stats_;
}

}  // namespace qnet::sim
