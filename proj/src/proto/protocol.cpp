// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnetsim/proto/protocol.hpp"

#include <algorithm>

namespace qnet::proto {

void Task::promise_type::Final::await_suspend(Handle h) const noexcept {
  if (h.promise().proto) h.promise().proto->on_finished();
}

Protocol::Protocol(net::Runtime& rt, std::string name) : rt_(&rt), name_(std::move(name)) {
  entity_ = rt_->engine.create_entity();
  add_signal(kFinishedSignal);
}

Protocol::~Protocol() {
  if (pending_token_ != 0) rt_->engine.cancel_await(pending_token_);
  if (handle_) handle_.destroy();
  if (rt_->engine.alive(entity_)) rt_->engine.remove_entity(entity_);
}

void Protocol::start() {
  if (is_running()) throw net::ConfigError("protocol '" + name_ + "' is already running");
  if (handle_) {
    handle_.destroy();
    handle_ = {};
  }
  for (Protocol* sub : subs_)
    if (!sub->is_running()) sub->start();
  state_ = ProtoState::Running;
  Task task = run();
  handle_ = task.handle;
  handle_.promise().proto = this;
  resume(handle_);
}

void Protocol::stop() {
  for (Protocol* sub : subs_) sub->stop();
  if (pending_token_ != 0) {
    rt_->engine.cancel_await(pending_token_);
    pending_token_ = 0;
  }
  if (handle_) {
    handle_.destroy();
    handle_ = {};
  }
  state_ = ProtoState::Idle;
}

void Protocol::reset() {
  stop();
  seen_.clear();
  for (auto& [label, slot] : sent_) slot = {0, 0};
  for (Protocol* sub : subs_) sub->reset();
}

void Protocol::add_subprotocol(Protocol& p) { subs_.push_back(&p); }

void Protocol::add_signal(const std::string& label) { sent_.try_emplace(label, 0, 0); }

void Protocol::send_signal(const std::string& label, std::int64_t value) {
  auto it = sent_.find(label);
  if (it == sent_.end()) throw UnknownSignal("signal '" + label + "' of " + name_);
  it->second.first += 1;
  it->second.second = value;
  // Wake any protocol awaiting a signal from this sender.
  rt_->engine.schedule(entity_, 0, net::kSignal);
}

bool Protocol::consume_signal(Protocol& sender, const std::string& label, std::int64_t& value) {
  auto it = sender.sent_.find(label);
  if (it == sender.sent_.end()) throw UnknownSignal("signal '" + label + "' of " + sender.name_);
  std::uint64_t& seen = seen_[{&sender, label}];
  if (it->second.first <= seen) return false;
  seen = it->second.first;
  value = it->second.second;
  return true;
}

void Protocol::resume(std::coroutine_handle<> h) {
  h.resume();
  if (handle_ && handle_.done() && handle_.promise().error)
    std::rethrow_exception(std::exchange(handle_.promise().error, nullptr));
}

void Protocol::on_finished() {
  state_ = ProtoState::Finished;
  send_signal(kFinishedSignal);
}

// ---------------------------------------------------------------------------
// Awaitables

void Protocol::Awaiter::await_suspend(std::coroutine_handle<> h) {
  if (proto->state_ != ProtoState::Running) throw AwaitWhileStopped();
  proto->state_ = ProtoState::Suspended;
  if (kind == Kind::Expression)
    proto->arm_expression(*this, h);
  else
    proto->arm_signal(*this, h);
}

void Protocol::arm_expression(Awaiter& a, std::coroutine_handle<> h) {
  pending_token_ = rt_->engine.await(a.expr, [this, h] {
    pending_token_ = 0;
    state_ = ProtoState::Running;
    resume(h);
  });
}

void Protocol::arm_signal(Awaiter& a, std::coroutine_handle<> h) {
  const auto spec = sim::MatchSpec{net::kSignal, a.sender->entity_, std::nullopt};
  pending_token_ = rt_->engine.await(sim::EventExpression::atomic(spec), [this, &a, h] {
    pending_token_ = 0;
    if (consume_signal(*a.sender, a.label, a.value)) {
      state_ = ProtoState::Running;
      resume(h);
    } else {
      // A different label fired; keep waiting.
      arm_signal(a, h);
    }
  });
}

Protocol::Awaiter Protocol::wait(sim::EventExpression expr) {
  if (state_ != ProtoState::Running) throw AwaitWhileStopped();
  Awaiter a{this, Awaiter::Kind::Expression, std::move(expr), nullptr, {}, false, 0};
  return a;
}

Protocol::Awaiter Protocol::wait_timer(sim::SimTime delay) {
  if (state_ != ProtoState::Running) throw AwaitWhileStopped();
  const sim::EventId id = rt_->engine.schedule(entity_, delay, net::kTimer);
  return wait(sim::EventExpression::atomic({net::kTimer, entity_, id}));
}

Protocol::Awaiter Protocol::wait_port(net::Port& port) {
  if (state_ != ProtoState::Running) throw AwaitWhileStopped();
  Awaiter a{this, Awaiter::Kind::Expression, port.input_expression(), nullptr, {}, false, 0};
  if (port.has_input()) a.ready = true;
  return a;
}

Protocol::Awaiter Protocol::wait_signal(Protocol& sender, const std::string& label) {
  if (state_ != ProtoState::Running) throw AwaitWhileStopped();
  Awaiter a{this, Awaiter::Kind::Signal, {}, &sender, label, false, 0};
  if (consume_signal(sender, label, a.value)) a.ready = true;
  return a;
}

Protocol::Awaiter Protocol::wait_finished(Protocol& sub) {
  if (sub.state_ == ProtoState::Finished) {
    // Consume the latch so a later wait sees only a fresh completion.
    Awaiter a{this, Awaiter::Kind::Signal, {}, &sub, kFinishedSignal, true, 0};
    std::int64_t v = 0;
    consume_signal(sub, kFinishedSignal, v);
    return a;
  }
  return wait_signal(sub, kFinishedSignal);
}

}  // namespace qnet::proto
