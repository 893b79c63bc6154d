// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnetsim/net/net.hpp"

#include <cmath>
#include <random>

namespace qnet::net {

// ---------------------------------------------------------------------------
// Port

Port::Port(Runtime& rt, std::string name) : rt_(&rt), name_(std::move(name)) {
  entity_ = rt_->engine.create_entity();
  handler_ = rt_->engine.register_handler(
      sim::MatchSpec{kPortMessage, entity_, std::nullopt},
      [this](const sim::Event& ev) {
        auto it = pending_.find(ev.id.value);
        if (it == pending_.end()) return;
        Message m = std::move(it->second);
        pending_.erase(it);
        if (forward_ != nullptr) {
          forward_->post(std::move(m));
        } else if (rx_) {
          rx_(std::move(m));
        } else {
          queue_.push_back(std::move(m));
        }
      },
      /*collector=*/false, entity_);
}

Port::~Port() {
  if (rt_->engine.alive(entity_)) rt_->engine.remove_entity(entity_);
}

void Port::connect(Port& other) {
  if (peer_ != nullptr || other.peer_ != nullptr) throw AlreadyConnected();
  peer_ = &other;
  other.peer_ = this;
}

void Port::forward_to(Port& outer) { forward_ = &outer; }

void Port::tx(Message m) {
  if (peer_ == nullptr) throw NetError("port '" + name_ + "' is not connected");
  peer_->post(std::move(m));
}

void Port::post(Message m, sim::SimTime delay) {
  const sim::EventId id = rt_->engine.schedule(entity_, delay, kPortMessage);
  pending_.emplace(id.value, std::move(m));
}

Message Port::rx() {
  if (queue_.empty()) throw NetError("port '" + name_ + "' has no queued input");
  Message m = std::move(queue_.front());
  queue_.pop_front();
  return m;
}

sim::EventExpression Port::input_expression() const {
  return sim::EventExpression::atomic({kPortMessage, entity_, std::nullopt});
}

// ---------------------------------------------------------------------------
// Component

Component::Component(Runtime& rt, std::string name) : rt_(&rt), name_(std::move(name)) {}

Port& Component::add_port(const std::string& port_name) {
  auto [it, inserted] = ports_.try_emplace(port_name);
  if (!inserted) throw ConfigError("duplicate port '" + port_name + "'");
  it->second = std::make_unique<Port>(*rt_, name_ + "." + port_name);
  return *it->second;
}

Port& Component::port(const std::string& port_name) const {
  auto it = ports_.find(port_name);
  if (it == ports_.end()) throw ConfigError("no port '" + port_name + "' on " + name_);
  return *it->second;
}

void Component::set_property(const std::string& key, Property v) {
  if (frozen_) throw ConfigError("properties of " + name_ + " are frozen");
  auto it = props_.find(key);
  if (it != props_.end() && it->second.index() != v.index())
    throw ConfigError("property '" + key + "' changes type");
  props_[key] = std::move(v);
}

const Property& Component::property(const std::string& key) const {
  auto it = props_.find(key);
  if (it == props_.end()) throw ConfigError("no property '" + key + "' on " + name_);
  return it->second;
}

// ---------------------------------------------------------------------------
// FibreChannel

namespace {
// Vacuum light speed in km/ns (299792.458 km/s / 1e9 ns per s).
constexpr double kLightSpeed = 299792.458e-9;
}  // namespace

FibreChannel::FibreChannel(Runtime& rt, double length_km) : rt_(&rt), length_km_(length_km) {
  if (length_km < 0) throw ConfigError("negative fibre length");
}

double FibreChannel::delay_ns() const { return length_km_ * refractive_ / kLightSpeed; }

void FibreChannel::transmit(Port& to, Message m) {
  if (loss_prob_ > 0 && rt_->quantum.uniform() < loss_prob_) {
    // Lost in transit: qubit payloads are traced out, nothing is delivered.
    for (auto& item : m.items)
      if (auto* q = std::get_if<quant::QubitPtr>(&item); q && *q && (*q)->alive())
        quant::api::discard(rt_->quantum, *q);
    return;
  }
  if (qnoise_) {
    for (auto& item : m.items)
      if (auto* q = std::get_if<quant::QubitPtr>(&item); q && *q && (*q)->alive())
        quant::api::apply_channel(rt_->quantum, *qnoise_, {*q});
  }
  to.post(std::move(m), delay_ns());
}

// ---------------------------------------------------------------------------
// QuantumMemory

QuantumMemory::QuantumMemory(Runtime& rt, int positions, noise::T1T2 default_noise)
    : rt_(&rt) {
  if (positions < 1) throw ConfigError("memory needs at least one position");
  slots_.resize(positions);
  for (auto& s : slots_) s.noise = default_noise;
}

void QuantumMemory::set_noise(int pos, noise::T1T2 n) { slots_.at(pos).noise = n; }

void QuantumMemory::age(Slot& s) {
  const sim::SimTime now = rt_->engine.now();
  const double dt = now - s.last_update;
  noise::t1t2_apply(rt_->quantum, s.q, dt, s.noise);
  s.last_update = now;
}

void QuantumMemory::put(int pos, quant::QubitPtr q) {
  Slot& s = slots_.at(pos);
  if (s.q) throw OccupiedPosition();
  s.q = std::move(q);
  s.last_update = rt_->engine.now();
  s.put_time = s.last_update;
}

quant::QubitPtr QuantumMemory::pop(int pos) {
  Slot& s = slots_.at(pos);
  if (!s.q) throw EmptyPosition();
  age(s);
  return std::move(s.q);
}

const quant::QubitPtr& QuantumMemory::access(int pos) {
  Slot& s = slots_.at(pos);
  if (!s.q) throw EmptyPosition();
  age(s);
  return s.q;
}

void QuantumMemory::advance(int pos, double dt) {
  if (dt < 0) throw ConfigError("advance needs dt >= 0");
  Slot& s = slots_.at(pos);
  if (!s.q) throw EmptyPosition();
  age(s);
  noise::t1t2_apply(rt_->quantum, s.q, dt, s.noise);
  s.last_update += dt;
}

sim::SimTime QuantumMemory::stored_since(int pos) const {
  const Slot& s = slots_.at(pos);
  if (!s.q) throw EmptyPosition();
  return s.put_time;
}

// ---------------------------------------------------------------------------
// QSource

QSource::QSource(Runtime& rt, quant::Formalism f) : rt_(&rt), formalism_(f) {
  state_ << 1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0);
  entity_ = rt_->engine.create_entity();
}

std::pair<quant::QubitPtr, quant::QubitPtr> QSource::trigger() {
  auto qs = quant::api::create_qubits(rt_->quantum, 2, formalism_);
  Eigen::Vector4cd bell;
  bell << 1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0);
  if (state_ == bell) {
    quant::api::apply(rt_->quantum, quant::ops::h(), {qs[0]});
    quant::api::apply(rt_->quantum, quant::ops::cnot(), {qs[0], qs[1]});
  } else {
    quant::api::assign_dm(rt_->quantum, qs, state_ * state_.adjoint());
  }
  return {qs[0], qs[1]};
}

void QSource::start_clock(double rate_hz,
                          std::function<void(quant::QubitPtr, quant::QubitPtr)> on_emit) {
  if (!(rate_hz > 0)) throw ConfigError("source rate must be positive");
  if (clocked_) throw ConfigError("source clock already running");
  clocked_ = true;
  rate_hz_ = rate_hz;
  on_emit_ = std::move(on_emit);
  handler_ = rt_->engine.register_handler(
      sim::MatchSpec{kSourceEmit, entity_, std::nullopt},
      [this](const sim::Event&) {
        if (!clocked_) return;
        auto [a, b] = trigger();
        on_emit_(std::move(a), std::move(b));
        if (clocked_) schedule_next();
      },
      /*collector=*/false, entity_);
  schedule_next();
}

void QSource::stop_clock() {
  if (!clocked_) return;
  clocked_ = false;
  rt_->engine.unregister(handler_);
}

void QSource::schedule_next() {
  const double mean_ns = 1e9 / rate_hz_;
  const double wait = std::exponential_distribution<double>(1.0 / mean_ns)(rt_->quantum.rng);
  rt_->engine.schedule(entity_, wait, kSourceEmit);
}

// ---------------------------------------------------------------------------
// Node

Node::Node(Runtime& rt, std::string name, int index)
    : Component(rt, std::move(name)), index_(index) {
  set_scope(this);
}

}  // namespace qnet::net
