// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"
#include "qnetsim/proto/protocol.hpp"

using namespace qnet;

namespace {

struct Pinger : proto::Protocol {
  net::Port* out = nullptr;
  net::Port* in = nullptr;
  int rounds = 0;
  using Protocol::Protocol;
  proto::Task run() override {
    for (int i = 0; i < 3; ++i) {
      out->tx({"ping", {}});
      co_await wait_port(*in);
      in->rx();
      ++rounds;
    }
    send_signal("DONE", rounds);
  }
};

struct Ponger : proto::Protocol {
  net::Port* out = nullptr;
  net::Port* in = nullptr;
  using Protocol::Protocol;
  proto::Task run() override {
    for (;;) {
      co_await wait_port(*in);
      in->rx();
      out->tx({"pong", {}});
    }
  }
};

}  // namespace

TEST_CASE("ping-pong over ports with a signal watcher") {
  net::Runtime rt(5);
  net::Port pa(rt, "pa"), pb(rt, "pb");
  pa.connect(pb);
  Pinger ping(rt, "ping");
  ping.add_signal("DONE");
  Ponger pong(rt, "pong");
  ping.out = &pa;
  ping.in = &pa;
  pong.out = &pb;
  pong.in = &pb;
  struct Watcher : proto::Protocol {
    Pinger* p = nullptr;
    std::int64_t got = -1;
    using Protocol::Protocol;
    proto::Task run() override { got = co_await wait_signal(*p, "DONE"); }
  };
  Watcher w(rt, "watch");
  w.p = &ping;
  pong.start();
  ping.start();
  w.start();
  rt.engine.run();
  CHECK(ping.state() == proto::ProtoState::Finished);
  CHECK(ping.rounds == 3);
  CHECK(w.got == 3);
  pong.stop();
  CHECK(pong.state() == proto::ProtoState::Idle);
}

TEST_CASE("timer waits advance time; signals latch across the wait") {
  net::Runtime rt(9);
  struct Sender : proto::Protocol {
    using Protocol::Protocol;
    proto::Task run() override {
      send_signal("S", 77);
      co_return;
    }
  };
  struct Late : proto::Protocol {
    Sender* s = nullptr;
    std::int64_t got = -1;
    double t_after = -1;
    using Protocol::Protocol;
    proto::Task run() override {
      co_await wait_timer(1000.0);
      t_after = rt().engine.now();
      got = co_await wait_signal(*s, "S");
    }
  };
  Sender s(rt, "s");
  s.add_signal("S");
  Late l(rt, "l");
  l.s = &s;
  s.start();
  l.start();
  rt.engine.run();
  CHECK(l.t_after == 1000.0);
  CHECK(l.got == 77);
}

TEST_CASE("a stopped protocol abandons its pending waits") {
  net::Runtime rt(4);
  struct Waiter : proto::Protocol {
    net::Port* in = nullptr;
    bool resumed = false;
    using Protocol::Protocol;
    proto::Task run() override {
      co_await wait_port(*in);
      resumed = true;
    }
  };
  net::Port pa(rt, "pa"), pb(rt, "pb");
  pa.connect(pb);
  Waiter w(rt, "w");
  w.in = &pb;
  w.start();
  w.stop();
  pa.tx({"late", {}});
  rt.engine.run();
  CHECK(!w.resumed);
  CHECK(w.state() == proto::ProtoState::Idle);
}

TEST_CASE("a protocol can be restarted after finishing") {
  net::Runtime rt(6);
  struct Once : proto::Protocol {
    int runs = 0;
    using Protocol::Protocol;
    proto::Task run() override {
      co_await wait_timer(10.0);
      ++runs;
    }
  };
  Once p(rt, "p");
  p.start();
  rt.engine.run();
  CHECK(p.runs == 1);
  CHECK(p.state() == proto::ProtoState::Finished);
  p.start();
  rt.engine.run();
  CHECK(p.runs == 2);
}
