// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <vector>

#include "doctest.h"
#include "qnetsim/sim/engine.hpp"

using namespace qnet::sim;

TEST_CASE("events are delivered in time order with insertion tie-break") {
  Engine eng;
  auto e = eng.create_entity();
  std::vector<int> order;
  eng.register_handler({}, [&](const Event& ev) { order.push_back(static_cast<int>(ev.type)); });
  eng.schedule(e, 30.0, 3);
  eng.schedule(e, 10.0, 1);
  eng.schedule(e, 10.0, 2);  // same time, scheduled later
  eng.schedule(e, 20.0, 4);
  eng.run();
  CHECK(order == std::vector<int>{1, 2, 4, 3});
  CHECK(eng.now() == 30.0);
}

TEST_CASE("run_until advances time and processes only due events") {
  Engine eng;
  auto e = eng.create_entity();
  int fired = 0;
  eng.register_handler({}, [&](const Event&) { ++fired; });
  eng.schedule(e, 5.0, 1);
  eng.schedule(e, 15.0, 1);
  eng.run_until(10.0);
  CHECK(fired == 1);
  CHECK(eng.now() == 10.0);
  CHECK_THROWS_AS(eng.run_until(5.0), TimeReversal);
  eng.run();
  CHECK(fired == 2);
}

TEST_CASE("negative delays and dead sources are rejected") {
  Engine eng;
  auto e = eng.create_entity();
  CHECK_THROWS_AS(eng.schedule(e, -1.0, 1), NegativeDelay);
  eng.remove_entity(e);
  CHECK_THROWS_AS(eng.schedule(e, 1.0, 1), DeadEntity);
  CHECK_THROWS_AS(eng.remove_entity(e), AlreadyRemoved);
}

TEST_CASE("removing an entity suppresses its pending events; counters balance") {
  Engine eng;
  auto a = eng.create_entity();
  auto b = eng.create_entity();
  int fired = 0;
  eng.register_handler({}, [&](const Event&) { ++fired; });
  eng.schedule(a, 1.0, 1);
  eng.schedule(a, 2.0, 1);
  eng.schedule(b, 3.0, 1);
  eng.remove_entity(a);
  auto st = eng.run();
  CHECK(fired == 1);
  CHECK(st.events_scheduled == 3);
  CHECK(st.events_delivered == 1);
  CHECK(st.events_suppressed == 2);
  CHECK(st.events_processed() == st.events_delivered + st.events_suppressed);
}

TEST_CASE("handlers owned by a removed entity never fire again") {
  Engine eng;
  auto src = eng.create_entity();
  auto owner = eng.create_entity();
  int fired = 0;
  eng.register_handler({}, [&](const Event&) { ++fired; }, false, owner);
  eng.schedule(src, 1.0, 1);
  eng.run();
  CHECK(fired == 1);
  eng.remove_entity(owner);
  eng.schedule(src, 1.0, 1);
  eng.run();
  CHECK(fired == 1);
}

TEST_CASE("match specs filter by type, source and id") {
  Engine eng;
  auto a = eng.create_entity();
  auto b = eng.create_entity();
  int by_type = 0, by_source = 0, by_id = 0;
  eng.register_handler({7, std::nullopt, std::nullopt}, [&](const Event&) { ++by_type; });
  eng.register_handler({std::nullopt, a, std::nullopt}, [&](const Event&) { ++by_source; });
  auto id = eng.schedule(b, 1.0, 7);
  eng.register_handler({std::nullopt, std::nullopt, id}, [&](const Event&) { ++by_id; });
  eng.schedule(a, 2.0, 9);
  eng.run();
  CHECK(by_type == 1);
  CHECK(by_source == 1);
  CHECK(by_id == 1);
}

TEST_CASE("collectors run before ordinary handlers of the same event") {
  Engine eng;
  auto e = eng.create_entity();
  std::vector<int> order;
  eng.register_handler({}, [&](const Event&) { order.push_back(1); });
  eng.register_handler({}, [&](const Event&) { order.push_back(2); }, true);
  eng.schedule(e, 1.0, 1);
  eng.run();
  CHECK(order == std::vector<int>{2, 1});
}

TEST_CASE("unregister stops delivery and rejects unknown ids") {
  Engine eng;
  auto e = eng.create_entity();
  int fired = 0;
  auto h = eng.register_handler({}, [&](const Event&) { ++fired; });
  eng.schedule(e, 1.0, 1);
  eng.run();
  eng.unregister(h);
  CHECK_THROWS_AS(eng.unregister(h), UnknownHandlerId);
  eng.schedule(e, 1.0, 1);
  eng.run();
  CHECK(fired == 1);
}

TEST_CASE("and-expressions latch both sides; or fires on the first") {
  Engine eng;
  auto a = eng.create_entity();
  auto b = eng.create_entity();
  auto ea = EventExpression::atomic({1, a, std::nullopt});
  auto eb = EventExpression::atomic({2, b, std::nullopt});

  SUBCASE("and waits for the later event") {
    double fired_at = -1;
    eng.await(ea & eb, [&] { fired_at = eng.now(); });
    eng.schedule(a, 1.0, 1);
    eng.schedule(b, 5.0, 2);
    eng.run();
    CHECK(fired_at == 5.0);
  }
  SUBCASE("and latches an early event across time") {
    double fired_at = -1;
    eng.await(ea & eb, [&] { fired_at = eng.now(); });
    eng.schedule(b, 1.0, 2);
    eng.run();
    CHECK(fired_at == -1);
    eng.schedule(a, 10.0, 1);
    eng.run();
    CHECK(fired_at == 11.0);
  }
  SUBCASE("or fires once on the first match only") {
    int count = 0;
    eng.await(ea | eb, [&] { ++count; });
    eng.schedule(a, 1.0, 1);
    eng.schedule(b, 2.0, 2);
    eng.run();
    CHECK(count == 1);
  }
  SUBCASE("cancel_await prevents firing") {
    int count = 0;
    auto tok = eng.await(ea | eb, [&] { ++count; });
    eng.cancel_await(tok);
    eng.schedule(a, 1.0, 1);
    eng.run();
    CHECK(count == 0);
  }
}

TEST_CASE("nested expressions combine") {
  Engine eng;
  auto a = eng.create_entity();
  auto b = eng.create_entity();
  auto c = eng.create_entity();
  auto ex = (EventExpression::atomic({1, a, std::nullopt}) &
             EventExpression::atomic({2, b, std::nullopt})) |
            EventExpression::atomic({3, c, std::nullopt});
  double fired_at = -1;
  eng.await(ex, [&] { fired_at = eng.now(); });
  eng.schedule(a, 1.0, 1);
  eng.schedule(c, 4.0, 3);
  eng.run();
  CHECK(fired_at == 4.0);
}

TEST_CASE("a throwing callback surfaces as HandlerPanic") {
  Engine eng;
  auto e = eng.create_entity();
  eng.register_handler({}, [](const Event&) { throw std::runtime_error("boom"); });
  eng.schedule(e, 1.0, 1);
  CHECK_THROWS_AS(eng.run(), HandlerPanic);
}
